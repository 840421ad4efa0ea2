#pragma once

#include <vector>

#include "cft/util.hpp"

namespace cft {

// Holomorphic polynomial in n complex variables, stored as a term list.
class Polynomial {
public:
    struct Term {
        std::vector<int> exponents;
        Complex coeff;
    };

    Polynomial(int nvars, std::vector<Term> terms) : n_(nvars), terms_(std::move(terms)) {
        for (const auto& t : terms_)
            if ((int)t.exponents.size() != n_)
                throw InvalidArgument("polynomial: exponent arity mismatch");
    }

    static Polynomial coordinate(int nvars, int var) {
        std::vector<int> e(nvars, 0);
        e[var] = 1;
        return Polynomial(nvars, {{e, Complex(1, 0)}});
    }

    static Polynomial affine(int nvars, int var, Complex shift) {
        // z_var - shift
        std::vector<int> e(nvars, 0), z(nvars, 0);
        e[var] = 1;
        return Polynomial(nvars, {{e, Complex(1, 0)}, {z, -shift}});
    }

    int nvars() const { return n_; }
    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const {
        for (const auto& t : terms_)
            if (std::abs(t.coeff) > 0) return false;
        return true;
    }

    Complex eval(const VecC& z) const {
        Complex acc(0, 0);
        for (const auto& t : terms_) {
            Complex m = t.coeff;
            for (int i = 0; i < n_; ++i)
                for (int k = 0; k < t.exponents[i]; ++k) m *= z[i];
            acc += m;
        }
        return acc;
    }

    Polynomial derivative(int var) const {
        std::vector<Term> out;
        for (const auto& t : terms_) {
            if (t.exponents[var] == 0) continue;
            Term d = t;
            d.coeff *= double(t.exponents[var]);
            d.exponents[var] -= 1;
            out.push_back(d);
        }
        if (out.empty()) out.push_back({std::vector<int>(n_, 0), Complex(0, 0)});
        return Polynomial(n_, out);
    }

    VecC gradient(const VecC& z) const {
        VecC g(n_);
        for (int i = 0; i < n_; ++i) g[i] = derivative(i).eval(z);
        return g;
    }

    int degree_in(int var) const {
        int d = 0;
        for (const auto& t : terms_)
            if (std::abs(t.coeff) > 0) d = std::max(d, t.exponents[var]);
        return d;
    }

    // Coefficients of the univariate polynomial in `var` with the remaining
    // variables frozen at `z` (ascending degree).
    std::vector<Complex> restrict_to(int var, const VecC& z) const {
        std::vector<Complex> coeffs(degree_in(var) + 1, Complex(0, 0));
        for (const auto& t : terms_) {
            Complex m = t.coeff;
            for (int i = 0; i < n_; ++i) {
                if (i == var) continue;
                for (int k = 0; k < t.exponents[i]; ++k) m *= z[i];
            }
            coeffs[t.exponents[var]] += m;
        }
        return coeffs;
    }

private:
    int n_;
    std::vector<Term> terms_;
};

// Roots of a univariate complex polynomial via the companion matrix.
std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs);

}  // namespace cft
