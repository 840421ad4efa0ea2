#pragma once

#include "cft/util.hpp"

namespace cft {

// Exterior algebra over the 2n generators dz_1..dz_n, dzbar_1..dzbar_n.
// A monomial is a bitmask (bit a: dz_{a+1}; bit n+a: dzbar_{a+1}); coefficients
// are stored densely against the canonical ascending generator order.
class WedgeForm {
public:
    explicit WedgeForm(int n) : n_(n), coeffs_(std::size_t(1) << (2 * n), Complex(0, 0)) {
        if (n < 1 || n > 8) throw InvalidArgument("wedge: dimension out of range");
    }

    int nvars() const { return n_; }

    static WedgeForm scalar(int n, Complex c) {
        WedgeForm f(n);
        f.coeffs_[0] = c;
        return f;
    }
    // sum_i a_i dz_i
    static WedgeForm one_form_dz(int n, const VecC& a) {
        WedgeForm f(n);
        for (int i = 0; i < n; ++i) f.coeffs_[1u << i] = a[i];
        return f;
    }
    // sum_k b_k dzbar_k
    static WedgeForm one_form_dzbar(int n, const VecC& b) {
        WedgeForm f(n);
        for (int k = 0; k < n; ++k) f.coeffs_[1u << (n + k)] = b[k];
        return f;
    }
    // sum_{k,i} m(k,i) dzbar_k ^ dz_i
    static WedgeForm two_form_dzbar_dz(int n, const MatC& m) {
        WedgeForm f(n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                // canonical order puts dz_i before dzbar_k: one transposition
                f.coeffs_[(1u << i) | (1u << (n + k))] -= m(k, i);
            }
        return f;
    }

    WedgeForm operator+(const WedgeForm& o) const {
        WedgeForm f(n_);
        for (std::size_t m = 0; m < coeffs_.size(); ++m) f.coeffs_[m] = coeffs_[m] + o.coeffs_[m];
        return f;
    }
    WedgeForm& operator+=(const WedgeForm& o) {
        for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += o.coeffs_[m];
        return *this;
    }
    WedgeForm operator*(Complex s) const {
        WedgeForm f(n_);
        for (std::size_t m = 0; m < coeffs_.size(); ++m) f.coeffs_[m] = coeffs_[m] * s;
        return f;
    }

    WedgeForm wedge(const WedgeForm& o) const {
        WedgeForm f(n_);
        for (std::size_t ma = 0; ma < coeffs_.size(); ++ma) {
            if (coeffs_[ma] == Complex(0, 0)) continue;
            for (std::size_t mb = 0; mb < o.coeffs_.size(); ++mb) {
                if (o.coeffs_[mb] == Complex(0, 0) || (ma & mb)) continue;
                f.coeffs_[ma | mb] +=
                    double(merge_sign(unsigned(ma), unsigned(mb))) * coeffs_[ma] * o.coeffs_[mb];
            }
        }
        return f;
    }

    WedgeForm power(int k) const {
        WedgeForm acc = scalar(n_, Complex(1, 0));
        for (int i = 0; i < k; ++i) acc = acc.wedge(*this);
        return acc;
    }

    Complex coefficient(unsigned mask) const { return coeffs_[mask]; }

    // Coefficient of the full top monomial dz_1..dz_n ^ dzbar_1..dzbar_n.
    Complex top_coefficient() const { return coeffs_[(1u << (2 * n_)) - 1u]; }

    double coefficient_mass() const {
        double s = 0;
        for (const auto& c : coeffs_) s += std::abs(c);
        return s;
    }

    // Bidegree-slot evaluation: dz slots take `holo` vectors in order, dzbar
    // slots take `anti` vectors (conjugated componentwise).
    Complex eval_slots(const std::vector<VecC>& holo, const std::vector<VecC>& anti) const {
        Complex acc(0, 0);
        for (std::size_t mask = 0; mask < coeffs_.size(); ++mask) {
            Complex c = coeffs_[mask];
            if (c == Complex(0, 0)) continue;
            int p = 0, q = 0;
            for (int i = 0; i < n_; ++i) {
                if (mask & (1u << i)) ++p;
                if (mask & (1u << (n_ + i))) ++q;
            }
            if (p != (int)holo.size() || q != (int)anti.size()) continue;
            MatC mh(p, p), ma(q, q);
            int row = 0;
            for (int i = 0; i < n_; ++i)
                if (mask & (1u << i)) {
                    for (int m = 0; m < p; ++m) mh(row, m) = holo[m][i];
                    ++row;
                }
            row = 0;
            for (int i = 0; i < n_; ++i)
                if (mask & (1u << (n_ + i))) {
                    for (int m = 0; m < q; ++m) ma(row, m) = std::conj(anti[m][i]);
                    ++row;
                }
            Complex dh = p > 0 ? mh.determinant() : Complex(1, 0);
            Complex da = q > 0 ? ma.determinant() : Complex(1, 0);
            acc += c * dh * da;
        }
        return acc;
    }

private:
    // Sign of sorting the concatenation (a|b) into canonical ascending order,
    // with a and b already ascending and disjoint.
    int merge_sign(unsigned a, unsigned b) const {
        int inversions = 0;
        int bcount = 0;
        for (int bit = 0; bit < 2 * n_; ++bit) {
            if (b & (1u << bit)) ++bcount;
            else if (a & (1u << bit)) inversions += bcount;
        }
        return (inversions % 2 == 0) ? 1 : -1;
    }

    int n_;
    std::vector<Complex> coeffs_;
};

}  // namespace cft
