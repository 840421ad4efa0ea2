#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cft {

using Complex = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using VecR = Eigen::VectorXd;
using MatR = Eigen::MatrixXd;

constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};
struct ToleranceError : Error {
    explicit ToleranceError(const std::string& msg) : Error(msg) {}
};
struct SingularityError : Error {
    explicit SingularityError(const std::string& msg) : Error(msg) {}
};

// Deterministic 64-bit generator (splitmix64), uniform doubles in [0,1).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state_(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double normal() {
        // Box-Muller; one value per call keeps the stream reproducible.
        double u1 = std::max(uniform(), 1e-300);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }
    Complex cnormal() { return Complex(normal(), normal()); }
    VecC cvector(int n) {
        VecC v(n);
        for (int i = 0; i < n; ++i) v[i] = cnormal();
        return v;
    }
    VecC unit_cvector(int n) {
        VecC v = cvector(n);
        double s = v.norm();
        while (s < 1e-12) { v = cvector(n); s = v.norm(); }
        return v / s;
    }

private:
    std::uint64_t state_;
};

// Halton low-discrepancy sequence; index offset acts as the seed.
class Halton {
public:
    Halton(int dim, std::uint64_t offset = 1) : dim_(dim), index_(offset) {
        static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                     31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
        if (dim < 1 || dim > 20) throw InvalidArgument("halton: dim out of range");
        for (int i = 0; i < dim; ++i) bases_.push_back(primes[i]);
    }
    std::vector<double> next() {
        std::vector<double> pt(dim_);
        for (int i = 0; i < dim_; ++i) pt[i] = radical_inverse(index_, bases_[i]);
        ++index_;
        return pt;
    }

private:
    static double radical_inverse(std::uint64_t n, int base) {
        double inv = 1.0 / base, f = inv, x = 0.0;
        while (n > 0) {
            x += f * double(n % base);
            n /= base;
            f *= inv;
        }
        return x;
    }
    int dim_;
    std::uint64_t index_;
    std::vector<int> bases_;
};

// Acklam's rational approximation of the inverse normal CDF (~1e-9 absolute).
double inverse_normal_cdf(double p);

// Quasi-uniform points on the unit sphere of R^d (Halton -> Gaussian -> normalize).
std::vector<VecR> sphere_points(int d, int count, std::uint64_t seed = 1);

// Quasi-uniform points in the unit ball of C^n (|v| < 1).
std::vector<VecC> complex_ball_points(int n, int count, std::uint64_t seed = 1);

// Quasi-uniform unit vectors in C^n.
std::vector<VecC> complex_sphere_points(int n, int count, std::uint64_t seed = 1);

// Quadrature on the unit sphere of C^n; weights sum to area(S^{2n-1}).
// Product rule (spectral for smooth integrands) for n <= 2, quasi-random
// equal weights beyond.
struct SphereQuad {
    std::vector<VecC> dirs;
    std::vector<double> weights;
};
SphereQuad sphere_quadrature(int n, int resolution, std::uint64_t seed = 1);

// Increasing-function root solve on [lo, hi]: returns x with f(x) ~= target.
// f need not be strictly monotone; it is bisected on sign of f - target.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target, double reltol, int maxiter = 200);

// Golden-section maximization of f over [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, double tol,
                  int maxiter = 120);

// C-infinity step built from exp(-1/x) glue: value 1 for x <= 0, 0 for x >= 1.
struct SmoothStep {
    static double value(double x);
    static double deriv(double x);
    static double deriv2(double x);
};

// Quintic polynomial step: value 1 for x <= 0, 0 for x >= 1, C^2 across the joins.
struct QuinticStep {
    static double value(double x);
    static double deriv(double x);
    static double deriv2(double x);
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic indexed parallel map: body(i) for i in [0, count).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int workers = 0);

int default_workers();
void set_default_workers(int w);

// FNV-1a hash of a double array, for probe-set fingerprints in reports.
std::string fnv_hex(const std::vector<double>& data);

inline bool approx_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace cft
