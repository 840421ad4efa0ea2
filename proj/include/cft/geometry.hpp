#pragma once

#include <limits>
#include <optional>

#include "cft/domain.hpp"

namespace cft {

struct TauOptions {
    int circle_samples = 64;     // coarse scan of the circle maximum
    double reltol = 1e-8;        // bisection tolerance on the radius
    double angle_tol = 1e-10;    // golden-section window for the circle maximum
    int max_doublings = 60;
};

// tau(z, v, eps): largest t with |r(z + lambda v) - r(z)| < eps on |lambda| < t.
double tau(const Domain& domain, const VecC& z, const VecC& v, double eps,
           const TauOptions& opts = {});

struct ExtremalFrame {
    VecC center;
    double epsilon = 0;
    MatC vectors;  // columns w*_1..w*_n, w*_1 the outward normal
    VecR radii;    // tau_j, re-evaluated through tau()
};

struct FrameOptions {
    int sphere_samples = 256;    // per remaining complex dimension pair
    int polish_iters = 40;
    TauOptions tau;
    std::uint64_t seed = 7;
};

ExtremalFrame extremal_basis(const Domain& domain, const VecC& z, double eps,
                             const FrameOptions& opts = {});

// McNeal polydisc spanned by an extremal frame.
class Polydisc {
public:
    explicit Polydisc(ExtremalFrame frame) : frame_(std::move(frame)) {}

    const ExtremalFrame& frame() const { return frame_; }

    VecC coords(const VecC& zeta) const {
        return frame_.vectors.adjoint() * (zeta - frame_.center);
    }
    VecC point(const VecC& star_coords) const {
        return frame_.center + frame_.vectors * star_coords;
    }
    // max_j |coord_j| / tau_j; < scale means membership in scale * polydisc.
    double membership(const VecC& zeta) const {
        VecC c = coords(zeta);
        double m = 0;
        for (int j = 0; j < c.size(); ++j) m = std::max(m, std::abs(c[j]) / frame_.radii[j]);
        return m;
    }
    bool contains(const VecC& zeta, double scale = 1.0) const {
        return membership(zeta) < scale;
    }

private:
    ExtremalFrame frame_;
};

double knorm(const Domain& domain, const VecC& z, const VecC& v, const TauOptions& opts = {});

struct PseudodistanceOptions {
    double eps_min = 1e-10;
    double eps_max = 1.0;
    double reltol = 1e-6;
    FrameOptions frame;
};

// inf{eps : zeta in P_eps(z)}; +infinity when zeta is outside P_{eps_max}(z).
double pseudodistance(const Domain& domain, const VecC& z, const VecC& zeta,
                      const PseudodistanceOptions& opts = {});

inline constexpr double kPseudodistanceOutOfRange = std::numeric_limits<double>::infinity();

double polydisc_volume(const ExtremalFrame& frame);

// Surrogate boundary cap area: prod_{j>=2} tau_j^2. Comparable to the true
// cap measure only up to scale-dependent constants; every report that uses it
// carries a surrogate flag.
double cap_area(const Domain& domain, const VecC& z0, double eps, const FrameOptions& opts = {});

struct PolyannulusCover {
    VecC base;
    double eps0 = 0;
    double inner_scale = 0.5;              // the "c" of the shells
    int k0 = 0;
    Polydisc core;                         // P_{d}(zeta0)
    Polydisc target;                       // P_{eps0}(zeta0), the set being covered
    std::vector<Polydisc> shells;          // outer polydiscs P_{2^k d}(zeta0)
    bool in_shell(int k, const VecC& zeta) const {
        return shells[k].contains(zeta) && !shells[k].contains(zeta, inner_scale);
    }
};

PolyannulusCover polyannulus_cover(const Domain& domain, const VecC& zeta0, double eps0,
                                   double inner_scale = 0.5, const FrameOptions& opts = {});

// Monte-Carlo check that core + shells cover P_{eps0}; returns covered fraction.
double cover_sample_fraction(const PolyannulusCover& cover, int samples, std::uint64_t seed = 3);

struct ContactOrderOptions {
    double eps_base = 1e-2;
    int ladder = 8;              // >= 6 points, geometric ratio 1/2
    TauOptions tau;
};

// 1 / slope of log tau(z, v, eps) against log eps.
double contact_order_estimate(const Domain& domain, const VecC& z, const VecC& v,
                              const ContactOrderOptions& opts = {});

struct DerivativeBoundReport {
    double ratio_max = 0;        // max |d^{a+b} r| * prod tau_j^{a_j+b_j} / eps
    int samples = 0;
};

// Prop-style derivative bound over samples of P_eps(zeta): multi-indices alpha
// (holomorphic) and beta (antiholomorphic) in frame coordinates, |a+b| in {1,2}.
DerivativeBoundReport derivative_bound_check(const Domain& domain, const VecC& zeta, double eps,
                                             const std::vector<int>& alpha,
                                             const std::vector<int>& beta, int samples = 64,
                                             const FrameOptions& opts = {});

}  // namespace cft
