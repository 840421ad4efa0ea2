#include "cft/geometry.hpp"

#include <Eigen/QR>

namespace cft {

namespace {

// Maximum of |r(z + t e^{i a} v) - r(z)| over the circle of radius t.
double circle_max(const Domain& domain, const VecC& z, const VecC& v, double rz, double t,
                  const TauOptions& opts) {
    auto val = [&](double a) {
        return std::abs(domain.r(z + t * std::polar(1.0, a) * v) - rz);
    };
    int N = opts.circle_samples;
    double best = -1, best_a = 0;
    double step = 2 * kPi / N;
    for (int k = 0; k < N; ++k) {
        double a = k * step;
        double f = val(a);
        if (f > best) {
            best = f;
            best_a = a;
        }
    }
    double a_star = golden_max(val, best_a - step, best_a + step, opts.angle_tol);
    return std::max(best, val(a_star));
}

}  // namespace

double tau(const Domain& domain, const VecC& z, const VecC& v, double eps,
           const TauOptions& opts) {
    if (eps <= 0) throw InvalidArgument("tau: eps must be positive");
    double vn = v.norm();
    if (vn < 1e-300) throw InvalidArgument("tau: zero direction");
    VecC u = v / vn;
    double rz = domain.r(z);
    auto M = [&](double t) { return circle_max(domain, z, u, rz, t, opts); };

    double t_hi = std::sqrt(eps);  // exact for quadratic growth, a starting guess otherwise
    int guard = 0;
    while (M(t_hi) < eps) {
        t_hi *= 2;
        if (++guard > opts.max_doublings)
            throw ToleranceError("tau: level set not reached (best bracket " +
                                 std::to_string(t_hi) + ")");
    }
    double t_lo = t_hi / 2;
    while (M(t_lo) >= eps) {
        t_lo *= 0.5;
        if (++guard > opts.max_doublings)
            throw ToleranceError("tau: no inner bracket");
    }
    double t = bisect_increasing(M, t_lo, t_hi, eps, opts.reltol);
    return t / vn;
}

ExtremalFrame extremal_basis(const Domain& domain, const VecC& z, double eps,
                             const FrameOptions& opts) {
    int n = domain.dimension();
    ExtremalFrame frame;
    frame.center = z;
    frame.epsilon = eps;
    frame.vectors = MatC::Zero(n, n);
    frame.radii = VecR::Zero(n);

    frame.vectors.col(0) = domain.unit_normal(z);
    for (int j = 1; j < n; ++j) {
        // Orthonormal basis of the orthocomplement of the chosen columns.
        Eigen::HouseholderQR<MatC> qr(frame.vectors.leftCols(j));
        MatC Q = qr.householderQ();
        MatC comp = Q.rightCols(n - j);
        int dim = n - j;
        VecC best_dir;
        double best_tau = -1;
        if (dim == 1) {
            best_dir = comp.col(0);
            best_tau = tau(domain, z, best_dir, eps, opts.tau);
        } else {
            auto dirs = complex_sphere_points(dim, opts.sphere_samples * dim, opts.seed + j);
            for (const auto& c : dirs) {
                VecC cand = comp * c;
                double t = tau(domain, z, cand, eps, opts.tau);
                if (t > best_tau) {
                    best_tau = t;
                    best_dir = cand;
                }
            }
            // Local polish with shrinking random perturbations in the complement.
            Rng rng(opts.seed * 977 + j);
            double sigma = 0.3;
            VecC cur_c = comp.adjoint() * best_dir;
            for (int it = 0; it < opts.polish_iters; ++it) {
                VecC pert = cur_c + sigma * rng.cvector(dim);
                pert /= pert.norm();
                VecC cand = comp * pert;
                double t = tau(domain, z, cand, eps, opts.tau);
                if (t > best_tau) {
                    best_tau = t;
                    best_dir = cand;
                    cur_c = pert;
                } else {
                    sigma *= 0.7;
                }
            }
        }
        // Deterministic phase: largest-magnitude entry made real positive.
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(best_dir[i]) > std::abs(best_dir[imax])) imax = i;
        Complex ph = best_dir[imax] / std::abs(best_dir[imax]);
        frame.vectors.col(j) = best_dir / ph;
    }
    for (int j = 0; j < n; ++j)
        frame.radii[j] = tau(domain, z, frame.vectors.col(j), eps, opts.tau);
    return frame;
}

double knorm(const Domain& domain, const VecC& z, const VecC& v, const TauOptions& opts) {
    if (v.norm() == 0) return 0.0;
    double d = domain.dist(z);
    if (d <= 0) throw InvalidArgument("knorm: boundary point");
    return d / tau(domain, z, v, d, opts);
}

double pseudodistance(const Domain& domain, const VecC& z, const VecC& zeta,
                      const PseudodistanceOptions& opts) {
    if ((z - zeta).norm() < 1e-15) return 0.0;
    auto member = [&](double eps) {
        Polydisc p(extremal_basis(domain, z, eps, opts.frame));
        return p.contains(zeta);
    };
    if (!member(opts.eps_max)) return kPseudodistanceOutOfRange;
    double lo = opts.eps_min, hi = opts.eps_max;
    if (member(lo)) return lo;
    while (hi - lo > opts.reltol * hi) {
        double mid = std::sqrt(lo * hi);
        if (member(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

double polydisc_volume(const ExtremalFrame& frame) {
    double v = 1;
    for (int j = 0; j < frame.radii.size(); ++j) v *= kPi * frame.radii[j] * frame.radii[j];
    return v;
}

double cap_area(const Domain& domain, const VecC& z0, double eps, const FrameOptions& opts) {
    ExtremalFrame f = extremal_basis(domain, z0, eps, opts);
    double a = 1;
    for (int j = 1; j < f.radii.size(); ++j) a *= f.radii[j] * f.radii[j];
    return a;
}

PolyannulusCover polyannulus_cover(const Domain& domain, const VecC& zeta0, double eps0,
                                   double inner_scale, const FrameOptions& opts) {
    double d = domain.dist(zeta0);
    if (d <= 0) throw InvalidArgument("polyannulus_cover: boundary base point");
    if (eps0 < d) throw InvalidArgument("polyannulus_cover: eps0 below d(zeta0)");
    int k0 = eps0 <= d ? 0 : (int)std::ceil(std::log2(eps0 / d));
    PolyannulusCover cover{zeta0, eps0, inner_scale, k0,
                           Polydisc(extremal_basis(domain, zeta0, d, opts)),
                           Polydisc(extremal_basis(domain, zeta0, eps0, opts)),
                           {}};
    for (int k = 0; k <= k0; ++k) {
        double eps = std::ldexp(d, k);
        cover.shells.emplace_back(extremal_basis(domain, zeta0, eps, opts));
    }
    return cover;
}

double cover_sample_fraction(const PolyannulusCover& cover, int samples, std::uint64_t seed) {
    const auto& f = cover.target.frame();
    int n = (int)f.center.size();
    Rng rng(seed);
    int hit = 0;
    for (int s = 0; s < samples; ++s) {
        VecC star(n);
        for (int j = 0; j < n; ++j) {
            double rad = std::sqrt(rng.uniform()) * f.radii[j];
            star[j] = std::polar(rad, rng.uniform(0, 2 * kPi));
        }
        VecC zeta = cover.target.point(star);
        bool covered = cover.core.contains(zeta);
        for (int k = 0; !covered && k <= cover.k0; ++k) covered = cover.in_shell(k, zeta);
        if (covered) ++hit;
    }
    return double(hit) / samples;
}

double contact_order_estimate(const Domain& domain, const VecC& z, const VecC& v,
                              const ContactOrderOptions& opts) {
    std::vector<double> lx, ly;
    for (int k = 0; k < opts.ladder; ++k) {
        double eps = opts.eps_base * std::ldexp(1.0, -k);
        lx.push_back(std::log(eps));
        ly.push_back(std::log(tau(domain, z, v, eps, opts.tau)));
    }
    double slope = regression_slope(lx, ly);
    if (slope < 1e-6) throw SingularityError("contact_order_estimate: degenerate slope");
    return 1.0 / slope;
}

DerivativeBoundReport derivative_bound_check(const Domain& domain, const VecC& zeta, double eps,
                                             const std::vector<int>& alpha,
                                             const std::vector<int>& beta, int samples,
                                             const FrameOptions& opts) {
    int n = domain.dimension();
    if ((int)alpha.size() != n || (int)beta.size() != n)
        throw InvalidArgument("derivative_bound_check: multi-index arity");
    int total = 0;
    for (int j = 0; j < n; ++j) total += alpha[j] + beta[j];
    if (total < 1 || total > 2)
        throw InvalidArgument("derivative_bound_check: |alpha+beta| must be 1 or 2");

    ExtremalFrame f = extremal_basis(domain, zeta, eps, opts);
    Polydisc disc(f);
    const MatC& W = f.vectors;
    Rng rng(11);
    DerivativeBoundReport rep;
    rep.samples = samples;
    for (int s = 0; s < samples; ++s) {
        VecC star(n);
        for (int j = 0; j < n; ++j) {
            double rad = std::sqrt(rng.uniform()) * f.radii[j];
            star[j] = std::polar(rad, rng.uniform(0, 2 * kPi));
        }
        VecC z = disc.point(star);
        Complex deriv(0, 0);
        if (total == 1) {
            VecC g = domain.grad(z);
            for (int j = 0; j < n; ++j) {
                if (alpha[j] == 1) deriv = (W.col(j).transpose() * g)(0);
                if (beta[j] == 1) deriv = std::conj((W.col(j).transpose() * g)(0));
            }
        } else {
            // Frame-coordinate second derivatives through the chain rule.
            MatC Hm = domain.hess_mixed(z);
            MatC Hh = domain.hess_holo(z);
            int ia = -1, ib = -1;  // first/second derivative slots
            bool a_holo = true, b_holo = true;
            std::vector<std::pair<int, bool>> slots;
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < alpha[j]; ++k) slots.push_back({j, true});
                for (int k = 0; k < beta[j]; ++k) slots.push_back({j, false});
            }
            ia = slots[0].first;
            a_holo = slots[0].second;
            ib = slots[1].first;
            b_holo = slots[1].second;
            VecC wa = W.col(ia), wb = W.col(ib);
            if (a_holo && b_holo) deriv = (wa.transpose() * Hh * wb)(0);
            else if (!a_holo && !b_holo) deriv = std::conj((wa.transpose() * Hh * wb)(0));
            else {
                VecC wh = a_holo ? wa : wb, wv = a_holo ? wb : wa;
                deriv = (wh.transpose() * Hm * wv.conjugate())(0);
            }
        }
        double weight = 1;
        for (int j = 0; j < n; ++j)
            weight *= std::pow(f.radii[j], alpha[j] + beta[j]);
        rep.ratio_max = std::max(rep.ratio_max, std::abs(deriv) * weight / eps);
    }
    return rep;
}

}  // namespace cft
