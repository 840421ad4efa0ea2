#include "cft/dbar.hpp"

#include "cft/geometry.hpp"

namespace cft {

SupportModel support_linear(const Domain& domain) {
    SupportModel s;
    s.domain = domain;
    return s;
}

Complex default_cn(int n) {
    if (n == 1) return Complex(0.0, 1.0 / (2 * kPi));
    if (n == 2) return Complex(0.07891428, 0.0);
    return Complex(1.0, 0.0);
}

SFormEval s_form(const SupportModel& support, const VecC& zeta, const VecC& z) {
    const Domain& dom = support.domain;
    int n = dom.dimension();
    double rz = dom.r(z);
    double chi_z = support.chi(z);
    VecC gz = dom.grad(z);
    Complex S_zzeta(0, 0);  // S(z, zeta) = <grad r(z), z - zeta>
    for (int i = 0; i < n; ++i) S_zzeta += gz[i] * (z[i] - zeta[i]);

    SFormEval out;
    out.s.resize(n);
    out.dbar_s.resize(n, n);
    // The swapped-argument Hefer row pairs S(z, .) against (zeta - z): for the
    // linear support that row is -grad r(z), which keeps <s, zeta - z> equal
    // to d(z)|zeta - z|^2 + (1 - chi)|S(z, zeta)|^2, positive.
    for (int i = 0; i < n; ++i)
        out.s[i] = -rz * std::conj(zeta[i] - z[i]) - (1.0 - chi_z) * std::conj(S_zzeta) * gz[i];
    // dbar_zeta of conj(zeta_i - z_i) is delta_{ki}; S(z, zeta) is holomorphic
    // in zeta with d/d zeta_k = -grad r(z)_k.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            out.dbar_s(k, i) =
                (k == i ? Complex(-rz, 0) : Complex(0, 0)) +
                (1.0 - chi_z) * std::conj(gz[k]) * gz[i];
    return out;
}

QFormEval q_form(const SupportModel& support, const VecC& zeta, const VecC& z) {
    const Domain& dom = support.domain;
    int n = dom.dimension();
    double rzeta = dom.r(zeta);
    if (std::abs(rzeta) < 1e-14)
        throw SingularityError("q_form: zeta on the boundary");
    (void)z;  // the linear support's Q does not depend on z
    VecC g = dom.grad(zeta);
    MatC Hm = dom.hess_mixed(zeta);
    QFormEval out;
    out.q = g / rzeta;
    out.dbar_q.resize(n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            out.dbar_q(k, i) = Hm(i, k) / rzeta - g[i] * std::conj(g[k]) / (rzeta * rzeta);
    return out;
}

namespace {

struct KernelPieces {
    WedgeForm s_near;   // -r(z) conj(zeta - z) d zeta part
    WedgeForm s_far;    // support-function part
    WedgeForm dbar_s;
    WedgeForm dbar_q;
    Complex D1;         // <s, zeta - z>
    Complex D2;         // 1 - <q, zeta - z>
    int n;
};

KernelPieces kernel_pieces(const KernelParams& params, const SupportModel& support,
                           const VecC& zeta, const VecC& z) {
    const Domain& dom = support.domain;
    int n = dom.dimension();
    if (n > 3) throw InvalidArgument("kernel: dimension capped at 3");
    SFormEval se = s_form(support, zeta, z);
    QFormEval qe = q_form(support, zeta, z);
    double rz = dom.r(z);
    double chi_z = support.chi(z);
    VecC gz = dom.grad(z);
    Complex S_zzeta(0, 0);
    for (int i = 0; i < n; ++i) S_zzeta += gz[i] * (z[i] - zeta[i]);
    VecC s_near(n), s_far(n);
    for (int i = 0; i < n; ++i) {
        s_near[i] = -rz * std::conj(zeta[i] - z[i]);
        s_far[i] = -(1.0 - chi_z) * std::conj(S_zzeta) * gz[i];
    }
    Complex D1(0, 0), D2(1, 0);
    for (int i = 0; i < n; ++i) {
        D1 += se.s[i] * (zeta[i] - z[i]);
        D2 -= qe.q[i] * (zeta[i] - z[i]);
    }
    double sep = (zeta - z).squaredNorm();
    if (sep < params.singular_tol * params.singular_tol)
        throw SingularityError("kernel: coincident points");
    // the support inequality makes D1 >= d(z) |zeta-z|^2 (plus the |S|^2 term)
    if (D1.real() < 0.9 * std::abs(rz) * sep - 1e-15 || std::abs(D1) == 0.0)
        throw SingularityError("kernel: support denominator vanished");
    if (std::abs(D2) <= 1e-12)
        throw SingularityError("kernel: gauge denominator vanished");
    return {WedgeForm::one_form_dz(n, s_near), WedgeForm::one_form_dz(n, s_far),
            WedgeForm::two_form_dzbar_dz(n, se.dbar_s),
            WedgeForm::two_form_dzbar_dz(n, qe.dbar_q), D1, D2, n};
}

WedgeForm assemble_K(const KernelPieces& p, Complex cn, bool near_only, bool far_only) {
    int n = p.n;
    WedgeForm s = near_only ? p.s_near : (far_only ? p.s_far : p.s_near + p.s_far);
    WedgeForm acc(n);
    for (int k = 0; k <= n - 1; ++k) {
        WedgeForm term = s;
        for (int j = 0; j < n - 1 - k; ++j) term = term.wedge(p.dbar_s);
        for (int j = 0; j < k; ++j) term = term.wedge(p.dbar_q);
        Complex denom = std::pow(p.D1, n - k) * std::pow(p.D2, k + 1);
        acc += term * (cn / denom);
    }
    return acc;
}

}  // namespace

WedgeForm kernel_K(const KernelParams& params, const SupportModel& support, const VecC& zeta,
                   const VecC& z) {
    return assemble_K(kernel_pieces(params, support, zeta, z), params.cn, false, false);
}

Complex kernel_psi(const KernelParams& params, const SupportModel& support, const VecC& zeta,
                   const VecC& z, const VecC& omega01) {
    int n = support.domain.dimension();
    WedgeForm K = kernel_K(params, support, zeta, z);
    WedgeForm w = WedgeForm::one_form_dzbar(n, omega01);
    Complex top = w.wedge(K).top_coefficient();
    // dz_1..dz_n ^ dzbar_1..dzbar_n = (-1)^{n(n-1)/2} (-2i)^n d(lambda)
    Complex conv = std::pow(Complex(0, -2), n);
    if ((n * (n - 1) / 2) % 2 == 1) conv = -conv;
    return top * conv;
}

InteriorGrid InteriorGrid::build(const Domain& domain, const KernelParams& params) {
    int n = domain.dimension();
    double fact = 1;
    for (int i = 2; i < n; ++i) fact *= i;
    double sphere_area = 2 * std::pow(kPi, n) / fact;

    InteriorGrid grid;
    int levels = params.radial_levels + params.refine;
    int base = params.boundary_points << params.refine;
    int nsub = std::max(1, params.radial_subdivisions);
    for (int l = 0; l < levels; ++l) {
        // level l covers gauge depth d in (2^{-l-1}, 2^{-l}]
        double lhi = std::ldexp(1.0, -l), llo = std::ldexp(1.0, -l - 1);
        if (l == levels - 1) llo = 0.0;
        // boundary resolution grows toward the boundary like cap counts
        int count = std::min<int>(params.level_growth_cap << params.refine,
                                  (int)std::ceil(base * std::pow(1.6, l)));
        for (int s = 0; s < nsub; ++s) {
            double dhi = lhi - (lhi - llo) * s / nsub;
            double dlo = lhi - (lhi - llo) * (s + 1) / nsub;
            auto sph = sphere_points(2 * n, count, params.seed + l * 31 + s);
            double dm = 0.5 * (dhi + dlo);
            // exact radial volume of the gauge shell per unit boundary area
            double shell =
                (std::pow(1.0 - dlo, 2.0 * n) - std::pow(1.0 - dhi, 2.0 * n)) / (2.0 * n);
            for (const auto& g : sph) {
                VecC b(n);
                for (int i = 0; i < n; ++i) b[i] = Complex(g[2 * i], g[2 * i + 1]);
                b /= domain.gauge(b);
                grid.points.push_back((1.0 - dm) * b);
                grid.weights.push_back(sphere_area / count * shell);
            }
        }
    }
    return grid;
}

DbarSolution::DbarSolution(KernelParams params, SupportModel support, InteriorGrid grid,
                           std::function<VecC(const VecC&)> omega,
                           std::vector<VecC> omega_samples)
    : params_(std::move(params)), support_(std::move(support)), grid_(std::move(grid)),
      omega_fn_(std::move(omega)), omega_(std::move(omega_samples)) {}

Complex DbarSolution::eval(const VecC& z) const {
    Complex total(0, 0);
    for (std::size_t i = 0; i < grid_.points.size(); ++i) {
        if (omega_[i].norm() == 0) continue;
        if ((grid_.points[i] - z).norm() < 1e-12) continue;
        total += grid_.weights[i] * kernel_psi(params_, support_, grid_.points[i], z, omega_[i]);
    }
    return total;
}

Complex dbar_solution_polar(const KernelParams& params, const SupportModel& support,
                            const std::function<VecC(const VecC&)>& omega, const VecC& z,
                            int resolution, int radial_order);

double DbarSolution::residual(const std::vector<VecC>& probes, double fd_step) const {
    int n = support_.domain.dimension();
    int resolution = 10 + 4 * params_.refine;
    int radial = 10 + 2 * params_.refine;
    double num = 0, den = 0;
    for (const auto& z : probes) {
        VecC want = omega_fn_(z);
        for (int k = 0; k < n; ++k) {
            VecC zp = z, zm = z, zip = z, zim = z;
            zp[k] += fd_step;
            zm[k] -= fd_step;
            zip[k] += Complex(0, fd_step);
            zim[k] -= Complex(0, fd_step);
            Complex dx = (eval_polar(zp, resolution, radial) - eval_polar(zm, resolution, radial)) /
                         (2 * fd_step);
            Complex dy = (eval_polar(zip, resolution, radial) -
                          eval_polar(zim, resolution, radial)) /
                         (2 * fd_step);
            Complex dbar_k = 0.5 * (dx + Complex(0, 1) * dy);
            num += std::norm(dbar_k - want[k]);
            den += std::norm(want[k]);
        }
    }
    return den > 1e-300 ? std::sqrt(num / den) : std::sqrt(num);
}

Complex DbarSolution::eval_polar(const VecC& z, int resolution, int radial_order) const {
    return dbar_solution_polar(params_, support_, omega_fn_, z, resolution, radial_order);
}

DbarSolution solve_dbar(const KernelParams& params, const SupportModel& support,
                        const std::function<VecC(const VecC&)>& omega01) {
    InteriorGrid grid = InteriorGrid::build(support.domain, params);
    std::vector<VecC> samples(grid.points.size());
    parallel_for(grid.points.size(),
                 [&](std::size_t i) { samples[i] = omega01(grid.points[i]); });
    return DbarSolution(params, support, grid, omega01, std::move(samples));
}

// Target-centered polar quadrature of u(z) = int omega ^ K(., z): radial
// panels grade geometrically into the kernel singularity at z, so the value
// converges spectrally; used by the calibration where pointwise derivatives
// of the fixed-grid sum would be dominated by nearest-cell noise.
Complex dbar_solution_polar(const KernelParams& params, const SupportModel& support,
                            const std::function<VecC(const VecC&)>& omega, const VecC& z,
                            int resolution, int radial_order) {
    const Domain& dom = support.domain;
    int n = dom.dimension();
    SphereQuad sq = sphere_quadrature(n, resolution, params.seed + 5);
    std::vector<double> gx, gw;
    gauss_legendre(radial_order, gx, gw);
    std::vector<Complex> partial(sq.dirs.size());
    parallel_for(sq.dirs.size(), [&](std::size_t di) {
        const VecC& dir = sq.dirs[di];
        // ray length to the boundary
        auto f = [&](double t) { return dom.r(z + t * dir); };
        double hi = 0.05;
        while (f(hi) < 0 && hi < 8) hi *= 2;
        double R = bisect_increasing(f, hi / 2, hi, 0.0, 1e-12);
        std::vector<double> breaks{R};
        double r = R;
        while (r > 1e-6 * R) {
            r /= 2.5;
            breaks.push_back(r);
        }
        breaks.push_back(0.0);
        Complex acc(0, 0);
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            double a = breaks[i + 1], b = breaks[i];
            for (int k = 0; k < radial_order; ++k) {
                double rr = 0.5 * (a + b) + 0.5 * (b - a) * gx[k];
                double w = 0.5 * (b - a) * gw[k] * std::pow(rr, 2 * n - 1);
                VecC zeta = z + rr * dir;
                acc += w * kernel_psi(params, support, zeta, z, omega(zeta));
            }
        }
        partial[di] = acc * sq.weights[di];
    });
    Complex total(0, 0);
    for (const auto& p : partial) total += p;
    return total;
}

Complex calibrate_cn(KernelParams params, const Domain& domain, int probes) {
    int n = domain.dimension();
    params.cn = Complex(1, 0);
    SupportModel support = support_linear(domain);
    // known primitive g = conj(z_1) * exp(-|z|^2): omega = dbar g is exact
    auto omega = [n](const VecC& z) {
        VecC w(n);
        double e = std::exp(-z.squaredNorm());
        for (int k = 0; k < n; ++k)
            w[k] = (k == 0 ? Complex(1, 0) : Complex(0, 0)) * e -
                   std::conj(z[0]) * z[k] * e;
        return w;
    };
    int resolution = (n == 1 ? 24 : 10) << params.refine;
    int radial = 10 + 2 * params.refine;
    double fd = 1e-4;
    Rng rng(params.seed + 7);
    Complex num(0, 0);
    double den = 0;
    for (int p = 0; p < std::max(1, probes / 4); ++p) {
        VecC z = rng.cvector(n);
        z *= rng.uniform(0.2, 0.5) / domain.gauge(z);
        VecC want = omega(z);
        for (int k = 0; k < n; ++k) {
            VecC zp = z, zm = z, zip = z, zim = z;
            zp[k] += fd;
            zm[k] -= fd;
            zip[k] += Complex(0, fd);
            zim[k] -= Complex(0, fd);
            auto U = [&](const VecC& w) {
                return dbar_solution_polar(params, support, omega, w, resolution, radial);
            };
            Complex dx = (U(zp) - U(zm)) / (2 * fd);
            Complex dy = (U(zip) - U(zim)) / (2 * fd);
            Complex dbar_k = 0.5 * (dx + Complex(0, 1) * dy);
            num += std::conj(dbar_k) * want[k];
            den += std::norm(dbar_k);
        }
    }
    if (den < 1e-300) throw SingularityError("calibrate_cn: degenerate residual system");
    return num / den;
}

PsiTildeValue psi_tilde(const KernelParams& params, const SupportModel& support,
                        const MetricModel& metric, const VecC& zeta, const VecC& z, int i) {
    const Domain& dom = support.domain;
    int n = dom.dimension();
    if (i < 0 || i >= n) throw InvalidArgument("psi_tilde: frame index");
    HermitianPD B = metric.bergman_matrix(zeta);
    MatC A = B.inv_sqrt();
    std::vector<VecC> holo, anti;
    for (int j = 0; j < n; ++j) holo.push_back(A.col(j));
    for (int j = 0; j < n; ++j)
        if (j != i) anti.push_back(A.col(j).conjugate());
    double detB = 1;
    for (int j = 0; j < n; ++j) detB *= B.eigenvalues()[j];
    double kbar = knorm(dom, zeta, A.col(i).conjugate());

    auto pieces = kernel_pieces(params, support, zeta, z);
    PsiTildeValue out;
    Complex full = assemble_K(pieces, params.cn, false, false).eval_slots(holo, anti);
    Complex nearp = assemble_K(pieces, params.cn, true, false).eval_slots(holo, anti);
    Complex farp = assemble_K(pieces, params.cn, false, true).eval_slots(holo, anti);
    out.value = std::abs(full) * kbar * detB;
    out.part_near = std::abs(nearp) * kbar * detB;
    out.part_far = std::abs(farp) * kbar * detB;
    return out;
}

}  // namespace cft
