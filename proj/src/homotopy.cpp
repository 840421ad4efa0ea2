#include "cft/homotopy.hpp"

#include <memory>

namespace cft {

VecC RetractJet::dz(const VecC& u) const {
    // directional derivative of d = -r along u
    Complex g(0, 0);
    for (int i = 0; i < z.size(); ++i) g += grad_r[i] * u[i];
    double dd = -2.0 * g.real();
    VecC out = t * u;
    out += (dc1_scalar * dd) * AzL;
    out += c1 * (dA(z, u) * lambda);
    if (need_tz) {
        out += (dc2_scalar * dd) * AtzL;
        out += (c2 * t) * (dA(t * z, u) * lambda);
    }
    return out;
}

Homotopy::Homotopy(RetractParams params, MetricModel metric)
    : params_(params), metric_(std::move(metric)),
      gauge_dom_(metric_.domain().with_form(DefiningForm::gauge)) {
    params_.validate();
    lambda_nodes_ = complex_ball_points(gauge_dom_.dimension(), params_.n_lambda, params_.seed);
    for (auto& l : lambda_nodes_) l *= params_.rho;
}

RetractJet Homotopy::retract(const VecC& z, double t, const VecC& lambda) const {
    if (t < 0 || t > 1) throw InvalidArgument("retract: t outside [0,1]");
    if (lambda.norm() > params_.rho * (1 + 1e-12))
        throw InvalidArgument("retract: |Lambda| above rho");
    double d = gauge_dom_.dist(z);
    if (gauge_dom_.r(z) >= 0) throw InvalidArgument("retract: z not interior");

    RetractJet jet;
    jet.z = z;
    jet.lambda = lambda;
    jet.t = t;
    jet.grad_r = gauge_dom_.grad(z);
    jet.dA = [m = &metric_](const VecC& p, const VecC& u) { return m->dA(p, u); };

    double arg = (1.0 - t) / (params_.gamma * d);
    double phi = retract_phi(arg);
    double phid = retract_phi_deriv(arg);
    jet.c1 = t * phi * (1.0 - t) / d;
    jet.c2 = t * (1.0 - phi);
    jet.dc1_scalar = t * (1.0 - t) * (-phid * (1.0 - t) / (params_.gamma * d * d * d) - phi / (d * d));
    jet.dc2_scalar = t * phid * (1.0 - t) / (params_.gamma * d * d);
    jet.need_tz = arg > 0.5 && t > 0;

    jet.Az = metric_.a_matrix(z);
    jet.AzL = jet.Az * lambda;
    MatC dAtz_z;
    if (jet.need_tz) {
        jet.Atz = metric_.a_matrix(t * z);
        jet.AtzL = jet.Atz * lambda;
        dAtz_z = metric_.dA(t * z, z);
    } else {
        jet.Atz = MatC::Zero(z.size(), z.size());
        jet.AtzL = VecC::Zero(z.size());
        dAtz_z = MatC::Zero(z.size(), z.size());
    }

    jet.h = t * z + jet.c1 * jet.AzL + jet.c2 * jet.AtzL;
    // time derivative: product rule over c1, c2 and the moving point tz
    double dc1_dt = phi * (1.0 - 2.0 * t) / d - t * (1.0 - t) * phid / (params_.gamma * d * d);
    double dc2_dt = (1.0 - phi) + t * phid / (params_.gamma * d);
    jet.dh_dt = z + dc1_dt * jet.AzL + dc2_dt * jet.AtzL + jet.c2 * (dAtz_z * lambda);
    jet.dLambda = jet.c1 * jet.Az + jet.c2 * jet.Atz;

    if (t > 0 && gauge_dom_.r(jet.h) >= 0)
        throw Error("retract: image point left the domain");
    return jet;
}

Complex Homotopy::pullback_t_component(const FormField& theta, const RetractJet& jet,
                                       const VecC& u) const {
    if (u.norm() == 0) throw InvalidArgument("pullback: zero direction");
    return theta.action2(jet.h, jet.dh_dt, jet.dz(u));
}

std::vector<Homotopy::TimeNode> Homotopy::time_nodes(double d) const {
    // Panels in s = 1 - t, all breakpoints smooth functions of d(z):
    //  - geometric halving from 1 - t0 down to the switch scale gamma d;
    //  - a finely subdivided band across [gamma d / 2, gamma d], where the
    //    cutoff derivative is active and the integrand is near-singular;
    //  - geometric tail gamma d 2^{-k} below it, last panel touching s = 0.
    double gd = params_.gamma * d;
    std::vector<double> breaks;  // descending in s
    double s = 1.0 - params_.t0;
    breaks.push_back(s);
    while (s / 2 > gd) {
        s /= 2;
        breaks.push_back(s);
    }
    int n_switch = 12 * (1 + params_.refine);
    for (int j = 0; j <= n_switch; ++j)
        breaks.push_back(gd - (0.5 * gd) * j / n_switch);
    int tail = params_.tail_levels + params_.refine;
    for (int k = 1; k <= tail; ++k) breaks.push_back(0.5 * gd * std::ldexp(1.0, -k));
    breaks.push_back(0.0);
    // Band where the path crosses the support-cutoff collar of the input,
    // d(h) in [eps0/2, eps0]: the integrand carries the largest coefficients
    // there and wants panels at its own scale.
    double shi = std::min(1.0 - params_.t0, 1.4 * (params_.eps0 - d) / (1.0 - d));
    double slo = std::max(gd, 0.6 * (0.5 * params_.eps0 - d) / (1.0 - d));
    if (shi > slo && shi > 0) {
        slo = std::max(slo, 1e-3 * shi);
        int n_collar = 16 * (1 + params_.refine);
        for (int j = 0; j <= n_collar; ++j)
            breaks.push_back(shi - (shi - slo) * j / n_collar);
    }
    std::sort(breaks.begin(), breaks.end(), std::greater<double>());
    // drop accidental duplicates / inversions from the concatenation
    std::vector<double> clean;
    for (double b : breaks)
        if (clean.empty() || b < clean.back() * (1 - 1e-12) || (b == 0.0 && clean.back() > 0))
            clean.push_back(b);

    int order = params_.gl_order + 2 * params_.refine;
    int splits = 1 << std::min(params_.refine, 3);
    std::vector<double> gx, gw;
    gauss_legendre(order, gx, gw);
    std::vector<TimeNode> nodes;
    for (size_t i = 0; i + 1 < clean.size(); ++i) {
        double hi = clean[i], lo = clean[i + 1];
        double step = (hi - lo) / splits;
        for (int sp = 0; sp < splits; ++sp) {
            double a = lo + sp * step, b = a + step;
            for (int k = 0; k < order; ++k) {
                double sv = 0.5 * (a + b) + 0.5 * (b - a) * gx[k];
                nodes.push_back({1.0 - sv, 0.5 * (b - a) * gw[k]});
            }
        }
    }
    return nodes;
}

VecC Homotopy::omega10(const FormField& theta, const VecC& z) const {
    int n = gauge_dom_.dimension();
    double d = gauge_dom_.dist(z);
    auto nodes = time_nodes(d);

    // Basis directions e_1..e_n, i e_1..i e_n for the covector extraction.
    std::vector<VecC> dirs;
    for (int j = 0; j < n; ++j) {
        VecC e = VecC::Zero(n);
        e[j] = 1;
        dirs.push_back(e);
        VecC ie = VecC::Zero(n);
        ie[j] = Complex(0, 1);
        dirs.push_back(ie);
    }
    std::vector<double> acc(2 * n, 0.0);

    MatC Az = metric_.a_matrix(z);
    VecC grad_r = gauge_dom_.grad(z);
    double gd = params_.gamma * d;
    std::vector<MatC> dAz_dirs;  // t-independent
    dAz_dirs.reserve(2 * n);
    for (const auto& u : dirs) dAz_dirs.push_back(metric_.dA(z, u));

    for (const auto& node : nodes) {
        double t = node.t;
        double arg = (1.0 - t) / gd;
        double phi = retract_phi(arg);
        double phid = retract_phi_deriv(arg);
        double c1 = t * phi * (1.0 - t) / d;
        double c2 = t * (1.0 - phi);
        double dc1_scalar =
            t * (1.0 - t) * (-phid * (1.0 - t) / (params_.gamma * d * d * d) - phi / (d * d));
        double dc2_scalar = t * phid * (1.0 - t) / (params_.gamma * d * d);
        double dc1_dt = phi * (1.0 - 2.0 * t) / d - t * (1.0 - t) * phid / (params_.gamma * d * d);
        double dc2_dt = (1.0 - phi) + t * phid / (params_.gamma * d);
        bool need_tz = arg > 0.5;

        MatC Atz, dAtz_z;
        std::vector<MatC> dAtz_dirs;
        if (need_tz) {
            Atz = metric_.a_matrix(t * z);
            dAtz_z = metric_.dA(t * z, z);
            dAtz_dirs.reserve(2 * n);
            for (const auto& u : dirs) dAtz_dirs.push_back(metric_.dA(t * z, u));
        }

        MatC Mlam = need_tz ? MatC(c1 * Az + c2 * Atz) : MatC(c1 * Az);
        for (const auto& lam : lambda_nodes_) {
            VecC h = t * z + Mlam * lam;
            if (!theta.in_support(h)) continue;
            MatC th = theta.coeff11(h);
            if (th.norm() == 0) continue;
            VecC AzL = Az * lam;
            VecC dhdt = z + dc1_dt * AzL;
            if (need_tz) dhdt += dc2_dt * (Atz * lam) + c2 * (dAtz_z * lam);
            VecC thT = th.transpose() * dhdt;   // q_{X,Y} = (Theta^T X) . conj(Y)
            VecC thXbar = th * dhdt.conjugate();  // q_{Y,X} = Y . (Theta conj(X))

            for (int b = 0; b < 2 * n; ++b) {
                Complex g(0, 0);
                for (int i = 0; i < n; ++i) g += grad_r[i] * dirs[b][i];
                double dd = -2.0 * g.real();
                VecC Y = t * dirs[b] + (dc1_scalar * dd) * AzL + c1 * (dAz_dirs[b] * lam);
                if (need_tz)
                    Y += (dc2_scalar * dd) * (Atz * lam) + (c2 * t) * (dAtz_dirs[b] * lam);
                Complex qxy = (thT.transpose() * Y.conjugate())(0);
                Complex qyx = (Y.transpose() * thXbar)(0);
                Complex action = Complex(0, 1) * (qxy - qyx);
                acc[b] += node.w * action.real();
            }
        }
    }
    for (auto& a : acc) a /= double(lambda_nodes_.size());
    VecC out(n);
    for (int j = 0; j < n; ++j)
        out[j] = 0.5 * Complex(acc[2 * j], -acc[2 * j + 1]);
    return out;
}

FormField Homotopy::apply(const FormField& theta) const {
    if (!(theta.p() == 1 && theta.q() == 1) || theta.is_real_one_form())
        throw InvalidArgument("homotopy: input must be a (1,1) field");
    int n = gauge_dom_.dimension();
    auto self = std::make_shared<Homotopy>(*this);
    auto th = std::make_shared<FormField>(theta);
    return FormField::real_one_form(
        n, [self, th](const VecC& z) { return self->omega10(*th, z); });
}

std::pair<double, double> Homotopy::identity_residual(const FormField& theta, const VecC& z,
                                                      double fd_step) const {
    int n = gauge_dom_.dimension();
    std::vector<VecC> dirs;
    for (int j = 0; j < n; ++j) {
        VecC e = VecC::Zero(n);
        e[j] = 1;
        dirs.push_back(e);
        VecC ie = VecC::Zero(n);
        ie[j] = Complex(0, 1);
        dirs.push_back(ie);
    }
    // omega components at the 4n shifted points
    std::vector<std::vector<double>> comp_p(2 * n), comp_m(2 * n);
    auto components = [&](const VecC& w) {
        VecC a = omega10(theta, w);
        std::vector<double> c(2 * n);
        for (int b = 0; b < 2 * n; ++b) {
            Complex acc(0, 0);
            for (int j = 0; j < n; ++j) acc += a[j] * dirs[b][j];
            c[b] = 2.0 * acc.real();
        }
        return c;
    };
    for (int a = 0; a < 2 * n; ++a) {
        comp_p[a] = components(z + fd_step * dirs[a]);
        comp_m[a] = components(z - fd_step * dirs[a]);
    }
    double num = 0, den = 0;
    for (int a = 0; a < 2 * n; ++a)
        for (int b = a + 1; b < 2 * n; ++b) {
            double domega =
                (comp_p[a][b] - comp_m[a][b]) / (2 * fd_step) -
                (comp_p[b][a] - comp_m[b][a]) / (2 * fd_step);
            Complex want = theta.action2(z, dirs[a], dirs[b]);
            num += std::norm(domega - want.real()) + std::norm(want.imag());
            den += std::norm(want);
        }
    return {std::sqrt(num), std::sqrt(den)};
}

SplitResult split_and_reconstruct(const FormField& omega, const std::vector<VecC>& probes,
                                  double fd_step) {
    if (!omega.is_real_one_form())
        throw InvalidArgument("split: input must be a real 1-form");
    int n = omega.nvars();
    FormField w10 = FormField::form10(
        n, [omega](const VecC& z) { return VecC(Complex(0, -1) * omega.coeff10(z)); },
        omega.support());
    FormField w01 = FormField::form01(
        n, [omega](const VecC& z) { return VecC(Complex(0, -1) * omega.coeff01(z)); },
        omega.support());

    SplitResult res{std::move(w10), std::move(w01), 0, 0};
    double num = 0, den = 0;
    for (const auto& z : probes) {
        VecC a = res.w10.coeff10(z);
        VecC b = res.w01.coeff01(z);
        res.conj_identity_error =
            std::max(res.conj_identity_error, (b.conjugate() + a).norm());
        // dbar of the (0,1) part: antisymmetrized conjugate derivatives,
        // measured against the full derivative matrix (whose diagonal carries
        // the scale of the d-equation itself).
        MatC db(n, n);
        for (int j = 0; j < n; ++j) {
            VecC zp = z, zm = z, zip = z, zim = z;
            zp[j] += fd_step;
            zm[j] -= fd_step;
            zip[j] += Complex(0, fd_step);
            zim[j] -= Complex(0, fd_step);
            VecC dx = (res.w01.coeff01(zp) - res.w01.coeff01(zm)) / (2 * fd_step);
            VecC dy = (res.w01.coeff01(zip) - res.w01.coeff01(zim)) / (2 * fd_step);
            db.row(j) = 0.5 * (dx + Complex(0, 1) * dy).transpose();
        }
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) num += std::norm(db(j, k) - db(k, j));
        den += db.squaredNorm();
    }
    res.dbar_residual = den > 1e-300 ? std::sqrt(num / den) : 0.0;
    return res;
}

RegimeReport regime_report(const Homotopy& H, int samples, std::uint64_t seed) {
    const Domain& dom = H.gauge_domain();
    const RetractParams& par = H.params();
    int n = dom.dimension();
    double m = dom.finite_type();
    Rng rng(seed);
    RegimeReport rep;
    rep.samples = samples;
    int interior = 0, total = 0;

    for (int s = 0; s < samples; ++s) {
        VecC z = rng.cvector(n);
        z *= (1.0 - rng.uniform(0.02, Domain::kBoundaryCollar)) / dom.gauge(z);
        double d = dom.dist(z);
        VecC lam = par.rho * std::sqrt(rng.uniform()) * rng.unit_cvector(n);
        VecC u = rng.unit_cvector(n);
        double ku = knorm(dom, z, u);

        struct Regime {
            double t;
            int which;  // 0 inner, 1 middle, 2 outer
        };
        double gd = par.gamma * d;
        std::vector<Regime> regs{{1.0 - rng.uniform(0.05, 0.45) * gd, 0},
                                 {1.0 - rng.uniform(0.55, 0.95) * gd, 1},
                                 {rng.uniform(par.t0, std::min(1.0 - gd * 1.05, 0.999)), 2}};
        for (const auto& reg : regs) {
            auto jet = H.retract(z, reg.t, lam);
            ++total;
            if (dom.r(jet.h) < 0) ++interior;
            double kdt = knorm(dom, jet.h, jet.dh_dt);
            double kdz = knorm(dom, jet.h, jet.dz(u));
            double t = reg.t;
            if (reg.which == 0) {
                rep.inner_k_dt = std::max(rep.inner_k_dt, kdt);
                rep.inner_k_dz = std::max(rep.inner_k_dz, kdz / ku);
                // radial-term inclusion at the inner scale
                VecC p = t * z + (t * (1 - t) / d) * (H.metric().a_matrix(z) * lam);
                Polydisc disc(extremal_basis(dom, z, d));
                rep.incl_radial = std::max(rep.incl_radial, disc.membership(p) * d / (1 - t));
            } else if (reg.which == 1) {
                rep.middle_k_dt = std::max(rep.middle_k_dt, kdt);
                rep.middle_k_dz = std::max(rep.middle_k_dz, kdz / ku);
            } else {
                rep.outer_k_dt = std::max(rep.outer_k_dt, kdt);
                double scale = std::pow((1 - t) / d, 1.0 - 1.0 / m);
                rep.outer_k_dz_scaled = std::max(rep.outer_k_dz_scaled, kdz / (ku * scale));
                VecC tz = t * z;
                double dtz = dom.dist(tz);
                Polydisc ptz(extremal_basis(dom, tz, dtz));
                VecC q = tz + t * (H.metric().a_matrix(tz) * lam);
                rep.incl_outer =
                    std::max(rep.incl_outer, ptz.membership(q) / (t * par.rho));
                Polydisc p1t(extremal_basis(dom, tz, 1 - t));
                rep.image_ctrl =
                    std::max(rep.image_ctrl, p1t.membership(jet.h) / (t * par.rho));
            }
        }
    }
    rep.interior_fraction = total > 0 ? double(interior) / total : 0;
    return rep;
}

}  // namespace cft
