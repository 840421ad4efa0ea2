#include "cft/domain.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cft {

Domain Domain::ball(int n, DefiningForm form) {
    if (n < 1) throw InvalidArgument("domain: dimension must be >= 1");
    Domain d;
    d.kind_ = DomainKind::unit_ball;
    d.form_ = form;
    d.n_ = n;
    d.finite_type_ = 2;
    d.exponents_.assign(n, 1);
    return d;
}

Domain Domain::ellipsoid(std::vector<int> exponents, DefiningForm form) {
    if (exponents.empty()) throw InvalidArgument("domain: empty exponent list");
    for (int m : exponents)
        if (m < 1) throw InvalidArgument("domain: exponents must be positive");
    Domain d;
    d.kind_ = DomainKind::complex_ellipsoid;
    d.form_ = form;
    d.n_ = (int)exponents.size();
    int mmax = 1;
    for (int m : exponents) mmax = std::max(mmax, m);
    d.finite_type_ = 2 * mmax;
    d.exponents_ = std::move(exponents);
    return d;
}

Domain Domain::custom(CustomDomain spec, DefiningForm form) {
    if (spec.dimension < 1 || !spec.r) throw InvalidArgument("domain: bad custom spec");
    Domain d;
    d.kind_ = DomainKind::custom;
    d.form_ = form;
    d.n_ = spec.dimension;
    d.finite_type_ = spec.finite_type;
    d.exponents_.assign(d.n_, 1);
    d.custom_ = std::move(spec);
    return d;
}

double Domain::r_analytic(const VecC& z) const {
    if (kind_ == DomainKind::custom) return custom_.r(z);
    double acc = 0;
    for (int j = 0; j < n_; ++j) acc += std::pow(std::norm(z[j]), exponents_[j]);
    return acc - 1.0;
}

double Domain::gauge_builtin(const VecC& z) const {
    if (kind_ == DomainKind::unit_ball) return z.norm();
    double zmax = 0;
    for (int j = 0; j < n_; ++j) zmax = std::max(zmax, std::abs(z[j]));
    if (zmax == 0) return 0.0;
    // Solve sum |z_j|^{2m_j} / p^{2m_j} = 1; left side is decreasing in p.
    auto g = [&](double p) {
        double acc = 0;
        for (int j = 0; j < n_; ++j) acc += std::pow(std::norm(z[j]) / (p * p), exponents_[j]);
        return -acc;
    };
    double hi = 2.0 * n_ * zmax;
    return bisect_increasing(g, zmax * (1.0 - 1e-15), hi, -1.0, 1e-14, 200);
}

double Domain::gauge(const VecC& z) const {
    if (z.norm() == 0) return 0.0;
    if (kind_ != DomainKind::custom) return gauge_builtin(z);
    // Ray bisection against the custom analytic form: r(z/p) = 0.
    auto f = [&](double p) { return -custom_.r(z / p); };
    double hi = 1.0, lo = 1.0;
    int guard = 0;
    while (custom_.r(z / hi) > 0) {
        hi *= 2;
        if (++guard > 80) throw ToleranceError("gauge: no outer bracket");
    }
    guard = 0;
    while (custom_.r(z / lo) < 0) {
        lo *= 0.5;
        if (++guard > 80) throw ToleranceError("gauge: no inner bracket");
    }
    return bisect_increasing(f, lo, hi, 0.0, 1e-12, 80);
}

double Domain::r(const VecC& z) const {
    return form_ == DefiningForm::analytic ? r_analytic(z) : r_gauge(z);
}

VecC Domain::grad_analytic(const VecC& z) const {
    VecC g(n_);
    for (int j = 0; j < n_; ++j) {
        int m = exponents_[j];
        g[j] = double(m) * std::pow(std::norm(z[j]), m - 1) * std::conj(z[j]);
    }
    return g;
}

VecC Domain::grad_gauge(const VecC& z) const {
    // Implicit differentiation of sum A_j p^{-2m_j} = 1, A_j = |z_j|^{2m_j}.
    double p = gauge(z);
    if (p < 1e-14) throw SingularityError("gauge gradient at the origin");
    VecC g(n_);
    double Fp = 0;
    for (int j = 0; j < n_; ++j) {
        int m = exponents_[j];
        double Aj = std::pow(std::norm(z[j]), m);
        Fp += Aj * (-2.0 * m) * std::pow(p, -2 * m - 1);
    }
    for (int a = 0; a < n_; ++a) {
        int m = exponents_[a];
        Complex Ga = double(m) * std::pow(std::norm(z[a]), m - 1) * std::conj(z[a]);
        g[a] = -Ga * std::pow(p, -2 * m) / Fp;
    }
    return g;
}

VecC Domain::grad_fd(const VecC& z, const std::function<double(const VecC&)>& f) const {
    double h = 1e-6 * std::max(1.0, z.norm());
    VecC g(n_);
    for (int a = 0; a < n_; ++a) {
        VecC zp = z, zm = z;
        zp[a] += h;
        zm[a] -= h;
        double dx = (f(zp) - f(zm)) / (2 * h);
        zp = z;
        zm = z;
        zp[a] += Complex(0, h);
        zm[a] -= Complex(0, h);
        double dy = (f(zp) - f(zm)) / (2 * h);
        g[a] = 0.5 * Complex(dx, -dy);
    }
    return g;
}

VecC Domain::grad(const VecC& z) const {
    if (kind_ == DomainKind::custom) {
        if (form_ == DefiningForm::analytic && custom_.grad) return custom_.grad(z);
        auto f = [&](const VecC& w) { return r(w); };
        return grad_fd(z, f);
    }
    return form_ == DefiningForm::analytic ? grad_analytic(z) : grad_gauge(z);
}

void Domain::gauge_second_derivatives(const VecC& z, MatC& mixed, MatC& holo) const {
    double p = gauge(z);
    if (p < 1e-14) throw SingularityError("gauge hessian at the origin");
    VecC G(n_), dG_mixed(n_), dG_holo(n_);
    VecR q(n_);
    double Fp = 0, Fpp = 0;
    for (int j = 0; j < n_; ++j) {
        int m = exponents_[j];
        double r2 = std::norm(z[j]);
        double Aj = std::pow(r2, m);
        q[j] = std::pow(p, -2 * m);
        G[j] = double(m) * std::pow(r2, m - 1) * std::conj(z[j]);
        dG_mixed[j] = double(m) * double(m) * std::pow(r2, m - 1);
        dG_holo[j] = m >= 2 ? double(m) * double(m - 1) * std::pow(r2, m - 2) *
                                  std::conj(z[j]) * std::conj(z[j])
                            : Complex(0, 0);
        Fp += Aj * (-2.0 * m) / std::pow(p, 2 * m + 1);
        Fpp += Aj * (2.0 * m) * (2.0 * m + 1) / std::pow(p, 2 * m + 2);
    }
    VecC pa(n_);
    for (int a = 0; a < n_; ++a) pa[a] = -G[a] * q[a] / Fp;

    mixed.resize(n_, n_);
    holo.resize(n_, n_);
    for (int a = 0; a < n_; ++a) {
        int ma = exponents_[a];
        Complex Fa = G[a] * q[a];
        Complex Fap = G[a] * (-2.0 * ma) / std::pow(p, 2 * ma + 1);
        for (int b = 0; b < n_; ++b) {
            int mb = exponents_[b];
            Complex pb = pa[b];
            Complex pbb = std::conj(pb);
            Complex Fab_m = (a == b) ? dG_mixed[a] * q[a] : Complex(0, 0);
            Complex Fpb_m = std::conj(G[b]) * (-2.0 * mb) / std::pow(p, 2 * mb + 1);
            mixed(a, b) = -(Fab_m + Fap * pbb) / Fp + Fa * (Fpb_m + Fpp * pbb) / (Fp * Fp);
            Complex Fab_h = (a == b) ? dG_holo[a] * q[a] : Complex(0, 0);
            Complex Fpb_h = G[b] * (-2.0 * mb) / std::pow(p, 2 * mb + 1);
            holo(a, b) = -(Fab_h + Fap * pb) / Fp + Fa * (Fpb_h + Fpp * pb) / (Fp * Fp);
        }
    }
}

void Domain::hess_fd(const VecC& z, const std::function<double(const VecC&)>& f, MatC& mixed,
                     MatC& holo) const {
    double h = 1e-5 * std::max(1.0, z.norm());
    int N = 2 * n_;
    auto shift = [&](int k, double s) {
        VecC w = z;
        if (k < n_) w[k] += s;
        else w[k - n_] += Complex(0, s);
        return w;
    };
    MatR H(N, N);
    double f0 = f(z);
    for (int a = 0; a < N; ++a) {
        H(a, a) = (f(shift(a, h)) - 2 * f0 + f(shift(a, -h))) / (h * h);
        for (int b = a + 1; b < N; ++b) {
            VecC pp = shift(a, h), pm = shift(a, h), mp = shift(a, -h), mm = shift(a, -h);
            if (b < n_) {
                pp[b] += h;
                pm[b] -= h;
                mp[b] += h;
                mm[b] -= h;
            } else {
                pp[b - n_] += Complex(0, h);
                pm[b - n_] -= Complex(0, h);
                mp[b - n_] += Complex(0, h);
                mm[b - n_] -= Complex(0, h);
            }
            H(a, b) = H(b, a) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h);
        }
    }
    mixed.resize(n_, n_);
    holo.resize(n_, n_);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            double fxx = H(a, b), fyy = H(n_ + a, n_ + b);
            double fxy = H(a, n_ + b), fyx = H(n_ + a, b);
            mixed(a, b) = Complex((fxx + fyy) / 4.0, (fxy - fyx) / 4.0);
            holo(a, b) = Complex((fxx - fyy) / 4.0, -(fxy + fyx) / 4.0);
        }
}

MatC Domain::hess_mixed(const VecC& z) const {
    if (kind_ == DomainKind::custom) {
        if (form_ == DefiningForm::analytic && custom_.hess_mixed) return custom_.hess_mixed(z);
        MatC m, h;
        hess_fd(z, [&](const VecC& w) { return r(w); }, m, h);
        return m;
    }
    if (form_ == DefiningForm::gauge) {
        MatC m, h;
        gauge_second_derivatives(z, m, h);
        return m;
    }
    MatC m = MatC::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) {
        int mj = exponents_[j];
        m(j, j) = double(mj) * double(mj) * std::pow(std::norm(z[j]), mj - 1);
    }
    return m;
}

MatC Domain::hess_holo(const VecC& z) const {
    if (kind_ == DomainKind::custom) {
        if (form_ == DefiningForm::analytic && custom_.hess_holo) return custom_.hess_holo(z);
        MatC m, h;
        hess_fd(z, [&](const VecC& w) { return r(w); }, m, h);
        return h;
    }
    if (form_ == DefiningForm::gauge) {
        MatC m, h;
        gauge_second_derivatives(z, m, h);
        return h;
    }
    MatC h = MatC::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) {
        int mj = exponents_[j];
        if (mj >= 2)
            h(j, j) = double(mj) * double(mj - 1) * std::pow(std::norm(z[j]), mj - 2) *
                      std::conj(z[j]) * std::conj(z[j]);
    }
    return h;
}

MatR Domain::hess_real(const VecC& z) const {
    MatC S = hess_holo(z), H = hess_mixed(z);
    int N = 2 * n_;
    MatR out(N, N);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            Complex s = S(a, b), m = H(a, b);
            out(a, b) = 2 * s.real() + 2 * m.real();
            out(a, n_ + b) = -2 * s.imag() + 2 * m.imag();
            out(n_ + a, b) = -2 * s.imag() - 2 * m.imag();
            out(n_ + a, n_ + b) = -2 * s.real() + 2 * m.real();
        }
    return out;
}

VecC Domain::unit_normal(const VecC& z) const {
    VecC g = grad(z);
    double nrm = g.norm();
    if (nrm < 1e-12) throw SingularityError("unit_normal: degenerate gradient");
    VecC eta = g.conjugate() / nrm;
    return eta;
}

PointQuery Domain::query(const VecC& z) const {
    PointQuery q;
    q.z = z;
    q.r = r(z);
    q.d = std::abs(q.r);
    q.grad = grad(z);
    double nrm = q.grad.norm();
    if (nrm >= 1e-12) q.normal = q.grad.conjugate() / nrm;
    else q.normal = VecC::Zero(n_);
    return q;
}

Domain domain_from_json_text(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::string kind = j.value("kind", "unit_ball");
    DefiningForm form =
        j.value("form", std::string("analytic")) == "gauge" ? DefiningForm::gauge
                                                            : DefiningForm::analytic;
    if (kind == "unit_ball" || kind == "ball") {
        int n = j.value("dimension", 2);
        return Domain::ball(n, form);
    }
    if (kind == "complex_ellipsoid" || kind == "ellipsoid") {
        std::vector<int> m = j.at("exponents").get<std::vector<int>>();
        return Domain::ellipsoid(m, form);
    }
    throw InvalidArgument("domain json: custom domains are registered programmatically only");
}

Domain domain_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("domain json: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return domain_from_json_text(ss.str());
}

}  // namespace cft
