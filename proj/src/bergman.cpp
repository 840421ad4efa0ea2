#include "cft/bergman.hpp"

namespace cft {

MetricModel MetricModel::exact_ball(Domain domain) {
    if (domain.kind() != DomainKind::unit_ball)
        throw InvalidArgument("metric: exact_ball needs the unit ball domain");
    MetricModel m;
    m.kind_ = MetricKind::exact_ball;
    m.domain_ = std::move(domain);
    return m;
}

MetricModel MetricModel::surrogate(Domain domain, int molly_nodes, double molly_radius,
                                   std::uint64_t seed) {
    MetricModel m;
    m.kind_ = MetricKind::surrogate_frame;
    m.domain_ = std::move(domain);
    m.molly_nodes_ = molly_nodes;
    m.molly_radius_ = molly_radius;
    m.molly_dirs_ = complex_ball_points(m.domain_.dimension(), std::max(0, molly_nodes - 1), seed);
    return m;
}

MetricModel MetricModel::custom(Domain domain, std::function<MatC(const VecC&)> B,
                                std::function<MatC(const VecC&, const VecC&)> dB) {
    MetricModel m;
    m.kind_ = MetricKind::custom;
    m.domain_ = std::move(domain);
    m.custom_B_ = std::move(B);
    m.custom_dB_ = std::move(dB);
    return m;
}

// ||v||^2 = conj(v)^t B v with B = (n+1)[(1-|z|^2) I + z z^H]/(1-|z|^2)^2, so
// the dilated complex line at z is the radial one.
MatC MetricModel::ball_matrix(const VecC& zeta) const {
    int n = domain_.dimension();
    double s = zeta.squaredNorm();
    double u = 1.0 - s;
    MatC b = MatC::Identity(n, n) * u;
    b += zeta * zeta.adjoint();
    return (double(n + 1) / (u * u)) * b;
}

MatC MetricModel::surrogate_matrix(const VecC& zeta) const {
    double d = domain_.dist(zeta);
    int n = domain_.dimension();
    std::vector<VecC> nodes{zeta};
    for (const auto& dir : molly_dirs_) nodes.push_back(zeta + molly_radius_ * d * dir);
    MatC acc = MatC::Zero(n, n);
    for (const auto& p : nodes) {
        double dp = domain_.dist(p);
        ExtremalFrame f = extremal_basis(domain_, p, dp);
        VecC w(n);
        for (int j = 0; j < n; ++j) w[j] = 1.0 / (f.radii[j] * f.radii[j]);
        acc += f.vectors * w.asDiagonal() * f.vectors.adjoint();
    }
    return acc / double(nodes.size());
}

HermitianPD MetricModel::bergman_matrix(const VecC& zeta) const {
    if (domain_.dist(zeta) < 1e-4)
        throw InvalidArgument("metric: point too close to the boundary");
    switch (kind_) {
        case MetricKind::exact_ball: return HermitianPD(ball_matrix(zeta));
        case MetricKind::surrogate_frame: {
            MatC b = surrogate_matrix(zeta);
            return HermitianPD(0.5 * (b + b.adjoint().eval()), 1e-9);
        }
        case MetricKind::custom: {
            MatC b = custom_B_(zeta);
            return HermitianPD(0.5 * (b + b.adjoint().eval()), 1e-9);
        }
    }
    throw Error("metric: unreachable");
}

double MetricModel::norm(const VecC& zeta, const VecC& v) const {
    HermitianPD B = bergman_matrix(zeta);
    Complex q = (v.adjoint() * B.matrix() * v)(0);
    return std::sqrt(std::max(0.0, q.real()));
}

MatC MetricModel::a_matrix(const VecC& zeta) const { return bergman_matrix(zeta).inv_sqrt(); }

MetricFrame MetricModel::frame(const VecC& zeta) const {
    HermitianPD B = bergman_matrix(zeta);
    MetricFrame f;
    f.point = zeta;
    f.A = B.inv_sqrt();
    f.evalsB = B.eigenvalues();
    return f;
}

MatC MetricModel::dB(const VecC& zeta, const VecC& u) const {
    int n = domain_.dimension();
    if (kind_ == MetricKind::exact_ball) {
        double s = zeta.squaredNorm();
        double w = 1.0 - s;
        double ds = 2.0 * (u.dot(zeta)).real();  // d|zeta|^2 along the real direction u
        MatC core = MatC::Identity(n, n) * w + zeta * zeta.adjoint();
        MatC dcore = MatC::Identity(n, n) * (-ds) + u * zeta.adjoint() + zeta * u.adjoint();
        return double(n + 1) * (dcore / (w * w) + core * (2.0 * ds / (w * w * w)));
    }
    if (kind_ == MetricKind::custom && custom_dB_) return custom_dB_(zeta, u);
    // Surrogate metrics are only approximately smooth; central differences.
    double h = 1e-5 * domain_.dist(zeta);
    MatC bp = kind_ == MetricKind::custom ? custom_B_(zeta + h * u) : surrogate_matrix(zeta + h * u);
    MatC bm = kind_ == MetricKind::custom ? custom_B_(zeta - h * u) : surrogate_matrix(zeta - h * u);
    return (bp - bm) / (2 * h);
}

MatC MetricModel::dA(const VecC& zeta, const VecC& u) const {
    HermitianPD B = bergman_matrix(zeta);
    MatC A = B.inv_sqrt();
    HermitianPD M(A);
    double d = domain_.dist(zeta);
    double mu_min = M.eigenvalues()[M.size() - 1];
    double radius = std::min(contour_c_ * d, 0.5 * mu_min);
    ContourSpec contour = ContourSpec::for_spectrum(M.eigenvalues(), radius, 128);
    // A = Phi^{-1}(B) with Phi(M) = M^{-2}; the true derivative solves
    // M X + X M = -M^2 dB M^2 (the displayed dphi drops this minus sign).
    MatC M2 = M.matrix() * M.matrix();
    return sylvester_contour(M, MatC(-M2 * dB(zeta, u) * M2), contour);
}

MatC MetricModel::dA_fd(const VecC& zeta, const VecC& u, double step_factor) const {
    double h = step_factor * domain_.dist(zeta);
    MatC ap = a_matrix(zeta + h * u);
    MatC am = a_matrix(zeta - h * u);
    return (ap - am) / (2 * h);
}

SandwichReport sandwich_check(const MetricModel& model, const VecC& zeta, double rho,
                              int samples, std::uint64_t seed) {
    const Domain& dom = model.domain();
    int n = dom.dimension();
    double d = dom.dist(zeta);
    ExtremalFrame f = extremal_basis(dom, zeta, d);
    Polydisc disc(f);
    MatC A = model.a_matrix(zeta);
    MatC Ainv = A.inverse();
    Rng rng(seed);
    SandwichReport rep;
    rep.samples = samples;
    double memb_max = 0, pull_max = 0;
    for (int s = 0; s < samples; ++s) {
        VecC v = rho * rng.unit_cvector(n);
        memb_max = std::max(memb_max, disc.membership(zeta + A * v) / rho);
        VecC star(n);
        for (int j = 0; j < n; ++j) star[j] = std::polar(f.radii[j], rng.uniform(0, 2 * kPi));
        pull_max = std::max(pull_max, (Ainv * (disc.point(star) - zeta)).norm());
    }
    rep.C_best = memb_max;
    rep.c_best = 1.0 / pull_max;
    return rep;
}

EigenTauReport eigen_tau_check(const MetricModel& model, const VecC& zeta,
                               const FrameOptions& opts) {
    const Domain& dom = model.domain();
    int n = dom.dimension();
    double d = dom.dist(zeta);
    ExtremalFrame f = extremal_basis(dom, zeta, d, opts);
    HermitianPD B = model.bergman_matrix(zeta);
    EigenTauReport rep;
    rep.pair_ratios.resize(n);
    // Reversed pairing: the largest eigenvalue goes with tau_1, then the
    // second largest with tau_n, third with tau_{n-1}, and so on.
    rep.pair_ratios[0] = B.eigenvalues()[0] * f.radii[0] * f.radii[0];
    for (int i = 1; i < n; ++i) {
        int j = n - i;  // tau index n, n-1, ..., 2 (0-based j)
        rep.pair_ratios[i] = B.eigenvalues()[i] * f.radii[j] * f.radii[j];
    }
    double detB = 1;
    for (int i = 0; i < n; ++i) detB *= B.eigenvalues()[i];
    rep.det_ratio = detB * polydisc_volume(f);
    return rep;
}

}  // namespace cft
