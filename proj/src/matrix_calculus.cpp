#include "cft/matrix_calculus.hpp"

#include <Eigen/Eigenvalues>

namespace cft {

HermitianPD::HermitianPD(MatC m, double herm_tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidArgument("hermitian_pd: non-square");
    double scale = std::max(1.0, m_.norm());
    if ((m_ - m_.adjoint()).norm() > herm_tol * scale)
        throw InvalidArgument("hermitian_pd: not Hermitian");
    m_ = 0.5 * (m_ + m_.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<MatC> es(m_);
    if (es.info() != Eigen::Success) throw Error("hermitian_pd: eigensolver failure");
    int n = size();
    evals_.resize(n);
    evecs_.resize(n, n);
    // Eigen returns ascending order; store descending with fixed phases.
    for (int i = 0; i < n; ++i) {
        evals_[i] = es.eigenvalues()[n - 1 - i];
        evecs_.col(i) = es.eigenvectors().col(n - 1 - i);
        int imax = 0;
        for (int k = 1; k < n; ++k)
            if (std::abs(evecs_(k, i)) > std::abs(evecs_(imax, i))) imax = k;
        Complex ph = evecs_(imax, i);
        if (std::abs(ph) > 0) evecs_.col(i) *= std::conj(ph) / std::abs(ph);
    }
    if (evals_[n - 1] <= 0) throw InvalidArgument("hermitian_pd: not positive definite");
}

MatC HermitianPD::inv_sqrt() const {
    int n = size();
    VecC d(n);
    for (int i = 0; i < n; ++i) d[i] = 1.0 / std::sqrt(evals_[i]);
    return evecs_ * d.asDiagonal() * evecs_.adjoint();
}

MatC HermitianPD::sqrt() const {
    int n = size();
    VecC d(n);
    for (int i = 0; i < n; ++i) d[i] = std::sqrt(evals_[i]);
    return evecs_ * d.asDiagonal() * evecs_.adjoint();
}

MatC dphi(const HermitianPD& M, const MatC& H) {
    int n = M.size();
    VecC d(n);
    for (int i = 0; i < n; ++i) d[i] = 1.0 / (M.eigenvalues()[i] * M.eigenvalues()[i]);
    MatC Minv2 = M.eigenvectors() * d.asDiagonal() * M.eigenvectors().adjoint();
    const MatC& A = M.matrix();
    return Minv2 * (A * H + H * A) * Minv2;
}

MatC sylvester_direct(const HermitianPD& M, const MatC& C) {
    const MatC& U = M.eigenvectors();
    const VecR& lam = M.eigenvalues();
    MatC Ct = U.adjoint() * C * U;
    int n = M.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Ct(i, j) /= (lam[i] + lam[j]);
    return U * Ct * U.adjoint();
}

ContourSpec ContourSpec::for_spectrum(const VecR& spectrum_desc, double radius, int base_nodes) {
    if (spectrum_desc.size() == 0) throw InvalidArgument("contour: empty spectrum");
    double mu_min = spectrum_desc[spectrum_desc.size() - 1];
    if (mu_min <= 0) throw InvalidArgument("contour: spectrum must be positive");
    radius = std::min(radius, 0.5 * mu_min);
    if (radius <= 0) throw InvalidArgument("contour: nonpositive radius");

    std::vector<double> centers(spectrum_desc.data(),
                                spectrum_desc.data() + spectrum_desc.size());
    std::sort(centers.begin(), centers.end());
    // Greedy merge of intervals closer than half a radius.
    std::vector<std::pair<double, double>> intervals;  // [lo, hi]
    for (double c : centers) {
        if (!intervals.empty() && c - radius <= intervals.back().second + 0.5 * radius)
            intervals.back().second = std::max(intervals.back().second, c + radius);
        else
            intervals.push_back({c - radius, c + radius});
    }
    ContourSpec spec;
    for (auto [lo, hi] : intervals) {
        Circle c;
        c.center = 0.5 * (lo + hi);
        c.radius = 0.5 * (hi - lo);
        c.nodes = std::max(base_nodes, (int)std::ceil(base_nodes * c.radius / radius));
        spec.circles.push_back(c);
    }
    return spec;
}

bool ContourSpec::encloses(double x) const {
    for (const auto& c : circles)
        if (std::abs(x - c.center) < c.radius) return true;
    return false;
}

double ContourSpec::min_real() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : circles) m = std::min(m, c.center - c.radius);
    return m;
}

void ContourSpec::validate_for(const VecR& spectrum_desc) const {
    if (circles.empty()) throw InvalidArgument("contour: no circles");
    for (int i = 0; i < spectrum_desc.size(); ++i) {
        double mu = spectrum_desc[i];
        if (!encloses(mu))
            throw InvalidArgument("contour: eigenvalue " + std::to_string(mu) + " not enclosed");
        if (encloses(-mu))
            throw InvalidArgument("contour: mirror eigenvalue enclosed");
    }
    if (min_real() <= 0)
        throw InvalidArgument("contour: crosses the imaginary axis");
}

MatC sylvester_contour(const HermitianPD& M, const MatC& C, const ContourSpec& contour) {
    contour.validate_for(M.eigenvalues());
    const MatC& U = M.eigenvectors();
    const VecR& lam = M.eigenvalues();
    MatC Ct = U.adjoint() * C * U;
    int n = M.size();
    MatC Ht = MatC::Zero(n, n);
    for (const auto& circle : contour.circles) {
        // (1/2 pi i) oint f(xi) dxi  ->  (R / N) sum f(xi_k) e^{i s_k}
        for (int k = 0; k < circle.nodes; ++k) {
            double s = 2 * kPi * (k + 0.5) / circle.nodes;
            Complex e = std::polar(1.0, s);
            Complex xi = circle.center + circle.radius * e;
            Complex w = circle.radius * e / double(circle.nodes);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    Ht(i, j) += w * Ct(i, j) / ((xi - lam[i]) * (xi + lam[j]));
        }
    }
    return U * Ht * U.adjoint();
}

MatC dphi_inverse(const HermitianPD& B, const MatC& Hp, const ContourSpec& contour) {
    MatC A = B.inv_sqrt();
    HermitianPD M(A);
    MatC M2 = M.matrix() * M.matrix();
    return sylvester_contour(M, M2 * Hp * M2, contour);
}

MatC dphi_inverse(const HermitianPD& B, const MatC& Hp, double contour_scale, int base_nodes) {
    MatC A = B.inv_sqrt();
    HermitianPD M(A);
    double mu_min = M.eigenvalues()[M.size() - 1];
    ContourSpec contour = ContourSpec::for_spectrum(M.eigenvalues(), contour_scale * mu_min,
                                                    base_nodes);
    MatC M2 = M.matrix() * M.matrix();
    return sylvester_contour(M, M2 * Hp * M2, contour);
}

}  // namespace cft
