#include "cft/polynomial.hpp"

#include <Eigen/Eigenvalues>

namespace cft {

std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs) {
    // Trim leading (high-degree) zeros.
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-14) coeffs.pop_back();
    int deg = (int)coeffs.size() - 1;
    if (deg < 1) return {};
    MatC comp = MatC::Zero(deg, deg);
    Complex lead = coeffs[deg];
    for (int i = 0; i < deg; ++i) {
        comp(i, deg - 1) = -coeffs[i] / lead;
        if (i > 0) comp(i, i - 1) = Complex(1, 0);
    }
    Eigen::ComplexEigenSolver<MatC> es(comp);
    if (es.info() != Eigen::Success) throw Error("polynomial_roots: eigensolver failure");
    std::vector<Complex> roots(deg);
    for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()[i];
    return roots;
}

}  // namespace cft
