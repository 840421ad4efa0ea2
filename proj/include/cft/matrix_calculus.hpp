#pragma once

#include "cft/util.hpp"

namespace cft {

// Validated Hermitian positive definite matrix with cached eigen-data
// (eigenvalues descending, deterministic eigenvector phases).
class HermitianPD {
public:
    explicit HermitianPD(MatC m, double herm_tol = 1e-12);

    int size() const { return (int)m_.rows(); }
    const MatC& matrix() const { return m_; }
    const VecR& eigenvalues() const { return evals_; }  // descending
    const MatC& eigenvectors() const { return evecs_; } // columns match eigenvalues

    MatC inv_sqrt() const;   // A with A*A*M = I
    MatC sqrt() const;
    double cond() const { return evals_[0] / evals_[evals_.size() - 1]; }

private:
    MatC m_;
    VecR evals_;
    MatC evecs_;
};

// d Phi_M(H) = M^{-2}(MH + HM)M^{-2} for Phi(M) = M^{-2}.
MatC dphi(const HermitianPD& M, const MatC& H);

// Unique Hermitian H with MH + HM = C, solved in M's eigenbasis.
MatC sylvester_direct(const HermitianPD& M, const MatC& C);

// Union of counterclockwise circles enclosing sp(M) and excluding sp(-M).
struct ContourSpec {
    struct Circle {
        double center = 0;   // on the positive real axis
        double radius = 0;
        int nodes = 0;
    };
    std::vector<Circle> circles;

    // Discs of the given radius around each spectrum point, merged when closer
    // than half a radius, node counts scaled with the merged radius.
    static ContourSpec for_spectrum(const VecR& spectrum_desc, double radius, int base_nodes = 128);

    bool encloses(double x) const;
    double min_real() const;
    void validate_for(const VecR& spectrum_desc) const;
};

// H = (1/2 pi i) oint (xi I - M)^{-1} C (xi I + M)^{-1} d xi over the contour,
// trapezoid per circle; equals sylvester_direct for valid contours.
MatC sylvester_contour(const HermitianPD& M, const MatC& C, const ContourSpec& contour);

// Inverse Frechet derivative of Phi at B: returns H with dphi(M, H) = Hp where
// M = B^{-1/2}. contour_scale is relative to the smallest eigenvalue of M.
MatC dphi_inverse(const HermitianPD& B, const MatC& Hp, double contour_scale = 0.25,
                  int base_nodes = 128);
MatC dphi_inverse(const HermitianPD& B, const MatC& Hp, const ContourSpec& contour);

}  // namespace cft
