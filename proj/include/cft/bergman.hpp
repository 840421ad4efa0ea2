#pragma once

#include "cft/geometry.hpp"
#include "cft/matrix_calculus.hpp"

namespace cft {

enum class MetricKind { exact_ball, surrogate_frame, custom };

struct MetricFrame {
    VecC point;
    MatC A;          // inverse square root of B; columns are the frame e_j
    VecR evalsB;     // eigenvalues of B, descending
    VecC e(int j) const { return A.col(j); }
};

struct SandwichReport {
    double c_best = 0;   // largest c with c*rho*P_d inside the A-ball image
    double C_best = 0;   // smallest C with the image inside C*rho*P_d
    int samples = 0;
};

struct EigenTauReport {
    VecR pair_ratios;    // lambda_1 tau_1^2, lambda_2 tau_n^2, ..., lambda_n tau_2^2
    double det_ratio = 0;  // det B * vol(P_{d}(zeta))
};

// Metric backends: the closed-form ball metric, a frame surrogate built from
// mollified extremal bases with radii 1/tau_j^2, or a user evaluator.
class MetricModel {
public:
    static MetricModel exact_ball(Domain domain);
    static MetricModel surrogate(Domain domain, int molly_nodes = 8,
                                 double molly_radius = 0.1, std::uint64_t seed = 17);
    static MetricModel custom(Domain domain, std::function<MatC(const VecC&)> B,
                              std::function<MatC(const VecC&, const VecC&)> dB = nullptr);

    MetricKind kind() const { return kind_; }
    const Domain& domain() const { return domain_; }

    HermitianPD bergman_matrix(const VecC& zeta) const;
    double norm(const VecC& zeta, const VecC& v) const;
    MatC a_matrix(const VecC& zeta) const;
    MetricFrame frame(const VecC& zeta) const;

    // Directional derivative of B along the real direction u.
    MatC dB(const VecC& zeta, const VecC& u) const;
    // Frechet derivative of zeta -> A(zeta) through the contour calculus.
    MatC dA(const VecC& zeta, const VecC& u) const;
    // Central finite differences of a_matrix, the independent cross-check.
    MatC dA_fd(const VecC& zeta, const VecC& u, double step_factor = 1e-5) const;

    double contour_scale() const { return contour_c_; }

private:
    MetricModel() = default;
    MatC ball_matrix(const VecC& zeta) const;
    MatC surrogate_matrix(const VecC& zeta) const;

    MetricKind kind_ = MetricKind::exact_ball;
    Domain domain_ = Domain::ball(2);
    int molly_nodes_ = 8;
    double molly_radius_ = 0.1;
    double contour_c_ = 0.2;   // contour radius = contour_c * d(zeta), clipped
    std::vector<VecC> molly_dirs_;
    std::function<MatC(const VecC&)> custom_B_;
    std::function<MatC(const VecC&, const VecC&)> custom_dB_;
};

SandwichReport sandwich_check(const MetricModel& model, const VecC& zeta, double rho,
                              int samples, std::uint64_t seed = 29);

EigenTauReport eigen_tau_check(const MetricModel& model, const VecC& zeta,
                               const FrameOptions& opts = {});

}  // namespace cft
