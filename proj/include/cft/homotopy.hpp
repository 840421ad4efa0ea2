#pragma once

#include "cft/currents.hpp"

namespace cft {

struct RetractParams {
    double rho = 0.1;      // averaging ball radius in Lambda
    double gamma = 0.1;    // regime threshold against d(z)
    double t0 = 0.25;      // inner time cutoff (integrand vanishes below)
    double eps0 = 0.2;     // admissible support depth of the input field
    int n_lambda = 64;     // quasi-random nodes in the Lambda ball
    int gl_order = 4;      // Gauss-Legendre order per time panel
    int tail_levels = 12;  // geometric grading depth toward t = 1 at scale gamma d(z)
    int refine = 0;        // each level splits panels and raises the order
    std::uint64_t seed = 101;

    void validate() const {
        if (!(rho > 0 && rho <= 1)) throw InvalidArgument("retract: rho outside (0,1]");
        if (!(gamma > 0 && gamma <= 0.5)) throw InvalidArgument("retract: gamma outside (0,1/2]");
        if (!(t0 > 0 && t0 < 1)) throw InvalidArgument("retract: t0 outside (0,1)");
    }
};

// Cutoff of the retract switch: 1 below 1/2, 0 above 1, smooth in between.
inline double retract_phi(double x) { return SmoothStep::value(2.0 * (x - 0.5)); }
inline double retract_phi_deriv(double x) { return 2.0 * SmoothStep::deriv(2.0 * (x - 0.5)); }

// Value and first derivatives of the retract path h_Lambda(z, t).
struct RetractJet {
    VecC h;
    VecC dh_dt;
    MatC dLambda;            // d h / d Lambda (complex linear)
    // pieces for the spatial differential
    VecC z;
    VecC lambda;
    double t = 0, c1 = 0, c2 = 0, dc1_scalar = 0, dc2_scalar = 0;
    VecC grad_r;             // gauge-form gradient at z
    MatC Az, Atz;            // Atz empty when the switch keeps it off
    bool need_tz = false;
    std::function<MatC(const VecC&, const VecC&)> dA;  // bound to the metric
    VecC AzL, AtzL;

    // Spatial differential applied to the real direction u.
    VecC dz(const VecC& u) const;
};

class Homotopy {
public:
    Homotopy(RetractParams params, MetricModel metric);

    const RetractParams& params() const { return params_; }
    const MetricModel& metric() const { return metric_; }
    const Domain& gauge_domain() const { return gauge_dom_; }

    RetractJet retract(const VecC& z, double t, const VecC& lambda) const;

    // theta(h)[dh/dt, d_z h[u]], the dt-component of the pullback.
    Complex pullback_t_component(const FormField& theta, const RetractJet& jet,
                                 const VecC& u) const;

    // (1,0) coefficients of H theta at z (H theta is a real 1-form).
    VecC omega10(const FormField& theta, const VecC& z) const;
    FormField apply(const FormField& theta) const;

    // Residual of the reconstruction d(H theta) = theta at a probe, by central
    // differences of the averaged 1-form; returns (residual, scale).
    std::pair<double, double> identity_residual(const FormField& theta, const VecC& z,
                                                double fd_step = 2e-4) const;

private:
    struct TimeNode {
        double t;
        double w;
    };
    std::vector<TimeNode> time_nodes(double d) const;

    RetractParams params_;
    MetricModel metric_;
    Domain gauge_dom_;
    std::vector<VecC> lambda_nodes_;
};

struct SplitResult {
    FormField w10;
    FormField w01;
    double conj_identity_error = 0;  // max |conj(w01) + w10| over probes
    double dbar_residual = 0;        // relative antisymmetrized dbar of w01
};

// w = -i omega for a real 1-form omega; returns the bidegree parts and the
// consistency checks at the supplied probes.
SplitResult split_and_reconstruct(const FormField& omega, const std::vector<VecC>& probes,
                                  double fd_step = 1e-5);

struct RegimeReport {
    // k(h, dh/dt) and k(h, d_z h[u]) / k(z, u) maxima per regime
    double inner_k_dt = 0, inner_k_dz = 0;        // 1 - t <= gamma d / 2
    double middle_k_dt = 0, middle_k_dz = 0;      // gamma d / 2 <= 1 - t <= gamma d
    double outer_k_dt = 0, outer_k_dz_scaled = 0; // 1 - t >= gamma d, (1-t / d)^{1 - 1/m} scaling
    double incl_radial = 0;     // membership constant of tz + t(1-t)/d A(z)L in (1-t)/d P_d(z)
    double incl_outer = 0;      // membership constant of tz + t A(tz)L in t rho P_{d(tz)}(tz)
    double image_ctrl = 0;      // membership constant of h in t rho P_{1-t}(tz), outer regime
    double interior_fraction = 0;
    int samples = 0;
};

RegimeReport regime_report(const Homotopy& H, int samples, std::uint64_t seed = 313);

}  // namespace cft
