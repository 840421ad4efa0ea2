#pragma once

#include "cft/currents.hpp"
#include "cft/wedge.hpp"

namespace cft {

// Support pair S(zeta, z) = <Q(zeta, z), zeta - z>; the linear choice takes
// Q = grad r at zeta, which is globally admissible on convex domains.
struct SupportModel {
    Domain domain = Domain::ball(2);
    double eta0 = Domain::kBoundaryCollar;

    Complex S(const VecC& zeta, const VecC& z) const {
        VecC g = domain.grad(zeta);
        Complex acc(0, 0);
        for (int i = 0; i < zeta.size(); ++i) acc += g[i] * (zeta[i] - z[i]);
        return acc;
    }
    VecC Q(const VecC& zeta, const VecC&) const { return domain.grad(zeta); }

    // Interior cutoff: 1 where r <= -eta0, 0 where r >= -eta0/2.
    double chi(const VecC& z) const {
        double r = domain.r(z);
        return SmoothStep::value((r + eta0) / (eta0 / 2));
    }
};

SupportModel support_linear(const Domain& domain);

struct SFormEval {
    VecC s;        // (1,0) coefficients in d zeta
    MatC dbar_s;   // (k,i) coefficient of dzbar_k ^ dzeta_i
};
SFormEval s_form(const SupportModel& support, const VecC& zeta, const VecC& z);

struct QFormEval {
    VecC q;
    MatC dbar_q;
};
QFormEval q_form(const SupportModel& support, const VecC& zeta, const VecC& z);

struct KernelParams {
    Complex cn{1.0, 0.0};
    int boundary_points = 160;   // base mesh of the interior gauge-polar grid
    int radial_levels = 9;       // octave levels d in (2^{-l-1}, 2^{-l}]
    int radial_subdivisions = 2; // sub-shells per octave
    int level_growth_cap = 1024; // cap of per-level boundary counts
    int refine = 0;
    std::uint64_t seed = 401;
    double singular_tol = 1e-13;
};

// The Cauchy-Fantappie kernel as an (n, n-1) exterior form in d zeta,
// K = cn sum_k s ^ (dbar s)^{n-1-k} ^ (dbar q)^k / (<s,.>^{n-k} (1-<q,.>)^{k+1}).
WedgeForm kernel_K(const KernelParams& params, const SupportModel& support, const VecC& zeta,
                   const VecC& z);

// Coefficient psi with omega ^ K = psi d(lambda), omega a (0,1) coefficient
// vector at zeta; includes the real-volume conversion of the top monomial.
Complex kernel_psi(const KernelParams& params, const SupportModel& support, const VecC& zeta,
                   const VecC& z, const VecC& omega01);

// Interior quadrature grid in gauge-polar cells, graded toward the boundary.
struct InteriorGrid {
    std::vector<VecC> points;
    std::vector<double> weights;
    static InteriorGrid build(const Domain& domain, const KernelParams& params);
};

// Solution of dbar u = omega by u(z) = int_D omega ^ K(., z): the input field
// is sampled once over the grid, evaluations are kernel sums.
class DbarSolution {
public:
    DbarSolution(KernelParams params, SupportModel support, InteriorGrid grid,
                 std::function<VecC(const VecC&)> omega, std::vector<VecC> omega_samples);

    // Fixed-grid kernel sum: the production path for solution values.
    Complex eval(const VecC& z) const;
    // Target-centered polar quadrature of the same integral; the node set
    // adapts to z, so finite differences of this path converge.
    Complex eval_polar(const VecC& z, int resolution = 10, int radial_order = 10) const;
    // Finite-difference dbar residual along the polar path.
    double residual(const std::vector<VecC>& probes, double fd_step = 1e-4) const;

    const InteriorGrid& grid() const { return grid_; }
    const KernelParams& params() const { return params_; }

private:
    KernelParams params_;
    SupportModel support_;
    InteriorGrid grid_;
    std::function<VecC(const VecC&)> omega_fn_;
    std::vector<VecC> omega_;
};

DbarSolution solve_dbar(const KernelParams& params, const SupportModel& support,
                        const std::function<VecC(const VecC&)>& omega01);

// Least-squares kernel normalization from the known-primitive test on the
// given domain; returns the complex constant and stores nothing.
Complex calibrate_cn(KernelParams params, const Domain& domain, int probes = 24);

// Pinned normalizations from the calibration runs: n = 1 is the Cauchy
// constant (up to this artifact's orientation), n = 2 carries the wedge
// conventions used here. Other dimensions calibrate on demand.
Complex default_cn(int n);

struct PsiTildeValue {
    double value = 0;
    double part_near = 0;  // contribution of the -r(z) conj(zeta-z) part of s
    double part_far = 0;   // contribution of the support-function part of s
};

// psi_tilde_i(zeta, z): the kernel contracted against the metric frame with
// the i-th conjugate slot omitted, scaled by k(zeta, conj(e_i)) det B(zeta).
PsiTildeValue psi_tilde(const KernelParams& params, const SupportModel& support,
                        const MetricModel& metric, const VecC& zeta, const VecC& z, int i);

}  // namespace cft
