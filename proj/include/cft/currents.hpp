#pragma once

#include "cft/bergman.hpp"
#include "cft/polynomial.hpp"

namespace cft {

// Smooth (p,q)-form with p+q <= 2, carried by coefficient evaluators.
//   (1,1): coefficient matrix Theta(z), the form i sum Theta_jk dz_j ^ dzbar_k;
//   (1,0)/(0,1): coefficient vectors; a real 1-form holds both with b = conj(a).
// The real 2-form action used by pullbacks is
//   theta[X, Y] = i * (sum Theta_jk X_j conj(Y_k) - sum Theta_jk Y_j conj(X_k)).
class FormField {
public:
    using Coeff11 = std::function<MatC(const VecC&)>;
    using Coeff1 = std::function<VecC(const VecC&)>;
    using Support = std::function<bool(const VecC&)>;

    static FormField form11(int n, Coeff11 theta, Support support = nullptr);
    static FormField form10(int n, Coeff1 a, Support support = nullptr);
    static FormField form01(int n, Coeff1 b, Support support = nullptr);
    // Real 1-form with (1,0) part a and (0,1) part conj(a).
    static FormField real_one_form(int n, Coeff1 a, Support support = nullptr);
    static FormField zero11(int n) {
        return form11(n, [n](const VecC&) { return MatC::Zero(n, n); });
    }

    int nvars() const { return n_; }
    int p() const { return p_; }
    int q() const { return q_; }
    bool is_real_one_form() const { return one_form_; }

    bool in_support(const VecC& z) const { return !support_ || support_(z); }
    const Support& support() const { return support_; }

    MatC coeff11(const VecC& z) const;
    VecC coeff10(const VecC& z) const;
    VecC coeff01(const VecC& z) const;

    // Bidegree-slot pairing of a (1,1) field: sum Theta_jk u_j conj(v_k).
    Complex pair11(const VecC& z, const VecC& u, const VecC& v) const;
    // Real 2-form action on tangent vectors (complex output; real when the
    // coefficient matrix is Hermitian).
    Complex action2(const VecC& z, const VecC& X, const VecC& Y) const;
    // 1-form action sum a_j X_j + sum b_k conj(X_k).
    Complex action1(const VecC& z, const VecC& X) const;

    FormField scaled(Complex factor) const;

private:
    FormField() = default;
    int n_ = 0, p_ = 0, q_ = 0;
    bool one_form_ = false;  // flags the real 1-form carrying both parts
    Coeff11 theta_;
    Coeff1 a10_, b01_;
    Support support_;
};

struct DivisorModel {
    Polynomial f;
    double weight = 1.0;
    double smoothing = 0.05;
};

// Smoothed Lelong field of the divisor: coefficient matrix
//   Theta_jk = s^2 d_j f conj(d_k f) / (|f|^2 + s^2)^2,
// i.e. the complex Hessian of log(|f|^2 + s^2).
FormField lelong_smoothed(const DivisorModel& div);

// Boundary-localized variant: the complex Hessian of chi(d) * log(|f|^2+s^2)
// with a C-infinity step chi equal to 1 on {d <= eps0/2} and 0 on {d >= eps0}.
// Exact-by-construction closedness survives the cutoff; smoothness of chi
// keeps the homotopy quadrature spectrally convergent.
FormField lelong_smoothed_localized(const DivisorModel& div, const Domain& domain, double eps0);

struct BlaschkeOptions {
    int radial = 96;
    int angular = 96;
    double variety_tol = 1e-9;
};

// Integral of d(z) over the divisor inside the domain, weighted by the
// divisor multiplicity; branched-cover quadrature over a coordinate chart.
double blaschke_integral(const DivisorModel& div, const Domain& domain,
                         const BlaschkeOptions& opts = {});

struct DiscreteMeasure {
    std::vector<VecC> points;
    std::vector<double> weights;
    double total() const {
        double s = 0;
        for (double w : weights) s += w;
        return s;
    }
};

struct CarlesonReport {
    double norm = 0;
    VecC arg_z0;
    double arg_eps = 0;
    int probes = 0;
    int atoms = 0;
    bool surrogate_area = true;   // cap areas are the prod tau_j^2 surrogate
    std::string probe_hash;
};

struct CarlesonBudget {
    int boundary_points = 120;
    int eps_levels = 12;          // eps = 2^{-k}, k = 1..eps_levels
    int seeded_atoms = 24;        // extra ladders under the heaviest atoms
    std::uint64_t seed = 51;
};

CarlesonReport carleson_norm_measure(const DiscreteMeasure& mu, const Domain& domain,
                                     const CarlesonBudget& budget = {});

struct CurrentCloudBudget {
    int boundary_points = 96;
    int radial_levels = 8;        // collar levels d in (2^-(l+1), 2^-l), capped at the collar
    double collar = Domain::kBoundaryCollar;
    CarlesonBudget carleson;
};

CarlesonReport carleson_norm_current(const FormField& theta, const Domain& domain,
                                     const MetricModel& metric, bool weight_by_d,
                                     const CurrentCloudBudget& budget = {});

}  // namespace cft
