#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cft/util.hpp"

namespace cft {

enum class DomainKind { unit_ball, complex_ellipsoid, custom };

// Two defining-function conventions are carried side by side:
//   analytic: the polynomial-type function, e.g. |z|^2 - 1 for the ball,
//             sum |z_j|^{2 m_j} - 1 for complex ellipsoids;
//   gauge:    r = p - 1 with p the Minkowski gauge, homogeneous of degree 1,
//             so level sets are homothetic copies of the boundary.
enum class DefiningForm { analytic, gauge };

struct PointQuery {
    VecC z;
    double r = 0;        // active-form value
    double d = 0;        // |r|
    VecC grad;           // holomorphic partials of the active form
    VecC normal;         // unit outward normal (conjugate gradient direction)
};

// Hooks for custom domains; derivatives fall back to central differences.
struct CustomDomain {
    int dimension = 0;
    int finite_type = 2;
    std::function<double(const VecC&)> r;
    std::function<VecC(const VecC&)> grad;                 // optional
    std::function<MatC(const VecC&)> hess_mixed;           // optional
    std::function<MatC(const VecC&)> hess_holo;            // optional
};

class Domain {
public:
    static Domain ball(int n, DefiningForm form = DefiningForm::analytic);
    static Domain ellipsoid(std::vector<int> exponents, DefiningForm form = DefiningForm::analytic);
    static Domain custom(CustomDomain spec, DefiningForm form = DefiningForm::analytic);

    Domain with_form(DefiningForm f) const {
        Domain d = *this;
        d.form_ = f;
        return d;
    }

    DomainKind kind() const { return kind_; }
    DefiningForm form() const { return form_; }
    int dimension() const { return n_; }
    int finite_type() const { return finite_type_; }
    const std::vector<int>& exponents() const { return exponents_; }

    // Minkowski gauge p(z); p(0) = 0, p homogeneous of degree one.
    double gauge(const VecC& z) const;

    double r(const VecC& z) const;               // active form
    double r_analytic(const VecC& z) const;
    double r_gauge(const VecC& z) const { return gauge(z) - 1.0; }
    double dist(const VecC& z) const { return std::abs(r(z)); }

    VecC grad(const VecC& z) const;              // holomorphic partials d r / d z_j
    MatC hess_mixed(const VecC& z) const;        // d^2 r / dz_a dzbar_b
    MatC hess_holo(const VecC& z) const;         // d^2 r / dz_a dz_b
    MatR hess_real(const VecC& z) const;         // 2n x 2n, ordering (x_1..x_n, y_1..y_n)

    // Real directional derivative of r along u (u a complex vector treated as
    // a real tangent direction): 2 Re <grad, conj(u)>.
    double dr_along(const VecC& z, const VecC& u) const {
        VecC g = grad(z);
        Complex s(0, 0);
        for (int i = 0; i < n_; ++i) s += g[i] * u[i];
        return 2.0 * s.real();
    }

    VecC unit_normal(const VecC& z) const;
    PointQuery query(const VecC& z) const;

    // Near-boundary threshold shared by all "point near bD" preconditions.
    static constexpr double kBoundaryCollar = 0.25;

private:
    Domain() = default;

    DomainKind kind_ = DomainKind::unit_ball;
    DefiningForm form_ = DefiningForm::analytic;
    int n_ = 0;
    int finite_type_ = 2;
    std::vector<int> exponents_;
    CustomDomain custom_;

    double gauge_builtin(const VecC& z) const;
    VecC grad_analytic(const VecC& z) const;
    VecC grad_gauge(const VecC& z) const;
    void gauge_second_derivatives(const VecC& z, MatC& mixed, MatC& holo) const;
    VecC grad_fd(const VecC& z, const std::function<double(const VecC&)>& f) const;
    void hess_fd(const VecC& z, const std::function<double(const VecC&)>& f, MatC& mixed,
                 MatC& holo) const;
};

Domain domain_from_json_text(const std::string& text);
Domain domain_from_json_file(const std::string& path);

}  // namespace cft
