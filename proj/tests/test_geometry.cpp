#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cft/geometry.hpp"

using namespace cft;

namespace {
VecC cvec2(Complex a, Complex b) {
    VecC z(2);
    z << a, b;
    return z;
}
VecC e1() { return cvec2(1, 0); }
VecC e2() { return cvec2(0, 1); }

// Random point with gauge in [glo, ghi].
VecC random_shell_point(const Domain& dom, Rng& rng, double glo, double ghi) {
    VecC z = rng.cvector(dom.dimension());
    return z * (rng.uniform(glo, ghi) / dom.gauge(z));
}
}  // namespace

TEST_CASE("tau closed forms on the ball and ellipsoid") {
    auto ball = Domain::ball(2);  // analytic form |z|^2 - 1
    CHECK(tau(ball, cvec2(0, 0), e1(), 0.25) == doctest::Approx(0.5).epsilon(1e-7));

    auto ell = Domain::ellipsoid({1, 2});
    CHECK(tau(ell, cvec2(1, 0), e2(), 1e-4) == doctest::Approx(0.1).epsilon(1e-6));

    // normal direction at (0.9, 0): max growth on the circle is 1.8 t + t^2
    double expected = std::sqrt(0.82) - 0.9;
    CHECK(tau(ball, cvec2(0.9, 0), e1(), 0.01) == doctest::Approx(expected).epsilon(1e-6));

    CHECK_THROWS_AS(tau(ball, cvec2(0, 0), cvec2(0, 0), 0.1), InvalidArgument);
}

TEST_CASE("tau homogeneity in the direction argument") {
    auto ell = Domain::ellipsoid({1, 2});
    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        VecC z = random_shell_point(ell, rng, 0.7, 0.98);
        VecC v = rng.unit_cvector(2);
        Complex lam = rng.cnormal();
        if (std::abs(lam) < 0.1) lam += 1.0;
        double eps = rng.uniform(1e-4, 0.2);
        double t1 = tau(ell, z, v, eps);
        double t2 = tau(ell, z, lam * v, eps);
        CHECK(std::abs(t2 * std::abs(lam) - t1) <= 1e-7 * t1);
    }
}

TEST_CASE("tau doubling band") {
    // (eps1/eps2)^{1/m} <= C tau1/tau2 and tau1/tau2 <= C eps1/eps2, C <= 4
    const double C = 4.0;
    for (auto dom : {Domain::ball(2), Domain::ellipsoid({1, 2})}) {
        double m = dom.finite_type();
        Rng rng(17);
        for (int i = 0; i < 25; ++i) {
            VecC z = random_shell_point(dom, rng, 0.8, 0.98);
            VecC v = rng.unit_cvector(2);
            double e2v = rng.uniform(1e-4, 0.05);
            double e1v = e2v * rng.uniform(1.0, 16.0);
            double ratio = tau(dom, z, v, e1v) / tau(dom, z, v, e2v);
            CHECK(ratio <= C * (e1v / e2v) * (1 + 1e-9));
            CHECK(ratio >= std::pow(e1v / e2v, 1.0 / m) / C);
        }
    }
}

TEST_CASE("extremal basis on the ball near the boundary") {
    auto ball = Domain::ball(2);
    auto f = extremal_basis(ball, cvec2(0.9, 0), 0.01);
    CHECK(std::abs(f.vectors(0, 0) - Complex(1, 0)) < 1e-8);
    CHECK(std::abs(f.vectors(1, 0)) < 1e-8);
    CHECK(std::abs(std::abs(f.vectors(1, 1)) - 1.0) < 1e-8);
    CHECK(f.radii[0] == doctest::Approx(std::sqrt(0.82) - 0.9).epsilon(1e-6));
    CHECK(f.radii[1] == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("extremal basis invariants: orthonormality, ordering, radius bands") {
    auto ell = Domain::ellipsoid({1, 2});
    double m = ell.finite_type();
    Rng rng(23);
    for (int i = 0; i < 8; ++i) {
        VecC z = random_shell_point(ell, rng, 0.9, 0.99);
        double eps = rng.uniform(1e-3, 0.05);
        auto f = extremal_basis(ell, z, eps);
        MatC G = f.vectors.adjoint() * f.vectors;
        CHECK((G - MatC::Identity(2, 2)).norm() < 1e-10);
        CHECK((f.vectors.col(0) - ell.unit_normal(z)).norm() < 1e-8);
        for (int j = 2; j < f.radii.size(); ++j) CHECK(f.radii[j] <= f.radii[j - 1] * (1 + 1e-9));
        const double C = 6.0;
        CHECK(f.radii[0] <= C * eps);
        for (int j = 1; j < f.radii.size(); ++j) {
            CHECK(f.radii[j] >= std::sqrt(eps) / C);
            CHECK(f.radii[j] <= C * std::pow(eps, 1.0 / m));
        }
        // tau_j matches tau along the returned vectors by construction
        for (int j = 0; j < 2; ++j) {
            double t = tau(ell, z, f.vectors.col(j), eps);
            CHECK(t == doctest::Approx(f.radii[j]).epsilon(1e-7));
        }
    }
}

TEST_CASE("extremal basis in three dimensions keeps the greedy ordering") {
    auto ball = Domain::ball(3);
    VecC z(3);
    z << 0.95, 0, 0;
    FrameOptions opts;
    opts.sphere_samples = 64;
    opts.polish_iters = 15;
    auto f = extremal_basis(ball, z, 0.01, opts);
    CHECK(f.radii[1] == doctest::Approx(0.1).epsilon(1e-5));
    CHECK(f.radii[2] == doctest::Approx(0.1).epsilon(1e-5));
    MatC G = f.vectors.adjoint() * f.vectors;
    CHECK((G - MatC::Identity(3, 3)).norm() < 1e-9);
}

TEST_CASE("knorm values and homogeneity") {
    auto ball = Domain::ball(2);
    VecC z = cvec2(0.9, 0);
    CHECK(knorm(ball, z, e2()) == doctest::Approx(std::sqrt(0.19)).epsilon(1e-7));
    CHECK(knorm(ball, z, e1()) == doctest::Approx(1.9).epsilon(1e-7));
    CHECK(knorm(ball, z, cvec2(0, 0)) == 0.0);
    Rng rng(31);
    for (int i = 0; i < 20; ++i) {
        VecC w = random_shell_point(ball, rng, 0.7, 0.97);
        VecC v = rng.unit_cvector(2);
        CHECK(std::abs(knorm(ball, w, 2.0 * v) - 2.0 * knorm(ball, w, v)) <=
              1e-7 * knorm(ball, w, v));
    }
}

TEST_CASE("pseudodistance basics and quasi-triangle band") {
    auto ball = Domain::ball(2);
    CHECK(pseudodistance(ball, cvec2(0.9, 0), cvec2(0.9, 0)) == 0.0);
    double d = pseudodistance(ball, cvec2(0.9, 0), cvec2(0.9, 0.1));
    CHECK(d == doctest::Approx(0.01).epsilon(2e-3));
    // far pair -> sentinel
    double far = pseudodistance(ball, cvec2(0.9, 0), cvec2(-0.9, 0));
    bool out_of_range = far == kPseudodistanceOutOfRange || far >= 1.0;
    CHECK(out_of_range);

    Rng rng(13);
    double worstC = 0;
    for (int i = 0; i < 10; ++i) {
        VecC x = random_shell_point(ball, rng, 0.9, 0.95);
        VecC zc = x + 0.02 * rng.cvector(2);
        VecC ze = zc + 0.02 * rng.cvector(2);
        double dxz = pseudodistance(ball, x, zc), dze = pseudodistance(ball, zc, ze);
        double dxe = pseudodistance(ball, x, ze);
        if (std::isfinite(dxz) && std::isfinite(dze) && std::isfinite(dxe) && dxz + dze > 0)
            worstC = std::max(worstC, dxe / (dxz + dze));
    }
    CHECK(worstC < 10.0);
    CHECK(worstC > 0.0);
}

TEST_CASE("cap area and polydisc volume") {
    auto ball = Domain::ball(2);
    VecC z0 = cvec2(1, 0);
    for (double eps : {0.01, 0.04}) {
        CHECK(cap_area(ball, z0, eps) == doctest::Approx(eps).epsilon(1e-5));
    }
    auto ell = Domain::ellipsoid({1, 2});
    CHECK(cap_area(ell, cvec2(1, 0), 1e-4) == doctest::Approx(1e-2).epsilon(1e-4));

    // volume doubling stays inside the [2, 2^{2n}] band up to 10 percent
    Rng rng(3);
    for (int i = 0; i < 6; ++i) {
        VecC z = random_shell_point(ball, rng, 0.9, 0.97);
        double eps = rng.uniform(5e-3, 0.03);
        double v1 = polydisc_volume(extremal_basis(ball, z, eps));
        double v2 = polydisc_volume(extremal_basis(ball, z, 2 * eps));
        double ratio = v2 / v1;
        CHECK(ratio >= 2.0 * 0.9);
        CHECK(ratio <= 16.0 * 1.1);
    }
}

TEST_CASE("polyannulus cover: shell count and sampled coverage") {
    auto ball = Domain::ball(2);
    VecC z = cvec2(1.0 - 1e-3, 0);  // analytic d = 1 - |z|^2 ~ 2e-3
    double d = ball.dist(z);
    auto cover = polyannulus_cover(ball, z, d);
    CHECK(cover.k0 == 0);

    auto cover2 = polyannulus_cover(ball, z, 0.256 * (d / 1e-3));
    int expect = (int)std::round(std::log2(0.256 / 1e-3));
    CHECK(std::abs(cover2.k0 - expect) <= 1);

    CHECK(cover_sample_fraction(cover2, 400) >= 0.99);
}

TEST_CASE("contact order recovery") {
    auto ball = Domain::ball(2);
    VecC z = cvec2(1, 0);
    CHECK(contact_order_estimate(ball, z, e2()) == doctest::Approx(2.0).epsilon(0.025));
    CHECK(contact_order_estimate(ball, z, e1()) == doctest::Approx(1.0).epsilon(0.05));
    auto ell = Domain::ellipsoid({1, 2});
    CHECK(contact_order_estimate(ell, cvec2(1, 0), e2()) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("norm decomposition against the frame radii") {
    // 1/tau(z,v,eps) comparable to sum |v*_j| / tau_j with C <= 8
    const double C = 8.0;
    auto ell = Domain::ellipsoid({1, 2});
    Rng rng(37);
    for (int i = 0; i < 12; ++i) {
        VecC z = random_shell_point(ell, rng, 0.85, 0.98);
        double eps = rng.uniform(1e-3, 0.05);
        auto f = extremal_basis(ell, z, eps);
        VecC v = rng.unit_cvector(2);
        VecC star = f.vectors.adjoint() * v;
        double sum = 0;
        for (int j = 0; j < 2; ++j) sum += std::abs(star[j]) / f.radii[j];
        double lhs = 1.0 / tau(ell, z, v, eps);
        CHECK(lhs <= C * sum);
        CHECK(lhs >= sum / C);
    }
}

TEST_CASE("engulfing and stability of d and k under polydisc moves") {
    auto ball = Domain::ball(2);
    Rng rng(41);
    const double C = 10.0;
    for (int i = 0; i < 8; ++i) {
        VecC z = random_shell_point(ball, rng, 0.9, 0.96);
        double dz = ball.dist(z);
        Polydisc p(extremal_basis(ball, z, dz));
        // sample zeta in 0.2 P_d(z)
        VecC star(2);
        for (int j = 0; j < 2; ++j)
            star[j] = std::polar(0.2 * std::sqrt(rng.uniform()) * p.frame().radii[j],
                                 rng.uniform(0, 2 * kPi));
        VecC zeta = p.point(star);
        double dzeta = ball.dist(zeta);
        CHECK(dzeta / dz <= C);
        CHECK(dzeta / dz >= 1 / C);
        VecC v = rng.unit_cvector(2);
        double kz = knorm(ball, z, v), kzeta = knorm(ball, zeta, v);
        CHECK(kzeta / kz <= C);
        CHECK(kzeta / kz >= 1 / C);
    }
    // engulfing: intersecting polydiscs of equal scale contain each other after dilation
    double worstC = 0;
    for (int i = 0; i < 6; ++i) {
        VecC z = random_shell_point(ball, rng, 0.9, 0.95);
        double eps = rng.uniform(5e-3, 0.02);
        Polydisc pz(extremal_basis(ball, z, eps));
        VecC star(2);
        for (int j = 0; j < 2; ++j)
            star[j] = std::polar(0.9 * pz.frame().radii[j], rng.uniform(0, 2 * kPi));
        VecC zeta = pz.point(star);  // in P_eps(z), so the polydiscs intersect
        Polydisc pzeta(extremal_basis(ball, zeta, eps));
        for (int s = 0; s < 40; ++s) {
            VecC u(2);
            for (int j = 0; j < 2; ++j)
                u[j] = std::polar(std::sqrt(rng.uniform()) * pz.frame().radii[j],
                                  rng.uniform(0, 2 * kPi));
            worstC = std::max(worstC, pzeta.membership(pz.point(u)));
        }
    }
    CHECK(worstC < 12.0);
}

TEST_CASE("derivative bounds in frame coordinates") {
    auto ball = Domain::ball(2);
    VecC z = cvec2(0.9, 0);
    std::vector<int> a1{1, 0}, b0{0, 0};
    auto rep_norm = derivative_bound_check(ball, z, 0.01, a1, b0);
    CHECK(rep_norm.ratio_max > 0.1);
    CHECK(rep_norm.ratio_max <= 2.0);
    std::vector<int> a2{0, 1};
    auto rep_tan = derivative_bound_check(ball, z, 0.01, a2, b0);
    CHECK(rep_tan.ratio_max <= 2.0);
    // halving eps keeps the first-order normal ratio in the same band
    auto rep_half = derivative_bound_check(ball, z, 0.005, a1, b0);
    CHECK(rep_half.ratio_max / rep_norm.ratio_max < 2.0);
    CHECK(rep_half.ratio_max / rep_norm.ratio_max > 0.5);
    // second order mixed in the tangent pair
    std::vector<int> am{0, 1}, bm{0, 1};
    auto rep2 = derivative_bound_check(ball, z, 0.01, am, bm);
    CHECK(rep2.ratio_max <= 4.0);
    CHECK_THROWS_AS(derivative_bound_check(ball, z, 0.01, b0, b0), InvalidArgument);
}
