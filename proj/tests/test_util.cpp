#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cft/util.hpp"
#include "cft/wedge.hpp"

using namespace cft;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(6, x, w);
    double s1 = 0, s2 = 0;
    for (int i = 0; i < 6; ++i) {
        s1 += w[i];
        s2 += w[i] * std::pow(x[i], 10);
    }
    CHECK(s1 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(s2 == doctest::Approx(2.0 / 11.0).epsilon(1e-12));
}

TEST_CASE("smooth steps have exact plateaus and consistent derivatives") {
    CHECK(SmoothStep::value(-0.1) == 1.0);
    CHECK(SmoothStep::value(0.0) == 1.0);
    CHECK(SmoothStep::value(1.0) == 0.0);
    CHECK(SmoothStep::value(1.3) == 0.0);
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        double h = 1e-6;
        double fd = (SmoothStep::value(x + h) - SmoothStep::value(x - h)) / (2 * h);
        CHECK(SmoothStep::deriv(x) == doctest::Approx(fd).epsilon(1e-5));
        CHECK(SmoothStep::deriv(x) <= 0.0);
        double fd2 = (SmoothStep::deriv(x + h) - SmoothStep::deriv(x - h)) / (2 * h);
        CHECK(SmoothStep::deriv2(x) == doctest::Approx(fd2).epsilon(1e-4));
        double qfd = (QuinticStep::value(x + h) - QuinticStep::value(x - h)) / (2 * h);
        CHECK(QuinticStep::deriv(x) == doctest::Approx(qfd).epsilon(1e-5));
        double qfd2 = (QuinticStep::deriv(x + h) - QuinticStep::deriv(x - h)) / (2 * h);
        CHECK(QuinticStep::deriv2(x) == doctest::Approx(qfd2).epsilon(1e-4));
    }
}

TEST_CASE("halton ball points are deterministic and inside the ball") {
    auto a = complex_ball_points(2, 50, 5);
    auto b = complex_ball_points(2, 50, 5);
    for (int i = 0; i < 50; ++i) {
        CHECK((a[i] - b[i]).norm() == 0.0);
        CHECK(a[i].norm() < 1.0);
    }
}

TEST_CASE("golden max finds the circle maximum") {
    auto f = [](double x) { return std::cos(x - 0.7); };
    double x = golden_max(f, 0.0, 2.0, 1e-12);
    CHECK(x == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("wedge: anticommutativity and squares vanish") {
    int n = 2;
    VecC a(2), b(2);
    a << Complex(1, 2), Complex(0, 1);
    b << Complex(2, 0), Complex(1, -1);
    auto fa = WedgeForm::one_form_dz(n, a);
    auto fb = WedgeForm::one_form_dz(n, b);
    auto ab = fa.wedge(fb), ba = fb.wedge(fa);
    for (unsigned m = 0; m < 16; ++m)
        CHECK(std::abs(ab.coefficient(m) + ba.coefficient(m)) < 1e-14);
    auto aa = fa.wedge(fa);
    for (unsigned m = 0; m < 16; ++m) CHECK(std::abs(aa.coefficient(m)) < 1e-14);
}

TEST_CASE("wedge: slot evaluation matches determinant expansion") {
    int n = 2;
    MatC m(2, 2);
    m << Complex(1, 0), Complex(2, 1), Complex(0, -1), Complex(3, 0);
    // f = sum m(k,i) dzbar_k ^ dz_i evaluated on holo u, anti v:
    // f(u; v) = -sum m(k,i) u_i conj(v_k)   (dzbar before dz flips sign)
    auto f = WedgeForm::two_form_dzbar_dz(n, m);
    VecC u(2), v(2);
    u << Complex(1, 1), Complex(2, 0);
    v << Complex(0, 1), Complex(1, -1);
    Complex want(0, 0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) want -= m(k, i) * std::conj(v[k]) * u[i];
    Complex got = f.eval_slots({u}, {v});
    CHECK(std::abs(got - want) < 1e-13);
}

TEST_CASE("wedge: top coefficient of a full product") {
    int n = 1;
    VecC a(1);
    a << Complex(2, 0);
    auto dz = WedgeForm::one_form_dz(n, a);
    MatC m(1, 1);
    m << Complex(3, 0);
    auto dzbar_dz = WedgeForm::two_form_dzbar_dz(n, m);  // 3 dzbar ^ dz = -3 dz ^ dzbar
    CHECK(std::abs(dzbar_dz.top_coefficient() - Complex(-3, 0)) < 1e-14);
    auto top = dz.wedge(WedgeForm::one_form_dz(n, a));
    CHECK(std::abs(top.top_coefficient()) < 1e-14);
}

TEST_CASE("regression slope") {
    std::vector<double> x{1, 2, 3, 4}, y{2.5, 4.5, 6.5, 8.5};
    CHECK(regression_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("parallel_for touches every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(1000, [&](std::size_t i) { hits[i] += 1; }, 4);
    for (int h : hits) CHECK(h == 1);
}
