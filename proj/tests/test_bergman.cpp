#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cft/bergman.hpp"

using namespace cft;

namespace {
VecC cvec2(Complex a, Complex b) {
    VecC z(2);
    z << a, b;
    return z;
}
VecC shell_point(const Domain& dom, Rng& rng, double glo, double ghi) {
    VecC z = rng.cvector(dom.dimension());
    return z * (rng.uniform(glo, ghi) / dom.gauge(z));
}
}  // namespace

TEST_CASE("exact ball metric closed forms") {
    auto model = MetricModel::exact_ball(Domain::ball(2));
    auto B0 = model.bergman_matrix(cvec2(0, 0));
    CHECK((B0.matrix() - 3.0 * MatC::Identity(2, 2)).norm() < 1e-12);

    auto B = model.bergman_matrix(cvec2(0.5, 0));
    double u = 0.75;
    CHECK(B.eigenvalues()[0] == doctest::Approx(3.0 / (u * u)).epsilon(1e-12));
    CHECK(B.eigenvalues()[1] == doctest::Approx(3.0 * u / (u * u)).epsilon(1e-12));

    // norm at the origin is sqrt(3) |v|
    Rng rng(1);
    VecC v = rng.cvector(2);
    CHECK(model.norm(cvec2(0, 0), v) == doctest::Approx(std::sqrt(3.0) * v.norm()).epsilon(1e-12));
}

TEST_CASE("a_matrix inverts the metric and frames are unit vectors") {
    auto model = MetricModel::exact_ball(Domain::ball(2));
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        VecC z = shell_point(model.domain(), rng, 0.2, 0.9);
        auto B = model.bergman_matrix(z);
        MatC A = model.a_matrix(z);
        CHECK((A * A * B.matrix() - MatC::Identity(2, 2)).norm() < 1e-9);
        auto fr = model.frame(z);
        for (int j = 0; j < 2; ++j) {
            Complex q = (fr.e(j).adjoint() * B.matrix() * fr.e(j))(0);
            CHECK(std::abs(std::sqrt(q.real()) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("dB matches finite differences on the exact ball") {
    auto model = MetricModel::exact_ball(Domain::ball(2));
    Rng rng(5);
    for (int i = 0; i < 15; ++i) {
        VecC z = shell_point(model.domain(), rng, 0.3, 0.85);
        VecC u = rng.unit_cvector(2);
        MatC analytic = model.dB(z, u);
        double h = 1e-6;
        MatC fd = (model.bergman_matrix(z + h * u).matrix() -
                   model.bergman_matrix(z - h * u).matrix()) /
                  (2 * h);
        CHECK((analytic - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
    }
}

TEST_CASE("dA contour calculus against central differences") {
    auto model = MetricModel::exact_ball(Domain::ball(2));
    Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        VecC z = shell_point(model.domain(), rng, 0.3, 0.95);
        VecC u = rng.unit_cvector(2);
        MatC a1 = model.dA(z, u);
        MatC a2 = model.dA_fd(z, u);
        CHECK((a1 - a2).norm() <= 1e-4 * std::max(1.0, a2.norm()));
    }
}

TEST_CASE("metric comparability: Bergman norm against 1/tau") {
    auto dom = Domain::ball(2);
    auto model = MetricModel::exact_ball(dom);
    Rng rng(9);
    for (int i = 0; i < 40; ++i) {
        VecC z = shell_point(dom, rng, 0.75, 0.97);
        VecC v = rng.unit_cvector(2);
        double prod = model.norm(z, v) * tau(dom, z, v, dom.dist(z));
        CHECK(prod <= 10.0);
        CHECK(prod >= 0.1);
    }
}

TEST_CASE("surrogate metric is comparable to the exact ball metric") {
    auto dom = Domain::ball(2);
    auto exact = MetricModel::exact_ball(dom);
    auto surr = MetricModel::surrogate(dom, 4);
    Rng rng(11);
    for (int i = 0; i < 5; ++i) {
        VecC z = shell_point(dom, rng, 0.8, 0.95);
        auto Be = exact.bergman_matrix(z);
        auto Bs = surr.bergman_matrix(z);
        for (int j = 0; j < 2; ++j) {
            double ratio = Bs.eigenvalues()[j] / Be.eigenvalues()[j];
            CHECK(ratio <= 10.0);
            CHECK(ratio >= 0.1);
        }
    }
}

TEST_CASE("surrogate eigenvalue order tracks the reversed tau order") {
    auto dom = Domain::ellipsoid({1, 2});
    auto surr = MetricModel::surrogate(dom, 4);
    Rng rng(13);
    VecC z = shell_point(dom, rng, 0.9, 0.95);
    auto rep = eigen_tau_check(surr, z);
    for (int i = 0; i < rep.pair_ratios.size(); ++i) {
        CHECK(rep.pair_ratios[i] <= 50.0);
        CHECK(rep.pair_ratios[i] >= 0.02);
    }
    CHECK(rep.det_ratio <= 50.0);
    CHECK(rep.det_ratio >= 0.02);
}

TEST_CASE("eigen-tau pairing bands on the exact ball") {
    auto dom = Domain::ball(2);
    auto model = MetricModel::exact_ball(dom);
    Rng rng(15);
    for (int i = 0; i < 4; ++i) {
        VecC z = shell_point(dom, rng, 0.85, 0.96);
        auto rep = eigen_tau_check(model, z);
        for (int j = 0; j < rep.pair_ratios.size(); ++j) {
            CHECK(rep.pair_ratios[j] <= 50.0);
            CHECK(rep.pair_ratios[j] >= 0.02);
        }
        CHECK(rep.det_ratio <= 100.0);
        CHECK(rep.det_ratio >= 0.1);
    }
}

TEST_CASE("sandwich inclusions of the A-image against the polydisc") {
    auto dom = Domain::ball(2);
    auto model = MetricModel::exact_ball(dom);
    Rng rng(17);
    VecC z = shell_point(dom, rng, 0.88, 0.93);
    auto rep1 = sandwich_check(model, z, 0.1, 200);
    CHECK(rep1.c_best > 0);
    CHECK(rep1.C_best >= rep1.c_best * 0.99);
    CHECK(rep1.C_best / rep1.c_best <= 3.0);
    auto rep2 = sandwich_check(model, z, 0.05, 200);
    CHECK(std::abs(rep2.C_best / rep1.C_best - 1.0) < 0.2);
    CHECK(std::abs(rep2.c_best / rep1.c_best - 1.0) < 0.2);
    // band stability when the base point slides toward the boundary on a ray
    VecC ray = z / dom.gauge(z);
    for (double g : {0.9, 0.95}) {
        auto rep = sandwich_check(model, g * ray, 0.1, 120);
        CHECK(rep.C_best / rep.c_best <= 3.0);
    }
}

TEST_CASE("derivative bound of the frame map (normalized by tau)") {
    auto dom = Domain::ball(2);
    auto model = MetricModel::exact_ball(dom);
    Rng rng(19);
    double worst = 0;
    for (int i = 0; i < 25; ++i) {
        VecC z = shell_point(dom, rng, 0.8, 0.95);
        VecC u = rng.unit_cvector(2);
        VecC lam = 0.9 * rng.unit_cvector(2);  // |Lambda| < 1
        double d = dom.dist(z);
        VecC w = model.dA(z, u) * lam;
        Complex q = (w.adjoint() * model.bergman_matrix(z).matrix() * w)(0);
        double norm_b = std::sqrt(std::max(0.0, q.real()));
        worst = std::max(worst, norm_b * tau(dom, z, u, d));
    }
    CHECK(worst > 0);
    CHECK(worst <= 30.0);
}
