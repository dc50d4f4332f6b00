#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "specproj/kernels.hpp"
#include "test_helpers.hpp"

using namespace specproj;
using namespace specproj::testing;

TEST_CASE("c_mj reference values") {
    CHECK(c_mj(1, 1, 0, 0) == doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-14));
    CHECK(c_mj(1, 1, 0, 0) == doctest::Approx(0.101321183642).epsilon(1e-10));
    CHECK(c_mj(1, 1, 0, 1) == 0.0);
    CHECK(c_mj(1, 1, 1, 0) == doctest::Approx(-2.0 / (M_PI * M_PI)).epsilon(1e-13));
    // binom(r, j) factor
    CHECK(c_mj(2, 3, 2, 1) ==
          doctest::Approx(std::pow(2.0, -1) / std::pow(M_PI, 5) * 3.0 *
                          std::tgamma(2 + 2 + 3 - 1 - 1 + 1) / std::tgamma(2.0))
              .epsilon(1e-12));
}

TEST_CASE("H1 closed form: P_0 at t = 0") {
    GroupDescriptor g = h1();
    KernelEvaluator eval(g);
    Vector y(2), t(1);
    y << 1, 0;
    t << 0;
    Complex v = eval.p_m(0, y, t);
    CHECK(v.real() == doctest::Approx(2.0 / (M_PI * M_PI)).epsilon(1e-13));
    CHECK(std::abs(v.imag()) < 1e-16);
    // m = 0, t = 0: the radial oracle integrand is positive
    Complex vo = eval.p_m_oracle(0, y, t);
    CHECK(vo.real() > 0.0);
    CHECK(vo.real() == doctest::Approx(v.real()).epsilon(1e-9));
}

TEST_CASE("p_m throws YZero at y = 0") {
    GroupDescriptor g = h1();
    KernelEvaluator eval(g);
    Vector y = Vector::Zero(2), t = Vector::Constant(1, 1.0);
    CHECK_THROWS_AS(eval.p_m(0, y, t), YZero);
    CHECK_THROWS_AS(eval.abel_kernel(0.5, y, t), YZero);
    // continued representation is finite there
    Complex v = eval.p_m_continued(0, y, t);
    CHECK(std::isfinite(v.real()));
    Vector t0 = Vector::Zero(1);
    CHECK_THROWS_AS(eval.p_m_continued(0, y, t0), OriginPoint);
}

TEST_CASE("representation agreement on random points across groups") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> gauss;
    for (const GroupDescriptor& g : {h1(), aniso_n2r1(), aniso_n2r2()}) {
        KernelEvaluator eval(g);
        const int d = g.horizontal_dim();
        for (int rep = 0; rep < 12; ++rep) {
            Vector y(d), t(g.r());
            for (int i = 0; i < d; ++i) y[i] = gauss(rng);
            y *= (0.6 + 0.8 * u(rng)) / y.norm();
            for (int i = 0; i < g.r(); ++i) t[i] = 2.0 * (u(rng) - 0.5);
            for (int m : {0, 1, 2, 5}) {
                Complex vs = eval.p_m(m, y, t);
                Complex vo = eval.p_m_oracle(m, y, t);
                Complex vc = eval.p_m_continued(m, y, t);
                const double scale = std::max(std::abs(vs), 1e-12);
                CHECK(std::abs(vo - vs) / scale < 1e-6);
                CHECK(std::abs(vc - vs) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("homogeneity and conjugate symmetry") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (const GroupDescriptor& g : {h1(), aniso_n2r2()}) {
        KernelEvaluator eval(g);
        const int d = g.horizontal_dim();
        const int Q = g.homogeneous_dim();
        for (int rep = 0; rep < 10; ++rep) {
            Vector y(d), t(g.r());
            for (int i = 0; i < d; ++i) y[i] = gauss(rng);
            y *= 1.0 / y.norm();
            for (int i = 0; i < g.r(); ++i) t[i] = gauss(rng);
            for (int m : {0, 1, 3}) {
                Complex base = eval.p_m(m, y, t);
                for (double lam : {0.5, 2.0, 5.0}) {
                    Complex scaled =
                        eval.p_m(m, Vector(lam * y), Vector(lam * lam * t));
                    CHECK(std::abs(std::pow(lam, Q) * scaled - base) <=
                          1e-8 * std::abs(base));
                }
                Complex conj = eval.p_m(m, Vector(-y), Vector(-t));
                CHECK(std::abs(std::conj(conj) - base) <= 1e-14 * std::abs(base));
            }
        }
    }
}

TEST_CASE("continued representation: y = 0 behavior") {
    GroupDescriptor g = h1();
    KernelEvaluator eval(g);
    Vector y0 = Vector::Zero(2), t = Vector::Constant(1, 1.0);
    Complex at0 = eval.p_m_continued(0, y0, t);
    CHECK(std::isfinite(at0.real()));
    // |P| * ||(0,t)||^Q bounded: Q = 4, ||(0,1)|| = 1
    CHECK(std::abs(at0) < 10.0);
    // continuity across y -> 0: gaps shrink along the sequence
    std::vector<double> gaps;
    for (double s : {0.2, 0.1, 0.05, 0.02}) {
        Vector y(2);
        y << s, -0.3 * s;
        gaps.push_back(std::abs(eval.p_m_continued(0, y, t) - at0));
    }
    for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 1]);
    CHECK(gaps.back() < 1e-3);
}

TEST_CASE("abel kernel closed form vs partial sums") {
    GroupDescriptor g = h1();
    KernelEvaluator eval(g);
    Vector y(2), t(1);
    y << 1, 0;
    t << 0.3;
    // R = 0 equals P_0
    CHECK(std::abs(eval.abel_kernel(0.0, y, t) - eval.p_m(0, y, t)) < 1e-13);
    CHECK_THROWS_AS(eval.abel_kernel(1.0, y, t), RNotInRange);
    // partial sums approach the closed form
    const double R = 0.5;
    Complex closed = eval.abel_kernel(R, y, t);
    Complex acc(0.0, 0.0);
    double Rm = 1.0;
    std::vector<double> gaps;
    for (int m = 0; m <= 40; ++m) {
        acc += Rm * eval.p_m(m, y, t);
        Rm *= R;
        if (m % 10 == 9) gaps.push_back(std::abs(acc - closed));
    }
    CHECK(gaps.back() < 1e-6 * std::abs(closed));
    for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 1] + 1e-15);
}

TEST_CASE("mean value integral vanishes for H1") {
    GroupDescriptor g = h1();
    KernelEvaluator eval(g);
    for (int m = 0; m <= 1; ++m) {
        MeanValueResult mv = eval.mean_value_integral(m);
        CHECK(mv.abs_integral > 0.0);
        CHECK(std::abs(mv.value) <= 1e-6 * mv.abs_integral);
    }
}

TEST_CASE("cz statistics are finite and dyadically invariant") {
    GroupDescriptor g = h1();
    KernelEvaluator eval(g);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<GroupPoint> samples;
    for (int i = 0; i < 24; ++i) {
        GroupPoint p;
        double scale = std::pow(10.0, -2.0 + 4.0 * u(rng));
        if (i % 6 == 5) {
            p.y = Vector::Zero(2);
            p.t = Vector::Constant(1, scale * scale * (u(rng) > 0.5 ? 1.0 : -1.0));
        } else {
            p.y = Vector(2);
            p.y << scale * (u(rng) - 0.5), scale * (u(rng) - 0.5);
            if (p.y.norm() < 1e-3 * scale) p.y[0] = 0.3 * scale;
            p.t = Vector::Constant(1, scale * scale * (u(rng) - 0.5));
        }
        samples.push_back(std::move(p));
    }
    std::vector<GroupPoint> dilated;
    for (const auto& p : samples) dilated.push_back(dilate(g, 2.0, p));
    for (int m = 0; m <= 2; ++m) {
        double s1 = eval.cz_size_statistic(m, samples);
        double s2 = eval.cz_size_statistic(m, dilated);
        CHECK(std::isfinite(s1));
        CHECK(s1 > 0.0);
        CHECK(std::abs(s2 - s1) <= 1e-6 * s1);
        double g1 = eval.cz_gradient_statistic(m, samples);
        double g2 = eval.cz_gradient_statistic(m, dilated);
        CHECK(std::isfinite(g1));
        CHECK(std::abs(g2 - g1) <= 1e-6 * std::max(g1, 1e-30));
    }
}

TEST_CASE("quadrature refinement convergence flag") {
    GroupDescriptor g = aniso_n2r2();
    KernelConfig cfg;
    cfg.sphere_degree = 16; // deliberately coarse
    cfg.check_convergence = true;
    cfg.quad_tol = 1e-12;   // unreachable at this order for oscillatory points
    KernelEvaluator eval(g, cfg);
    Vector y(4), t(2);
    y << 0.2, 0.1, -0.15, 0.05;
    t << 2.2, -1.6; // strong oscillation vs sigma ~ 0.1
    CHECK_THROWS_AS(eval.p_m(3, y, t), QuadratureNotConverged);
}
