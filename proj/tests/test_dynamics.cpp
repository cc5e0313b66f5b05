#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "e3top/dynamics.hpp"
#include "e3top/singular.hpp"

using namespace e3top;

TEST_CASE("rank-0 points are stationary under the flow") {
    const SystemSpec lag = make_lagrange();
    const auto [pp, pm] = rank0_points({1, 0});
    for (const PhasePoint& p0 : {pp, pm}) {
        const Trajectory traj = integrate(lag, p0, 1e-3, 1000);
        const Vec6 v0 = to_vec6(p0);
        double worst = 0;
        for (const auto& [t, p] : traj.samples) {
            const Vec6 v = to_vec6(p);
            for (int c = 0; c < 6; ++c)
                worst = std::max(worst, std::fabs(v[c] - v0[c]));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("conservation drift on the reference trajectory") {
    const SystemSpec lag = make_lagrange();
    const PhasePoint p0{{0.3, 0, 0.5}, {0, 0.6, 0.8}};
    const Trajectory traj = integrate(lag, p0, 1e-3, 10000);
    REQUIRE(traj.samples.size() == 10001);
    const Drifts d = conservation_report(lag, traj);
    CHECK(d.h <= 1e-8);
    CHECK(d.k <= 1e-8);
    CHECK(d.f1 <= 1e-8);
    CHECK(d.f2 <= 1e-8);
}

TEST_CASE("RK4 energy drift scales like dt^4") {
    const SystemSpec lag = make_lagrange();
    const PhasePoint p0{{0.3, 0, 0.5}, {0, 0.6, 0.8}};
    // step sizes where truncation dominates rounding
    const double d1 = conservation_report(lag, integrate(lag, p0, 0.04, 500)).h;
    const double d2 = conservation_report(lag, integrate(lag, p0, 0.02, 1000)).h;
    CHECK(d1 / d2 >= 12);
    CHECK(d1 / d2 <= 20);
}

TEST_CASE("sgrad K flow is 2*pi periodic") {
    const PhasePoint p0{{0.3, -0.2, 0.5}, {0.1, 0.6, 0.7}};
    const int n = 4096;
    const Trajectory traj = integrate_field(
        [](const PhasePoint& p) { return sgrad_k(p); }, p0, 2 * M_PI / n, n);
    const Vec6 v0 = to_vec6(traj.samples.front().second);
    const Vec6 v1 = to_vec6(traj.samples.back().second);
    for (int c = 0; c < 6; ++c) CHECK(std::fabs(v1[c] - v0[c]) <= 1e-6);
}

TEST_CASE("integration aborts cleanly on domain blow-up") {
    // V = 1/x blows up as the trajectory crosses x = 0
    const SystemSpec sys(1, expr::Expr(), expr::Expr(), expr::Expr(),
                         expr::Expr::parse("ln(x)"));
    const Trajectory traj =
        integrate(sys, {{0.3, 0, 0.5}, {0, 0.99, -0.1}}, 1e-2, 10000);
    CHECK(traj.aborted);
    CHECK(traj.samples.size() < 10001);
}

TEST_CASE("trajectory CSV layout") {
    const SystemSpec lag = make_lagrange();
    const Trajectory traj =
        integrate(lag, {{0.3, 0, 0.5}, {0, 0.6, 0.8}}, 1e-3, 3);
    const std::string csv = trajectory_csv(lag, traj);
    CHECK(csv.find("t,S1,S2,S3,R1,R2,R3,H,K,F1,F2\n") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("linearization at the Lagrange rank-0 points") {
    const SystemSpec lag = make_lagrange();
    const OrbitParams orb{1, 0};
    {
        // P+, combo (1,0): spectrum {+-i(p + sqrt q), +-i(p - sqrt q)}, p=0, q=1
        const LinearizationReport lin = linearize_reduced(lag, orb, 1, 0, 0, 1, 0);
        for (const auto& z : lin.eigenvalues) {
            CHECK(std::fabs(z.real()) <= 1e-6);
            CHECK(std::fabs(std::fabs(z.imag()) - 1) <= 1e-5);
        }
    }
    {
        // combo (0,1): the K-field linearization has spectrum {i,-i,i,-i}
        const LinearizationReport lin = linearize_reduced(lag, orb, 1, 0, 0, 0, 1);
        const std::array<std::complex<double>, 4> expect = {
            std::complex<double>(0, 1), std::complex<double>(0, -1),
            std::complex<double>(0, 1), std::complex<double>(0, -1)};
        CHECK(match_spectra(expect, lin.eigenvalues) <= 1e-6);
    }
    {
        // P-: focus-focus quadruple +-1 with zero imaginary part (q=-1, p=0)
        const LinearizationReport lin = linearize_reduced(lag, orb, -1, 0, 0, 1, 0);
        const std::array<std::complex<double>, 4> expect = {1.0, 1.0, -1.0, -1.0};
        CHECK(match_spectra(expect, lin.eigenvalues) <= 1e-5);
    }
}

TEST_CASE("linearization at the Lagrange rank-1 circle") {
    const SystemSpec lag = make_lagrange();
    const OrbitParams orb{1, 0};
    const double x = 1.0 / 3, k = 8.0 / 9 * std::sqrt(3.0);
    const Rank1Point pt = rank1_classify(lag, orb, k, x);
    const LinearizationReport lin =
        linearize_reduced(lag, orb, pt.x, pt.m, pt.k, 1, -pt.lambda);
    // two zero eigenvalues plus the +-i sqrt((a-x^2) W_xx) pair
    const double om = std::sqrt((1 - x * x) * 4.5);
    const std::array<std::complex<double>, 4> expect = {
        std::complex<double>(0, om), std::complex<double>(0, -om), 0.0, 0.0};
    CHECK(match_spectra(expect, lin.eigenvalues) <= 1e-5 * om);
}

TEST_CASE("linearization refuses a non-stationary base point") {
    const SystemSpec lag = make_lagrange();
    CHECK_THROWS_AS(linearize_reduced(lag, {1, 0}, 0.4, 0.2, 0.3, 1, 0),
                    std::invalid_argument);
}

TEST_CASE("spectra of Hamiltonian linearizations come in +- pairs") {
    const SystemSpec sys(1.4, expr::Expr::parse("0.2*x"), expr::Expr(),
                         expr::Expr::parse("0.1*x"), expr::Expr::parse("-x"));
    const OrbitParams orb{1.2, 0.5};
    const LinearizationReport lin =
        linearize_reduced(sys, orb, std::sqrt(1.2), 0, 0.5 / std::sqrt(1.2), 1, 0);
    std::array<std::complex<double>, 4> negated;
    for (int i = 0; i < 4; ++i) negated[i] = -lin.eigenvalues[i];
    CHECK(match_spectra(lin.eigenvalues, negated) <= 1e-6);
}

TEST_CASE("match_spectra is an exact assignment") {
    const std::array<std::complex<double>, 4> u = {1.0, 2.0, 3.0, 4.0};
    const std::array<std::complex<double>, 4> v = {4.0, 3.0, 2.0, 1.0};
    CHECK(match_spectra(u, v) == 0);
    const std::array<std::complex<double>, 4> w = {4.1, 3.0, 2.0, 1.0};
    CHECK(match_spectra(u, w) == doctest::Approx(0.1));
}
