#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "grasslattice/gaussmap.hpp"
#include "grasslattice/rng.hpp"
#include "support/oracles.hpp"

using namespace grasslattice;

namespace {
constexpr double kInvSqrtPi = 0.56418958354775628695;
}

TEST_CASE("gauss_cdf center and symmetry") {
    REQUIRE(gauss_cdf(0.0) == 0.5);
    for (double t : {0.3, 1.7}) {
        REQUIRE(std::abs(gauss_cdf(-t) - (1.0 - gauss_cdf(t))) < 1e-15);
    }
}

TEST_CASE("gauss_cdf matches quadrature of the defining integral") {
    // (1/sqrt(pi)) int_{-8}^{1} exp(-s^2) ds; the tail below -8 is ~1e-29
    const double q =
        oracles::integrate([](double s) { return kInvSqrtPi * std::exp(-s * s); }, -8.0, 1.0);
    REQUIRE(std::abs(q - 0.92135039647485743) < 1e-13);  // frozen oracle value
    REQUIRE(std::abs(gauss_cdf(1.0) - q) < 1e-14);

    const double q3 =
        oracles::integrate([](double s) { return kInvSqrtPi * std::exp(-s * s); }, -8.0, 0.3);
    REQUIRE(std::abs(gauss_cdf(0.3) - q3) < 1e-14);
}

TEST_CASE("gauss_cdf strictly increasing on a dense grid") {
    double prev = gauss_cdf(-6.0);
    for (int i = 1; i < 10000; ++i) {
        const double t = -6.0 + 12.0 * i / 9999.0;
        const double v = gauss_cdf(t);
        REQUIRE(v > prev);
        prev = v;
    }
}

TEST_CASE("gauss_icdf center, roundtrip, and oracle value") {
    REQUIRE(gauss_icdf(0.5) == 0.0);
    for (double u : {0.1, 0.37, 0.9}) {
        REQUIRE(std::abs(gauss_cdf(gauss_icdf(u)) - u) < 1e-12);
    }
    // inverse of the quadrature-verified F(1)
    REQUIRE(std::abs(gauss_icdf(0.92135039647485743) - 1.0) < 1e-9);
}

TEST_CASE("gauss_icdf strictly increasing") {
    double prev = gauss_icdf(1e-6);
    for (int i = 1; i < 2000; ++i) {
        const double u = 1e-6 + (1.0 - 2e-6) * i / 1999.0;
        const double t = gauss_icdf(u);
        REQUIRE(t > prev);
        prev = t;
    }
}

TEST_CASE("gauss_icdf rejects arguments outside (0,1)") {
    REQUIRE_THROWS_AS(gauss_icdf(0.0), std::domain_error);
    REQUIRE_THROWS_AS(gauss_icdf(1.0), std::domain_error);
    REQUIRE_THROWS_AS(gauss_icdf(-0.1), std::domain_error);
    REQUIRE_THROWS_AS(gauss_icdf(1.1), std::domain_error);
    REQUIRE_THROWS_AS(gauss_icdf(std::nan("")), std::domain_error);
}

TEST_CASE("cube_to_gauss on reference points") {
    HypercubePoint mid{Eigen::VectorXd::Constant(3, 0.5), Eigen::VectorXd::Constant(3, 0.5)};
    const Eigen::VectorXcd z = cube_to_gauss(mid);
    REQUIRE(z.norm() == 0.0);

    HypercubePoint p{Eigen::VectorXd::Constant(1, 0.92135039647485743),
                     Eigen::VectorXd::Constant(1, 0.5)};
    const Eigen::VectorXcd z1 = cube_to_gauss(p);
    REQUIRE(std::abs(z1[0].real() - 1.0) < 1e-9);
    REQUIRE(z1[0].imag() == 0.0);
}

TEST_CASE("gauss_to_cube on reference points") {
    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
    const HypercubePoint p = gauss_to_cube(zero);
    for (int k = 0; k < 2; ++k) {
        REQUIRE(p.a[k] == 0.5);
        REQUIRE(p.b[k] == 0.5);
    }
    Eigen::VectorXcd z(1);
    z[0] = {1.0, 0.0};
    const HypercubePoint q = gauss_to_cube(z);
    REQUIRE(std::abs(q.a[0] - 0.92135039647485743) < 1e-14);
    REQUIRE(q.b[0] == 0.5);
}

TEST_CASE("hypercube/gauss roundtrip on random points") {
    Rng rng(0xA11CE);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform_below(5));
        HypercubePoint p{Eigen::VectorXd(d), Eigen::VectorXd(d)};
        for (int k = 0; k < d; ++k) {
            p.a[k] = rng.uniform01();
            p.b[k] = rng.uniform01();
        }
        const HypercubePoint q = gauss_to_cube(cube_to_gauss(p));
        worst = std::max(worst, (q.a - p.a).lpNorm<Eigen::Infinity>());
        worst = std::max(worst, (q.b - p.b).lpNorm<Eigen::Infinity>());
    }
    REQUIRE(worst < 1e-10);
}

TEST_CASE("hypercube validation") {
    HypercubePoint bad{Eigen::VectorXd::Constant(2, 0.5), Eigen::VectorXd::Constant(2, 0.5)};
    bad.a[1] = 0.0;
    REQUIRE_THROWS_AS(cube_to_gauss(bad), std::domain_error);
    bad.a[1] = 1.0;
    REQUIRE_THROWS_AS(cube_to_gauss(bad), std::domain_error);
    HypercubePoint mismatched{Eigen::VectorXd::Constant(2, 0.5),
                              Eigen::VectorXd::Constant(3, 0.5)};
    REQUIRE_THROWS_AS(cube_to_gauss(mismatched), std::invalid_argument);

    Eigen::VectorXcd z(1);
    z[0] = {std::numeric_limits<double>::infinity(), 0.0};
    REQUIRE_THROWS_AS(gauss_to_cube(z), std::domain_error);
}

TEST_CASE("uniform inputs map to N(0, 1/2) marginals (KS at 1%)") {
    Rng rng(0xD157);
    const int n = 100000;
    std::vector<double> re;
    re.reserve(n);
    HypercubePoint p{Eigen::VectorXd(1), Eigen::VectorXd(1)};
    for (int i = 0; i < n; ++i) {
        p.a[0] = rng.uniform01();
        p.b[0] = rng.uniform01();
        re.push_back(cube_to_gauss(p)[0].real());
    }
    const double d = oracles::ks_statistic(re, [](double x) { return 0.5 * std::erfc(-x); });
    REQUIRE(d < oracles::ks_crit_1pct(n));
}
