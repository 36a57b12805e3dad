#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "momentcone/quadrature.hpp"

#include "momentcone/basis.hpp"
#include "momentcone/domain.hpp"

#include "oracles.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace momentcone;

namespace {

double monomial_under_rule(const QuadratureRule& rule, const MultiIndex& alpha) {
    return integrate(rule, [&](const Eigen::VectorXd& z) {
        double out = 1.0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            for (int k = 0; k < alpha.exponents[static_cast<std::size_t>(i)]; ++k) out *= z[i];
        }
        return out;
    });
}

}  // namespace

TEST_CASE("Gauss-Legendre nodes and weights have the textbook structure") {
    const auto [nodes, weights] = gauss_legendre(9);
    REQUIRE(nodes.size() == 9);
    CHECK(weights.minCoeff() > 0.0);
    CHECK(weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int i = 0; i + 1 < 9; ++i) CHECK(nodes[i] < nodes[i + 1]);
    // symmetry about zero
    for (int i = 0; i < 9; ++i) {
        CHECK(nodes[i] == doctest::Approx(-nodes[8 - i]).epsilon(1e-13));
        CHECK(weights[i] == doctest::Approx(weights[8 - i]).epsilon(1e-13));
    }
    // 5-point values against published abscissae
    const auto [n5, w5] = gauss_legendre(5);
    CHECK(n5[4] == doctest::Approx(0.9061798459386640).epsilon(1e-13));
    CHECK(w5[4] == doctest::Approx(0.2369268850561891).epsilon(1e-13));
    CHECK(n5[2] == doctest::Approx(0.0));
    CHECK(w5[2] == doctest::Approx(0.5688888888888889).epsilon(1e-13));
}

TEST_CASE("Gauss-Legendre integrates monomials exactly through degree 2m-1") {
    const auto [nodes, weights] = gauss_legendre(8);
    for (int k = 0; k <= 15; ++k) {
        double acc = 0.0;
        for (int i = 0; i < nodes.size(); ++i) acc += weights[i] * std::pow(nodes[i], k);
        const double exact = k % 2 == 0 ? 2.0 / (k + 1) : 0.0;
        CHECK(std::abs(acc - exact) < 1e-13);
    }
}

TEST_CASE("Chebyshev-U rule integrates against the semicircle weight") {
    const auto [nodes, weights] = chebyshev_u(10);
    REQUIRE(nodes.size() == 10);
    CHECK(weights.sum() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
    // int x^{2j} sqrt(1-x^2) dx = pi/2 * Catalan_j / 4^j
    double catalan = 1.0;
    for (int j = 0; j <= 4; ++j) {
        double acc = 0.0;
        for (int i = 0; i < nodes.size(); ++i) acc += weights[i] * std::pow(nodes[i], 2 * j);
        CHECK(acc == doctest::Approx(std::numbers::pi / 2 * catalan / std::pow(4.0, j))
                         .epsilon(1e-13));
        catalan = catalan * 2 * (2 * j + 1) / (j + 2);
        double odd = 0.0;
        for (int i = 0; i < nodes.size(); ++i) odd += weights[i] * std::pow(nodes[i], 2 * j + 1);
        CHECK(std::abs(odd) < 1e-14);
    }
}

TEST_CASE("box rule reproduces per-axis closed-form moments") {
    Eigen::VectorXd lo(2), hi(2);
    lo << -1.0, 0.5;
    hi << 2.0, 3.0;
    const DomainSpec box = DomainSpec::box(lo, hi);
    const QuadratureRule rule = build_box_rule(box, 8);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rule.exactness_degree == 15);

    const Basis basis(BasisSpec{2, 8, BasisMode::AllDegreesUpTo});
    for (const MultiIndex& alpha : basis.indices()) {
        const double direct = monomial_under_rule(rule, alpha);
        CHECK(std::abs(direct - oracles::box_moment(box, alpha)) < 1e-10);
    }
}

TEST_CASE("box rule nodes stay inside the box") {
    Eigen::VectorXd lo(3), hi(3);
    lo << 0, -2, 1;
    hi << 1, 2, 4;
    const DomainSpec box = DomainSpec::box(lo, hi);
    const QuadratureRule rule = build_box_rule(box, 5);
    CHECK(rule.nodes.rows() == 125);
    for (Eigen::Index i = 0; i < rule.nodes.rows(); ++i) {
        CHECK(contains(box, rule.nodes.row(i).transpose()));
    }
    CHECK(rule.weights.minCoeff() > 0.0);
}

TEST_CASE("box rule rejects absurd node counts") {
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(5);
    Eigen::VectorXd hi = Eigen::VectorXd::Ones(5);
    CHECK_THROWS_AS(build_box_rule(DomainSpec::box(lo, hi), 100), std::invalid_argument);
}

TEST_CASE("full sphere rules hit gamma-ratio moments at 1e-10") {
    for (int dim : {2, 3, 4}) {
        std::vector<int> signs(static_cast<std::size_t>(dim), 0);
        const DomainSpec sphere = DomainSpec::sphere_sector(signs);
        const int order = default_sector_order(6);
        const QuadratureRule rule = build_sector_rule(sphere, order);
        CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));

        const Basis basis(BasisSpec{dim, 6, BasisMode::AllDegreesUpTo});
        for (const MultiIndex& alpha : basis.indices()) {
            const double direct = monomial_under_rule(rule, alpha);
            INFO("dim ", dim, " alpha degree ", alpha.degree());
            CHECK(std::abs(direct - oracles::sphere_moment(dim, alpha)) < 1e-10);
        }
    }
}

TEST_CASE("sector rules hit folded moments at 1e-10") {
    struct Case {
        std::vector<int> signs;
    };
    const std::vector<Case> cases = {
        {{1, 0}}, {{1, 1}}, {{-1, 1}}, {{1, 0, 0}}, {{1, -1, 0}}, {{1, 1, 1}},
        {{1, 0, 0, 0}}, {{1, 1, 0, 0}}, {{1, -1, 1, 0}}, {{1, 1, 1, -1}},
    };
    for (const Case& c : cases) {
        const DomainSpec sector = DomainSpec::sphere_sector(c.signs);
        const int dim = sector.dim;
        const int order = default_sector_order(6);
        const QuadratureRule rule = build_sector_rule(sector, order);
        CHECK(rule.weights.sum() == doctest::Approx(sector_mass(sector)).epsilon(1e-15));

        const Basis basis(BasisSpec{dim, 6, BasisMode::AllDegreesUpTo});
        for (const MultiIndex& alpha : basis.indices()) {
            const double direct = monomial_under_rule(rule, alpha);
            INFO("dim ", dim, " constraints ", sector.sign_constraint_count());
            CHECK(std::abs(direct - oracles::sector_moment(sector, alpha)) < 1e-10);
        }
    }
}

TEST_CASE("sector nodes lie on the sphere inside the sector") {
    const DomainSpec sector = DomainSpec::sphere_sector({1, -1, 0});
    const QuadratureRule rule = build_sector_rule(sector, 12);
    for (Eigen::Index i = 0; i < rule.nodes.rows(); ++i) {
        const Eigen::VectorXd z = rule.nodes.row(i).transpose();
        CHECK(std::abs(z.squaredNorm() - 1.0) < 1e-12);
        CHECK(contains(sector, z));
    }
}

TEST_CASE("high-dimensional sectors require a Monte Carlo seed") {
    const DomainSpec sector = DomainSpec::sphere_sector({1, 0, 0, 0, 0});
    CHECK_THROWS_AS(build_sector_rule(sector, 10), std::invalid_argument);

    const QuadratureRule rule = build_sector_rule(sector, 10, 77);
    CHECK(rule.mc_seed.has_value());
    CHECK(rule.mc_seed.value() == 77);
    REQUIRE(rule.mc_standard_error.has_value());
    CHECK(rule.mc_standard_error.value() ==
          doctest::Approx(1.0 / std::sqrt(static_cast<double>(rule.nodes.rows()))));
    CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-12));
    for (Eigen::Index i = 0; i < rule.nodes.rows(); ++i) {
        CHECK(contains(sector, rule.nodes.row(i).transpose()));
    }

    // Same seed, same nodes; the rule is a pure function of its inputs.
    const QuadratureRule again = build_sector_rule(sector, 10, 77);
    CHECK((rule.nodes - again.nodes).lpNorm<Eigen::Infinity>() == 0.0);

    // Mass 1/2 moments land near the fold oracle at Monte Carlo accuracy.
    const Basis basis(BasisSpec{5, 2, BasisMode::AllDegreesUpTo});
    for (const MultiIndex& alpha : basis.indices()) {
        const double direct = monomial_under_rule(rule, alpha);
        CHECK(std::abs(direct - oracles::sector_moment(sector, alpha)) <
              5.0 * rule.mc_standard_error.value());
    }
}

TEST_CASE("weighted box rule folds scale and density into the weights") {
    Eigen::VectorXd lo(1), hi(1);
    lo << -1;
    hi << 1;
    const DomainSpec box = DomainSpec::box(lo, hi);

    // q(x) = -2x^2 over the all-degrees basis 1, x, x^2
    MeasureSpec measure;
    measure.scale = 3.0;
    measure.normalized = false;
    Eigen::VectorXd q(3);
    q << 0.0, 0.0, -2.0;
    measure.log_weight = PolyCoeffs{BasisSpec{1, 2, BasisMode::AllDegreesUpTo}, q};

    const QuadratureRule rule = build_box_rule(box, measure, 30);
    // Raw Lebesgue semantics: mass = 3 * int_{-1}^{1} e^{-2x^2} dx.
    const double mass = integrate(rule, [](const Eigen::VectorXd&) { return 1.0; });
    CHECK(mass == doctest::Approx(3.0 * 2.0 * 0.5981440066613041).epsilon(1e-12));
    // Second moment of the weighted measure, checked against direct quadrature
    // with the weight carried by the integrand instead of the rule.
    const QuadratureRule plain = build_box_rule(box, 30);
    const double direct = 2.0 * 3.0 *
                          integrate(plain, [](const Eigen::VectorXd& x) {
                              return x[0] * x[0] * std::exp(-2.0 * x[0] * x[0]);
                          });
    const double folded = integrate(rule, [](const Eigen::VectorXd& x) { return x[0] * x[0]; });
    CHECK(folded == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("normalized weighted rule carries mass equal to its scale") {
    Eigen::VectorXd lo(1), hi(1);
    lo << 0;
    hi << 2;
    const DomainSpec box = DomainSpec::box(lo, hi);
    MeasureSpec measure;
    measure.scale = 5.0;
    measure.normalized = true;
    Eigen::VectorXd q(2);
    q << 0.0, 1.0;  // e^x, renormalized to a probability density before scaling
    measure.log_weight = PolyCoeffs{BasisSpec{1, 1, BasisMode::AllDegreesUpTo}, q};
    const QuadratureRule rule = build_box_rule(box, measure, 25);
    CHECK(rule.weights.sum() == doctest::Approx(5.0).epsilon(1e-12));
    // E[x] under density e^x / (e^2 - 1) on [0, 2]: (e^2 + 1)/(e^2 - 1).
    const double e2 = std::exp(2.0);
    const double folded = integrate(rule, [](const Eigen::VectorXd& x) { return x[0]; });
    CHECK(folded / rule.weights.sum() ==
          doctest::Approx((e2 + 1.0) / (e2 - 1.0)).epsilon(1e-12));
}

TEST_CASE("integrate rejects non-finite integrand values") {
    Eigen::VectorXd lo(1), hi(1);
    lo << 0;
    hi << 1;
    const QuadratureRule rule = build_box_rule(DomainSpec::box(lo, hi), 4);
    CHECK_THROWS_AS(integrate(rule, [](const Eigen::VectorXd& x) { return 1.0 / (x[0] - x[0]); }),
                    std::domain_error);
}

TEST_CASE("parallel integration returns identical bits") {
    Eigen::VectorXd lo(2), hi(2);
    lo << -1, -1;
    hi << 1, 1;
    const QuadratureRule rule = build_box_rule(DomainSpec::box(lo, hi), 40);
    auto f = [](const Eigen::VectorXd& x) { return std::exp(x[0] * x[1]) * std::cos(x[0]); };
    const double serial = integrate(rule, f, false);
    const double parallel = integrate(rule, f, true);
    CHECK(serial == parallel);
}

TEST_CASE("pipeline defaults leave headroom above the polynomial degree") {
    CHECK(default_points_per_axis(4) == 14);
    CHECK(default_sector_order(4) == 16);
}
