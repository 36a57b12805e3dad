#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "momentcone/objective.hpp"

#include "momentcone/basis.hpp"
#include "momentcone/domain.hpp"
#include "momentcone/quadrature.hpp"

#include "oracles.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace momentcone;

namespace {

ObjectiveContext box_context(int points = 20) {
    Eigen::VectorXd lo(2), hi(2);
    lo << -1, -1;
    hi << 1, 1;
    const BasisSpec spec{2, 4, BasisMode::AllDegreesUpTo};
    return ObjectiveContext(spec, build_box_rule(DomainSpec::box(lo, hi), points));
}

ObjectiveContext sphere_context(int order = 16) {
    const DomainSpec sphere = DomainSpec::sphere_sector({0, 0});
    const BasisSpec spec{2, 4, BasisMode::HomogeneousExactly};
    return ObjectiveContext(spec, build_sector_rule(sphere, order));
}

PolyCoeffs random_poly(const BasisSpec& spec, std::uint64_t seed, double amplitude) {
    auto rng = oracles::seeded_rng(seed);
    Eigen::VectorXd coeffs(static_cast<Eigen::Index>(basis_size(spec)));
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
        coeffs[i] = oracles::uniform_in(rng, -amplitude, amplitude);
    }
    return PolyCoeffs{spec, coeffs};
}

}  // namespace

TEST_CASE("context rejects mismatched basis and rule pairings") {
    Eigen::VectorXd lo(2), hi(2);
    lo << -1, -1;
    hi << 1, 1;
    const QuadratureRule box_rule = build_box_rule(DomainSpec::box(lo, hi), 6);
    CHECK_THROWS_AS(ObjectiveContext(BasisSpec{2, 4, BasisMode::HomogeneousExactly}, box_rule),
                    std::invalid_argument);

    const QuadratureRule sphere_rule = build_sector_rule(DomainSpec::sphere_sector({0, 0}), 10);
    CHECK_THROWS_AS(ObjectiveContext(BasisSpec{2, 4, BasisMode::AllDegreesUpTo}, sphere_rule),
                    std::invalid_argument);
    CHECK_THROWS_AS(ObjectiveContext(BasisSpec{3, 4, BasisMode::HomogeneousExactly}, sphere_rule),
                    std::invalid_argument);
}

TEST_CASE("f at zero is the measure mass and grad its moments") {
    const ObjectiveContext ctx = box_context();
    const PolyCoeffs zero{ctx.basis().spec(),
                          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ctx.basis().size()))};
    const LogFValue lf = eval_logf(ctx, zero);
    CHECK(lf.log_f == doctest::Approx(0.0).epsilon(1e-14));

    const MomentSequence grad = eval_grad(ctx, zero);
    for (std::size_t i = 0; i < ctx.basis().size(); ++i) {
        const double expect = oracles::box_moment(ctx.rule().domain, ctx.basis().at(i));
        CHECK(grad.values[static_cast<Eigen::Index>(i)] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("gradient matches a finite difference of f") {
    const ObjectiveContext ctx = box_context();
    const PolyCoeffs p = random_poly(ctx.basis().spec(), 101, 0.4);
    const MomentSequence grad = eval_grad(ctx, p);

    const double eps = 1e-6;
    auto f_at = [&](const Eigen::VectorXd& coeffs) {
        return std::exp(eval_logf(ctx, PolyCoeffs{p.basis, coeffs}).log_f);
    };
    auto rng = oracles::seeded_rng(55);
    Eigen::VectorXd h(p.coeffs.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = oracles::uniform_in(rng, -1, 1);
    const double fd = (f_at(p.coeffs + eps * h) - f_at(p.coeffs - eps * h)) / (2 * eps);
    CHECK(fd == doctest::Approx(grad.values.dot(h)).epsilon(1e-7));
}

TEST_CASE("hessian matches a finite difference of the gradient") {
    const ObjectiveContext ctx = box_context();
    const PolyCoeffs p = random_poly(ctx.basis().spec(), 202, 0.3);
    const Eigen::MatrixXd H = eval_hessian(ctx, p);
    CHECK((H - H.transpose()).lpNorm<Eigen::Infinity>() == 0.0);

    // PSD: eigenvalues of the moment matrix of a positive measure
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    CHECK(eig.eigenvalues().minCoeff() > -1e-12 * H.trace());

    const double eps = 1e-5;
    auto rng = oracles::seeded_rng(56);
    Eigen::VectorXd h(p.coeffs.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = oracles::uniform_in(rng, -1, 1);
    Eigen::VectorXd plus = p.coeffs + eps * h;
    Eigen::VectorXd minus = p.coeffs - eps * h;
    const Eigen::VectorXd fd =
        (eval_grad(ctx, PolyCoeffs{p.basis, plus}).values -
         eval_grad(ctx, PolyCoeffs{p.basis, minus}).values) /
        (2 * eps);
    const Eigen::VectorXd Hh = H * h;
    CHECK((fd - Hh).lpNorm<Eigen::Infinity>() < 1e-6 * std::max(1.0, Hh.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("unit direction realizes the pointwise scaling identity") {
    for (const ObjectiveContext& ctx : {box_context(8), sphere_context()}) {
        const PolyCoeffs p = random_poly(ctx.basis().spec(), 303, 0.5);
        const double a = 0.8;
        PolyCoeffs shifted = p;
        shifted.coeffs += a * ctx.unit_direction().coeffs;
        const MomentSequence g0 = eval_grad(ctx, p);
        const MomentSequence g1 = eval_grad(ctx, shifted);
        CHECK((g1.values - std::exp(a) * g0.values).lpNorm<Eigen::Infinity>() <
              1e-12 * g0.values.lpNorm<Eigen::Infinity>());
    }
}

TEST_CASE("dual objective and gradient fit together") {
    const ObjectiveContext ctx = box_context();
    const BasisSpec spec = ctx.basis().spec();
    const PolyCoeffs zero{spec, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_size(spec)))};
    MomentSequence y = eval_grad(ctx, random_poly(spec, 404, 0.2));

    // g(0) = <0, y> - f(0) = -mass
    CHECK(dual_objective(ctx, zero, y) == doctest::Approx(-1.0).epsilon(1e-13));

    const PolyCoeffs p = random_poly(spec, 405, 0.3);
    const MomentSequence dg = dual_gradient(ctx, p, y);
    const MomentSequence fg = eval_grad(ctx, p);
    CHECK((dg.values - (y.values - fg.values)).lpNorm<Eigen::Infinity>() == 0.0);

    // concavity along a segment: g((p+q)/2) >= min(g(p), g(q)) would be weak;
    // check midpoint >= average instead.
    const PolyCoeffs q = random_poly(spec, 406, 0.3);
    PolyCoeffs mid{spec, (p.coeffs + q.coeffs) / 2};
    CHECK(dual_objective(ctx, mid, y) >=
          (dual_objective(ctx, p, y) + dual_objective(ctx, q, y)) / 2 - 1e-12);
}

TEST_CASE("shifted evaluation survives enormous coefficients") {
    const ObjectiveContext ctx = box_context(10);
    const BasisSpec spec = ctx.basis().spec();
    Eigen::VectorXd big = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_size(spec)));
    big[0] = 5000.0;  // e^{5000} overflows any double
    const PolyCoeffs p{spec, big};

    const LogFValue lf = eval_logf(ctx, p);
    CHECK(std::isfinite(lf.log_f));
    CHECK(lf.log_f == doctest::Approx(5000.0).epsilon(1e-12));

    CHECK_THROWS_AS(eval_grad(ctx, p), std::overflow_error);
    CHECK_THROWS_AS(eval_hessian(ctx, p), std::overflow_error);

    MomentSequence y{spec, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(basis_size(spec)))};
    CHECK(dual_objective(ctx, p, y) == -std::numeric_limits<double>::infinity());

    // normalized moments stay finite and equal the unshifted ones
    const MomentSequence norm_big = normalized_moments(ctx, p);
    const PolyCoeffs zero{spec, Eigen::VectorXd::Zero(big.size())};
    const MomentSequence norm_zero = normalized_moments(ctx, zero);
    CHECK((norm_big.values - norm_zero.values).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("normalized moments are grad over mass") {
    const ObjectiveContext ctx = box_context();
    const PolyCoeffs p = random_poly(ctx.basis().spec(), 707, 0.4);
    const MomentSequence norm = normalized_moments(ctx, p);
    const MomentSequence grad = eval_grad(ctx, p);
    const double f = std::exp(eval_logf(ctx, p).log_f);
    CHECK((norm.values - grad.values / f).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK(norm.values[0] > 0.0);
}

TEST_CASE("parallel context build is bit-identical") {
    Eigen::VectorXd lo(2), hi(2);
    lo << -1, 0;
    hi << 2, 1;
    const BasisSpec spec{2, 6, BasisMode::AllDegreesUpTo};
    const QuadratureRule rule = build_box_rule(DomainSpec::box(lo, hi), 24);
    const ObjectiveContext serial(spec, rule, false);
    const ObjectiveContext parallel(spec, rule, true);
    CHECK((serial.node_monomials() - parallel.node_monomials()).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("basis mismatch in evaluations is rejected") {
    const ObjectiveContext ctx = box_context(6);
    const PolyCoeffs wrong{BasisSpec{2, 2, BasisMode::AllDegreesUpTo}, Eigen::VectorXd::Zero(6)};
    CHECK_THROWS_AS(eval_logf(ctx, wrong), std::invalid_argument);
    CHECK_THROWS_AS(eval_grad(ctx, wrong), std::invalid_argument);
}
