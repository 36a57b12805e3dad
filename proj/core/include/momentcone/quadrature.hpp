#pragma once

#include "momentcone/domain.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

namespace momentcone {

// Discretization of the reference measure: integrate(f) = sum w_i f(node_i).
// Nodes are stored one per row. Weights are strictly positive and sum to the
// measure's total mass (1 for a normalized measure, 2^-s for a sector of the
// sphere under the un-rescaled rotation-invariant probability measure).
struct QuadratureRule {
    Eigen::MatrixXd nodes;
    Eigen::VectorXd weights;
    int exactness_degree = 0;  // monomials up to this degree integrate to >= 1e-10 accuracy
    DomainSpec domain;
    MeasureSpec measure;
    std::optional<std::uint64_t> mc_seed;        // set only by the Monte Carlo fallback
    std::optional<double> mc_standard_error;     // generic 1/sqrt(count) scale, same condition
};

// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1], found by
// Newton iteration on the Legendre recurrence. Exact for degree <= 2m-1.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int points);

// Gauss-Chebyshev rule of the second kind: sum w_k g(c_k) equals
// int_{-1}^{1} g(c) sqrt(1-c^2) dc for polynomial g of degree <= 2m-1.
// Closed form: c_k = cos(k pi/(m+1)), w_k = pi/(m+1) sin^2(k pi/(m+1)).
std::pair<Eigen::VectorXd, Eigen::VectorXd> chebyshev_u(int points);

// Tensor product of per-axis Gauss-Legendre rules mapped onto the box,
// discretizing normalized Lebesgue measure. exactness_degree is
// 2*points_per_axis - 1 per axis. Rejects rules above 1e7 nodes.
QuadratureRule build_box_rule(const DomainSpec& box, int points_per_axis);

// Same nodes with the weight scale * e^{q} of `measure` folded into the rule
// weights. A normalized measure divides by the quadrature mass of e^{q}, so
// total mass is 1 only up to the rule's own accuracy for non-constant q.
QuadratureRule build_box_rule(const DomainSpec& box, const MeasureSpec& measure,
                              int points_per_axis);

// Rule for the rotation-invariant probability measure on a sphere sector.
// Dimensions 2..4 use deterministic product rules in spherical angles:
// the full sphere gets the polynomially exact forms (uniform azimuth,
// Gauss-Legendre in the cosine of the sin-weighted polar angle,
// Gauss-Chebyshev for the sin^2-weighted one), while sign-constrained
// sectors place Gauss-Legendre nodes in each angle over exactly the
// constrained range, which converges superexponentially for the entire
// integrands arising here. Weights are rescaled to the exact sector mass
// 2^-s. Dimension >= 5 requires an explicit seed and falls back to Monte
// Carlo over the sector with equal weights; the seed and a 1/sqrt(count)
// standard-error scale are recorded in the rule.
QuadratureRule build_sector_rule(const DomainSpec& sector, int order,
                                 std::optional<std::uint64_t> mc_seed = std::nullopt);

// Sector rule with a weighted measure folded in, as for boxes.
QuadratureRule build_sector_rule(const DomainSpec& sector, const MeasureSpec& measure, int order,
                                 std::optional<std::uint64_t> mc_seed = std::nullopt);

// sum w_i f(node_i) accumulated in a fixed pairwise tree order, so results
// are bitwise reproducible including under parallel evaluation. Throws
// std::domain_error if f returns a non-finite value at any node.
double integrate(const QuadratureRule& rule, const std::function<double(const Eigen::VectorXd&)>& f,
                 bool parallel = false);

// Defaults used by the pipeline: integrands are e^{p} with deg p <= max_degree,
// and Gauss rules converge geometrically for these, so a fixed margin above
// the polynomial degree reaches 1e-10 on desk-scale problems.
int default_points_per_axis(int max_degree);  // max_degree + 10
int default_sector_order(int max_degree);     // 2*max_degree + 8

}  // namespace momentcone
