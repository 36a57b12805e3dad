#pragma once

#include "momentcone/basis.hpp"
#include "momentcone/quadrature.hpp"

#include <Eigen/Core>

namespace momentcone {

// Everything needed to evaluate f(p) = int e^{p} dmu and its derivatives
// against one fixed discretization: the basis, the rule, and the cached
// matrix of monomial values at the nodes (row i is eval_monomial_vector at
// node i). Immutable after construction and safe to share across threads.
class ObjectiveContext {
public:
    // parallel_build fills the cached rows on several threads; the entries
    // are identical bits either way. Throws if the basis does not fit the
    // rule's domain (boxes pair with the all-degrees basis, sphere sectors
    // with the homogeneous one) or if a sphere node fails the unit-pairing
    // identity below.
    ObjectiveContext(const BasisSpec& basis, QuadratureRule rule, bool parallel_build = false);

    const Basis& basis() const { return basis_; }
    const QuadratureRule& rule() const { return rule_; }
    const Eigen::MatrixXd& node_monomials() const { return node_monomials_; }

    // The direction h with <h, L(v)> = 1 at every point of the domain: the
    // constant polynomial 1 in all-degrees mode, (z_0^2+...+z_m^2)^d on the
    // sphere. Adding a*h to p multiplies e^{p} by e^{a} pointwise, which is
    // the scaling identity the solver leans on.
    const PolyCoeffs& unit_direction() const { return unit_direction_; }

private:
    Basis basis_;
    QuadratureRule rule_;
    Eigen::MatrixXd node_monomials_;
    PolyCoeffs unit_direction_;
};

// log f(p), evaluated as shift + log sum w_i e^{p(v_i) - shift} with
// shift = max_i p(v_i), so it never overflows however large the solver lets
// p grow. Throws std::invalid_argument on basis mismatch or non-finite p.
struct LogFValue {
    double log_f = 0.0;
    double shift = 0.0;
};

LogFValue eval_logf(const ObjectiveContext& ctx, const PolyCoeffs& p);

// Moment sequence of e^{p} dmu: entry alpha is sum w_i v_i^alpha e^{p(v_i)}.
// This is the gradient of f. Throws std::overflow_error once entries leave
// the representable range (log f beyond about 700) instead of saturating.
MomentSequence eval_grad(const ObjectiveContext& ctx, const PolyCoeffs& p);

// Moment matrix of e^{p} dmu over basis pairs: entry (alpha, beta) is
// sum w_i v_i^{alpha+beta} e^{p(v_i)}, assembled as B^T B from the cached
// degree-<=2d monomials, hence symmetric positive semidefinite. Overflow as
// in eval_grad.
Eigen::MatrixXd eval_hessian(const ObjectiveContext& ctx, const PolyCoeffs& p);

// Concave dual objective g(p) = <p, y> - f(p). Returns -infinity when f(p)
// overflows: that is the honest value of the hill being climbed, and it
// makes the solver's backtracking reject such steps without special cases.
double dual_objective(const ObjectiveContext& ctx, const PolyCoeffs& p, const MomentSequence& y);

// Gradient of the dual objective, y - eval_grad(p).
MomentSequence dual_gradient(const ObjectiveContext& ctx, const PolyCoeffs& p,
                             const MomentSequence& y);

// Moments of e^{p} dmu divided by its mass: the probability-normalized
// sequence s = grad f(p) / f(p). Computed entirely in shifted form, so it
// stays finite for arbitrarily scaled p; this is what the concentration
// curves evaluate at p = beta * q for large beta.
MomentSequence normalized_moments(const ObjectiveContext& ctx, const PolyCoeffs& p);

}  // namespace momentcone
