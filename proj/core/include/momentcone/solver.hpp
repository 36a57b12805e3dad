#pragma once

#include "momentcone/objective.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace momentcone {

struct SolverConfig {
    double grad_tol = 1e-8;          // on ||y - grad f(p)||_inf / max(1, ||y||_inf)
    int max_iters = 200;
    double divergence_norm = 1e4;    // ||p||_inf beyond this counts as divergence
    double divergence_objective = 1e6;  // g(p) beyond this counts as divergence
    double newton_regularization_floor = 1e-12;
    double armijo_slope = 1e-4;
    double backtrack_factor = 0.5;
};

void validate(const SolverConfig& cfg);

enum class SolveStatus {
    Interior,      // gradient matched: y certified interior, f*(y) attained
    Unbounded,     // objective climbed past the thresholds while still ascending
    Inconclusive,  // iteration or line-search budget exhausted without either
};

struct TraceEntry {
    double objective = 0.0;
    double grad_norm = 0.0;  // ||y - grad f(p)||_inf
    double step_size = 0.0;  // accepted Armijo step; 0 for the starting point
    double p_norm = 0.0;     // ||p||_inf
};

struct SolveReport {
    SolveStatus status = SolveStatus::Inconclusive;
    std::optional<PolyCoeffs> p_star;  // Interior only
    std::optional<double> fstar;       // Interior only: <p*,y> - f(p*)
    double residual = 0.0;             // last relative gradient norm
    int iterations = 0;                // accepted Newton steps
    std::vector<TraceEntry> trace;     // starting point plus one entry per accepted step
    std::string message;
};

// Cholesky factor L of the moment matrix of mu itself (the Hessian at p=0).
// Newton systems are solved in the variables L^T p, where that matrix is the
// identity; this undoes most of the notorious Hankel ill-conditioning of the
// raw monomial basis.
struct Preconditioner {
    Eigen::MatrixXd lower;

    static Preconditioner from_context(const ObjectiveContext& ctx);
};

// Maximizes the concave dual g(p) = <p,y> - f(p) by damped Newton from
// p = 0 with Armijo backtracking. Interior means the maximum was attained
// and grad f(p*) = y within tolerance; Unbounded means g climbed past
// cfg.divergence_objective, or ||p||_inf past cfg.divergence_norm, while
// strictly ascending, which is the numerical signature of f*(y) = +infinity
// on or outside the cone boundary. Divergence is evidence, not proof, and
// the report says which threshold fired.
SolveReport fenchel_solve(const ObjectiveContext& ctx, const MomentSequence& y,
                          const SolverConfig& cfg = {});

// Barrier view of the same computation: value f*(y) and its gradient, which
// is the optimizer p* itself. Throws std::domain_error("not in barrier
// domain: ...") when the solve does not certify Interior.
std::pair<double, PolyCoeffs> barrier_eval(const ObjectiveContext& ctx, const MomentSequence& y,
                                           const SolverConfig& cfg = {});

struct NecessaryConditionResult {
    bool pass = true;
    double min_eigenvalue = 0.0;
    double trace = 0.0;
    // Eigenvector for the minimal eigenvalue when failing: the coefficients,
    // over the half-degree basis, of a square that y pairs negatively with.
    Eigen::VectorXd witness;
};

// PSD check of the moment matrix M_d(y) with entries y_{alpha+beta} over
// half-degree index pairs. Any y with a representing measure passes; failure
// certifies y outside the closed cone. Requires the all-degrees basis.
NecessaryConditionResult necessary_condition_check(const MomentSequence& y);

}  // namespace momentcone
