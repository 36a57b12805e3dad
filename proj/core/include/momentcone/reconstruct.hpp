#pragma once

#include "momentcone/objective.hpp"
#include "momentcone/solver.hpp"

#include <Eigen/Core>

#include <vector>

namespace momentcone {

// The reconstructed maximum-entropy measure e^{p*} dmu, stored as the
// optimizer coefficients plus the measure it is relative to, not as samples.
struct DensityModel {
    PolyCoeffs p_star;
    MeasureSpec measure;
    DomainSpec domain;
    // log of the mass of e^{q} against the normalized base measure, filled
    // when the measure carries a weight and the normalized flag; density_at
    // needs it to undo the normalization rescale.
    double log_weight_mass = 0.0;
};

// Density of the reconstructed measure at x, relative to Lebesgue measure on
// boxes and to the rotation-invariant probability measure on sectors:
// e^{p*(x)} times the density of mu itself. Throws std::domain_error when x
// lies outside the domain.
double density_at(const DensityModel& model, const Eigen::VectorXd& x);

struct MomentResidualReport {
    Eigen::VectorXd per_index_abs_error;
    double max_abs_error = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Recomputes the moments of e^{p*} dmu on `rule` and compares them with y
// entrywise. Passing the solver's own rule checks optimizer convergence;
// passing an independent higher-order rule additionally checks that the
// discretization itself did not manufacture the match.
MomentResidualReport verify_moments(const DensityModel& model, const QuadratureRule& rule,
                                    const MomentSequence& y, double tol, bool parallel = false);

// The normalized moment sequences s_beta of e^{beta p} dmu for each beta.
// When p has a unique maximizer s in the domain's interior, s_beta tends to
// the evaluation functional L(s) as beta grows; the shifted evaluation keeps
// every beta finite. Betas must be positive and strictly increasing.
std::vector<MomentSequence> concentration_curve(const ObjectiveContext& ctx, const PolyCoeffs& p,
                                                const std::vector<double>& betas);

}  // namespace momentcone
