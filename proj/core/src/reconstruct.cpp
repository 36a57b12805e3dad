#include "momentcone/reconstruct.hpp"

#include <cmath>
#include <stdexcept>

namespace momentcone {

double density_at(const DensityModel& model, const Eigen::VectorXd& x) {
    if (!contains(model.domain, x)) {
        throw std::domain_error("density_at: point outside the domain");
    }
    const Basis basis(model.p_star.basis);
    double exponent = eval_poly(basis, model.p_star.coeffs, x);
    if (model.measure.log_weight.has_value()) {
        const Basis weight_basis(model.measure.log_weight->basis);
        exponent += eval_poly(weight_basis, model.measure.log_weight->coeffs, x);
        if (model.measure.normalized) exponent -= model.log_weight_mass;
    }
    // Density of the base measure: normalized Lebesgue spreads 1/volume over
    // a box; the sector reference is the sphere's probability measure
    // restricted to the sector, density 1 either way.
    double base = 1.0;
    if (model.domain.kind == DomainKind::Box && model.measure.normalized) {
        base = 1.0 / box_volume(model.domain);
    }
    return model.measure.scale * base * std::exp(exponent);
}

MomentResidualReport verify_moments(const DensityModel& model, const QuadratureRule& rule,
                                    const MomentSequence& y, double tol, bool parallel) {
    if (rule.domain.dim != model.domain.dim) {
        throw std::invalid_argument("verify_moments: rule dimension does not match the model");
    }
    const ObjectiveContext ctx(y.basis, rule, parallel);
    const MomentSequence recovered = eval_grad(ctx, model.p_star);

    MomentResidualReport report;
    report.per_index_abs_error = (recovered.values - y.values).cwiseAbs();
    report.max_abs_error = report.per_index_abs_error.lpNorm<Eigen::Infinity>();
    report.tol = tol;
    report.pass = report.max_abs_error <= tol;
    return report;
}

std::vector<MomentSequence> concentration_curve(const ObjectiveContext& ctx, const PolyCoeffs& p,
                                                const std::vector<double>& betas) {
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (!(betas[i] > 0.0)) {
            throw std::invalid_argument("concentration_curve: betas must be positive");
        }
        if (i > 0 && !(betas[i] > betas[i - 1])) {
            throw std::invalid_argument("concentration_curve: betas must be strictly increasing");
        }
    }
    std::vector<MomentSequence> curve;
    curve.reserve(betas.size());
    for (double beta : betas) {
        PolyCoeffs scaled = p;
        scaled.coeffs *= beta;
        curve.push_back(normalized_moments(ctx, scaled));
    }
    return curve;
}

}  // namespace momentcone
