#include "momentcone/pipeline.hpp"

#include "momentcone/quadrature.hpp"
#include "momentcone/reduction.hpp"
#include "momentcone/version.hpp"

#include "json_util.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>
#include <utility>
#include <vector>

namespace momentcone {

namespace {

using detail::ordered_json;

// Everything derived from the instance before solving: the integration
// domain (the box itself, or the sector for unbounded K), the measure and
// moment sequence transported there, and the discretization.
struct PreparedProblem {
    bool homogenized = false;
    DomainSpec integration_domain;
    MeasureSpec integration_measure;
    MomentSequence y_solve;
    QuadratureRule rule;
    int quad_order = 0;
    double log_weight_mass = 0.0;
};

void validate_instance(const Instance& instance) {
    if (instance.num_vars < 1) throw std::invalid_argument("instance: n must be >= 1");
    if (instance.degree < 2 || instance.degree % 2 != 0) {
        throw std::invalid_argument("instance: degree must be even and >= 2");
    }
    validate(instance.domain);
    if (instance.domain.kind == DomainKind::SphereSector) {
        throw std::invalid_argument("instance: the domain describes K, not the sector");
    }
    if (instance.domain.dim != instance.num_vars) {
        throw std::invalid_argument("instance: domain dimension does not match n");
    }
    const BasisSpec expected{instance.num_vars, instance.degree, BasisMode::AllDegreesUpTo};
    if (!(instance.moments.basis == expected)) {
        throw std::invalid_argument("instance: moments use an unexpected basis");
    }
    if (instance.moments.values.size() != static_cast<Eigen::Index>(basis_size(expected))) {
        throw std::invalid_argument("instance: moment vector length mismatch");
    }
    if (!instance.moments.values.allFinite()) {
        throw std::invalid_argument("instance: moment values must be finite");
    }
}

// log of the mass of e^{q} against the mass-one normalization of the base
// rule; density_at uses it to undo the normalized measure's rescale.
double weight_log_mass(const QuadratureRule& base_rule, const PolyCoeffs& log_weight) {
    const Basis basis(log_weight.basis);
    const Eigen::Index count = base_rule.weights.size();
    Eigen::VectorXd q(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        q[i] = eval_poly(basis, log_weight.coeffs, base_rule.nodes.row(i).transpose());
    }
    const double shift = q.maxCoeff();
    std::vector<double> terms(static_cast<std::size_t>(count));
    for (Eigen::Index i = 0; i < count; ++i) {
        terms[static_cast<std::size_t>(i)] = base_rule.weights[i] * std::exp(q[i] - shift);
    }
    return shift + std::log(pairwise_sum(terms) / base_rule.weights.sum());
}

PreparedProblem prepare(const Instance& instance, const PipelineConfig& cfg, int order_bump = 0) {
    validate_instance(instance);
    PreparedProblem prep;
    if (instance.domain.kind == DomainKind::Box) {
        prep.integration_domain = instance.domain;
        prep.integration_measure = instance.measure;
        prep.y_solve = instance.moments;
        prep.quad_order =
            cfg.quad_order.value_or(default_points_per_axis(instance.degree)) + order_bump;
        prep.rule = build_box_rule(instance.domain, instance.measure, prep.quad_order);
        if (instance.measure.log_weight && instance.measure.normalized) {
            prep.log_weight_mass = weight_log_mass(build_box_rule(instance.domain, prep.quad_order),
                                                   *instance.measure.log_weight);
        }
    } else {
        prep.homogenized = true;
        prep.integration_domain = build_sector_from_K(instance.domain);
        prep.integration_measure.base = MeasureBase::RotationInvariantOnSector;
        prep.integration_measure.scale = instance.measure.scale;
        prep.integration_measure.normalized = instance.measure.normalized;
        if (instance.measure.log_weight) {
            prep.integration_measure.log_weight = homogenize_poly(*instance.measure.log_weight);
        }
        prep.y_solve = homogenize_sequence(instance.moments);
        prep.quad_order = cfg.quad_order.value_or(default_sector_order(instance.degree)) + order_bump;
        prep.rule = build_sector_rule(prep.integration_domain, prep.integration_measure,
                                      prep.quad_order, cfg.mc_seed);
        if (prep.integration_measure.log_weight && prep.integration_measure.normalized) {
            prep.log_weight_mass =
                weight_log_mass(build_sector_rule(prep.integration_domain, prep.quad_order,
                                                  cfg.mc_seed),
                                *prep.integration_measure.log_weight);
        }
    }
    return prep;
}

SolverConfig solver_config(const PipelineConfig& cfg) {
    SolverConfig scfg;
    scfg.grad_tol = cfg.tol / 10.0;
    scfg.max_iters = cfg.max_iters;
    scfg.divergence_norm = cfg.divergence_norm;
    scfg.divergence_objective = cfg.divergence_objective;
    return scfg;
}

int status_exit_code(SolveStatus status) {
    switch (status) {
        case SolveStatus::Interior:
            return 0;
        case SolveStatus::Unbounded:
            return 2;
        case SolveStatus::Inconclusive:
            return 3;
    }
    return 3;
}

const char* status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Interior:
            return "interior";
        case SolveStatus::Unbounded:
            return "unbounded";
        case SolveStatus::Inconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

ordered_json residual_report_to_json(const MomentResidualReport& report, const Basis& basis) {
    ordered_json out;
    out["tol"] = report.tol;
    out["max_abs_error"] = report.max_abs_error;
    out["pass"] = report.pass;
    out["per_index"] = ordered_json::array();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        ordered_json entry;
        entry["alpha"] = basis.at(i).exponents;
        entry["error"] = report.per_index_abs_error[static_cast<Eigen::Index>(i)];
        out["per_index"].push_back(std::move(entry));
    }
    return out;
}

// Report skeleton shared by the three commands; the timestamp is the one
// field excluded from determinism comparisons.
ordered_json base_report(const char* command, const Instance& instance,
                         const PipelineConfig& cfg, const PreparedProblem& prep,
                         const NecessaryConditionResult& ncc) {
    ordered_json report;
    report["tool"] = kToolName;
    report["version"] = kVersion;
    report["timestamp"] = utc_timestamp();
    report["command"] = command;

    ordered_json instance_json;
    instance_json["n"] = instance.num_vars;
    instance_json["degree"] = instance.degree;
    instance_json["domain"] = detail::domain_to_json(instance.domain);
    instance_json["measure"] = detail::measure_to_json(instance.measure);
    report["instance"] = std::move(instance_json);

    ordered_json config;
    config["quad_order"] = prep.quad_order;
    config["tol"] = cfg.tol;
    config["grad_tol"] = cfg.tol / 10.0;
    config["max_iters"] = cfg.max_iters;
    config["divergence_norm"] = cfg.divergence_norm;
    config["divergence_objective"] = cfg.divergence_objective;
    config["trace"] = cfg.trace;
    config["parallel"] = cfg.parallel;
    if (prep.rule.mc_seed) config["mc_seed"] = *prep.rule.mc_seed;
    if (prep.rule.mc_standard_error) config["mc_standard_error"] = *prep.rule.mc_standard_error;
    report["config"] = std::move(config);

    ordered_json homog;
    homog["applied"] = prep.homogenized;
    if (prep.homogenized) {
        homog["sector"] = detail::domain_to_json(prep.integration_domain);
        const Basis homog_basis(prep.y_solve.basis);
        homog["moments"] = detail::indexed_values_to_json(homog_basis, prep.y_solve.values);
    }
    report["homogenization"] = std::move(homog);

    ordered_json ncc_json;
    ncc_json["pass"] = ncc.pass;
    ncc_json["min_eigenvalue"] = ncc.min_eigenvalue;
    ncc_json["trace"] = ncc.trace;
    if (!ncc.pass) {
        const Basis half(
            BasisSpec{instance.num_vars, instance.degree / 2, BasisMode::AllDegreesUpTo});
        ncc_json["witness"] = detail::indexed_values_to_json(half, ncc.witness);
    }
    report["necessary_condition"] = std::move(ncc_json);
    return report;
}

void append_solve(ordered_json& report, const SolveReport& solve, const PreparedProblem& prep,
                  bool with_trace) {
    report["status"] = status_name(solve.status);
    report["message"] = solve.message;
    report["iterations"] = solve.iterations;
    report["residual"] = solve.residual;
    if (solve.status == SolveStatus::Interior) {
        report["fstar"] = *solve.fstar;
        const PolyCoeffs& p_sector = *solve.p_star;
        if (prep.homogenized) {
            const PolyCoeffs p_user = dehomogenize_poly(p_sector);
            report["p_star"] =
                detail::indexed_values_to_json(Basis(p_user.basis), p_user.coeffs);
            report["homogenization"]["p_star_sector"] =
                detail::indexed_values_to_json(Basis(p_sector.basis), p_sector.coeffs);
        } else {
            report["p_star"] =
                detail::indexed_values_to_json(Basis(p_sector.basis), p_sector.coeffs);
        }
    }
    if (with_trace) {
        ordered_json trace = ordered_json::array();
        for (const TraceEntry& entry : solve.trace) {
            ordered_json t;
            t["objective"] = entry.objective;
            t["grad_norm"] = entry.grad_norm;
            t["step_size"] = entry.step_size;
            t["p_norm"] = entry.p_norm;
            trace.push_back(std::move(t));
        }
        report["solver_trace"] = std::move(trace);
    }
}

DensityModel make_density_model(const PreparedProblem& prep, const SolveReport& solve) {
    DensityModel model;
    model.p_star = *solve.p_star;
    model.measure = prep.integration_measure;
    model.domain = prep.integration_domain;
    model.log_weight_mass = prep.log_weight_mass;
    return model;
}

}  // namespace

PipelineResult run_check(const Instance& instance, const PipelineConfig& cfg) {
    const PreparedProblem prep = prepare(instance, cfg);
    const ObjectiveContext ctx(prep.y_solve.basis, prep.rule, cfg.parallel);
    const NecessaryConditionResult ncc = necessary_condition_check(instance.moments);
    PipelineResult result;
    result.solve = fenchel_solve(ctx, prep.y_solve, solver_config(cfg));
    result.status = result.solve.status;
    result.exit_code = status_exit_code(result.status);

    ordered_json report = base_report("check", instance, cfg, prep, ncc);
    append_solve(report, result.solve, prep, cfg.trace);
    if (result.status == SolveStatus::Interior) {
        const DensityModel model = make_density_model(prep, result.solve);
        result.verification =
            verify_moments(model, prep.rule, prep.y_solve, cfg.tol, cfg.parallel);
        report["verification"] =
            residual_report_to_json(*result.verification, Basis(prep.y_solve.basis));
    }
    result.report_json = report.dump(2) + "\n";
    return result;
}

PipelineResult run_reconstruct(const Instance& instance, const PipelineConfig& cfg) {
    const PreparedProblem prep = prepare(instance, cfg);
    const ObjectiveContext ctx(prep.y_solve.basis, prep.rule, cfg.parallel);
    const NecessaryConditionResult ncc = necessary_condition_check(instance.moments);
    PipelineResult result;
    result.solve = fenchel_solve(ctx, prep.y_solve, solver_config(cfg));
    result.status = result.solve.status;
    result.exit_code = status_exit_code(result.status);

    ordered_json report = base_report("reconstruct", instance, cfg, prep, ncc);
    append_solve(report, result.solve, prep, cfg.trace);
    if (result.status == SolveStatus::Interior) {
        const DensityModel model = make_density_model(prep, result.solve);
        result.density = model;
        result.verification =
            verify_moments(model, prep.rule, prep.y_solve, cfg.tol, cfg.parallel);
        // A finer rule catches a match manufactured by the discretization
        // itself rather than by the optimizer.
        const PreparedProblem finer = prepare(instance, cfg, 6);
        result.independent_verification =
            verify_moments(model, finer.rule, prep.y_solve, cfg.tol, cfg.parallel);
        const Basis report_basis(prep.y_solve.basis);
        report["verification"] = residual_report_to_json(*result.verification, report_basis);
        report["independent_verification"] =
            residual_report_to_json(*result.independent_verification, report_basis);
        if (!result.verification->pass || !result.independent_verification->pass) {
            result.exit_code = 1;
            report["message"] = "reconstruction verification failed at tolerance";
        }
    }
    result.report_json = report.dump(2) + "\n";
    return result;
}

PipelineResult run_barrier(const Instance& instance, const PipelineConfig& cfg) {
    const PreparedProblem prep = prepare(instance, cfg);
    const ObjectiveContext ctx(prep.y_solve.basis, prep.rule, cfg.parallel);
    const NecessaryConditionResult ncc = necessary_condition_check(instance.moments);
    PipelineResult result;
    result.solve = fenchel_solve(ctx, prep.y_solve, solver_config(cfg));
    result.status = result.solve.status;
    result.exit_code = status_exit_code(result.status);

    ordered_json report = base_report("barrier", instance, cfg, prep, ncc);
    append_solve(report, result.solve, prep, cfg.trace);
    if (result.status == SolveStatus::Interior) {
        // The gradient of the barrier at y is the optimizer itself.
        ordered_json barrier;
        barrier["fstar"] = *result.solve.fstar;
        const PolyCoeffs& p_sector = *result.solve.p_star;
        const PolyCoeffs p_user =
            prep.homogenized ? dehomogenize_poly(p_sector) : p_sector;
        barrier["gradient"] = detail::indexed_values_to_json(Basis(p_user.basis), p_user.coeffs);
        report["barrier"] = std::move(barrier);
    } else {
        report["message"] = std::string("outside barrier domain: ") + result.solve.message;
    }
    result.report_json = report.dump(2) + "\n";
    return result;
}

}  // namespace momentcone
