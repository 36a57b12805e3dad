#include "momentcone/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace momentcone {

namespace {

constexpr double kMinStep = 1e-14;
constexpr double kMaxRegularization = 1e8;
constexpr int kPolishSteps = 2;

Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd matrix, const char* what) {
    const double scale = matrix.diagonal().mean();
    double jitter = 0.0;
    for (int attempt = 0; attempt < 14; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(matrix + jitter * Eigen::MatrixXd::Identity(
                                                              matrix.rows(), matrix.cols()));
        if (llt.info() == Eigen::Success) return llt.matrixL();
        jitter = jitter == 0.0 ? 1e-14 * scale : 10.0 * jitter;
    }
    throw std::runtime_error(std::string(what) + ": Cholesky factorization failed");
}

struct NewtonDirection {
    Eigen::VectorXd step;
    double slope = 0.0;
    bool ok = false;
};

// Solves (A + lambda I) u = r in the preconditioned variables, escalating
// lambda tenfold from the floor until the factorization succeeds and the
// direction ascends. Large lambda bends the direction toward the
// preconditioned gradient, which always ascends, so escalation terminates.
NewtonDirection solve_newton_system(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& grad,
                                    const Eigen::MatrixXd& lower, const SolverConfig& cfg) {
    const auto solve_lower = [&lower](const Eigen::VectorXd& v) {
        return lower.triangularView<Eigen::Lower>().solve(v).eval();
    };
    const Eigen::MatrixXd lower_inv_h =
        lower.triangularView<Eigen::Lower>().solve(hessian).transpose();
    const Eigen::MatrixXd preconditioned =
        lower.triangularView<Eigen::Lower>().solve(lower_inv_h);
    const Eigen::VectorXd rhs = solve_lower(grad);

    NewtonDirection dir;
    double lambda = 0.0;
    while (lambda <= kMaxRegularization) {
        Eigen::MatrixXd shifted = preconditioned;
        shifted.diagonal().array() += lambda;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            const Eigen::VectorXd u = llt.solve(rhs);
            dir.step = lower.transpose().triangularView<Eigen::Upper>().solve(u);
            dir.slope = grad.dot(dir.step);
            if (std::isfinite(dir.slope) && dir.slope > 0.0 && dir.step.allFinite()) {
                dir.ok = true;
                return dir;
            }
        }
        lambda = lambda == 0.0 ? cfg.newton_regularization_floor : 10.0 * lambda;
    }
    return dir;
}

double relative_residual(const Eigen::VectorXd& grad, double y_norm) {
    return grad.lpNorm<Eigen::Infinity>() / std::max(1.0, y_norm);
}

}  // namespace

void validate(const SolverConfig& cfg) {
    const bool positive = cfg.grad_tol > 0.0 && cfg.max_iters > 0 && cfg.divergence_norm > 0.0 &&
                          cfg.divergence_objective > 0.0 && cfg.newton_regularization_floor > 0.0 &&
                          cfg.armijo_slope > 0.0;
    if (!positive) throw std::invalid_argument("SolverConfig: all parameters must be positive");
    if (!(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0)) {
        throw std::invalid_argument("SolverConfig: backtrack_factor must lie in (0, 1)");
    }
}

Preconditioner Preconditioner::from_context(const ObjectiveContext& ctx) {
    const PolyCoeffs zero{ctx.basis().spec(),
                          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ctx.basis().size()))};
    return Preconditioner{cholesky_with_jitter(eval_hessian(ctx, zero), "Preconditioner")};
}

SolveReport fenchel_solve(const ObjectiveContext& ctx, const MomentSequence& y,
                          const SolverConfig& cfg) {
    validate(cfg);
    if (!(y.basis == ctx.basis().spec())) {
        throw std::invalid_argument("fenchel_solve: moment basis does not match the context");
    }
    if (!y.values.allFinite()) {
        throw std::invalid_argument("fenchel_solve: moment values must be finite");
    }

    const Preconditioner precond = Preconditioner::from_context(ctx);
    const double y_norm = y.values.lpNorm<Eigen::Infinity>();

    PolyCoeffs p{ctx.basis().spec(),
                 Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ctx.basis().size()))};
    double objective = dual_objective(ctx, p, y);
    Eigen::VectorXd grad = dual_gradient(ctx, p, y).values;
    double residual = relative_residual(grad, y_norm);

    SolveReport report;
    report.trace.push_back(
        TraceEntry{objective, grad.lpNorm<Eigen::Infinity>(), 0.0, 0.0});

    const auto finish_interior = [&](int polish_left) {
        // A few full Newton polish steps past the stopping test: the
        // tolerance is met at 1e-8, but the quadratic phase cheaply buys
        // the extra digits that the p* accuracy targets need.
        while (polish_left-- > 0) {
            const Eigen::MatrixXd hessian = eval_hessian(ctx, p);
            const NewtonDirection dir = solve_newton_system(hessian, grad, precond.lower, cfg);
            if (!dir.ok) break;
            PolyCoeffs candidate = p;
            candidate.coeffs += dir.step;
            Eigen::VectorXd cand_grad;
            try {
                cand_grad = dual_gradient(ctx, candidate, y).values;
            } catch (const std::overflow_error&) {
                break;
            }
            const double cand_residual = relative_residual(cand_grad, y_norm);
            const double cand_objective = dual_objective(ctx, candidate, y);
            if (!(cand_residual < residual) || cand_objective < objective) break;
            p = candidate;
            grad = cand_grad;
            residual = cand_residual;
            objective = cand_objective;
            ++report.iterations;
            report.trace.push_back(TraceEntry{objective, grad.lpNorm<Eigen::Infinity>(), 1.0,
                                              p.coeffs.lpNorm<Eigen::Infinity>()});
        }
        report.status = SolveStatus::Interior;
        report.p_star = p;
        report.fstar = objective;
        report.residual = residual;
        report.message = "gradient matched within tolerance";
    };

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        if (residual <= cfg.grad_tol) {
            finish_interior(kPolishSteps);
            return report;
        }
        const double p_norm = p.coeffs.lpNorm<Eigen::Infinity>();
        if (objective > cfg.divergence_objective || p_norm > cfg.divergence_norm) {
            // Every accepted step strictly increased g and the next ascent
            // direction still exists, so this is the divergence signature of
            // f*(y) = +infinity rather than a stalled solve.
            report.status = SolveStatus::Unbounded;
            report.residual = residual;
            report.message = objective > cfg.divergence_objective
                                 ? "objective exceeded the divergence threshold while ascending"
                                 : "iterate norm exceeded the divergence threshold while ascending";
            return report;
        }

        const Eigen::MatrixXd hessian = eval_hessian(ctx, p);
        const NewtonDirection dir = solve_newton_system(hessian, grad, precond.lower, cfg);
        if (!dir.ok) {
            report.status = SolveStatus::Inconclusive;
            report.residual = residual;
            report.message = "no ascent direction within the regularization budget";
            return report;
        }

        double step = 1.0;
        bool accepted = false;
        while (step >= kMinStep) {
            PolyCoeffs candidate = p;
            candidate.coeffs += step * dir.step;
            const double cand_objective = dual_objective(ctx, candidate, y);
            if (cand_objective >= objective + cfg.armijo_slope * step * dir.slope) {
                p = candidate;
                objective = cand_objective;
                accepted = true;
                break;
            }
            step *= cfg.backtrack_factor;
        }
        if (!accepted) {
            report.status = SolveStatus::Inconclusive;
            report.residual = residual;
            report.message = "line search failed below the minimal step";
            return report;
        }

        grad = dual_gradient(ctx, p, y).values;
        residual = relative_residual(grad, y_norm);
        ++report.iterations;
        report.trace.push_back(TraceEntry{objective, grad.lpNorm<Eigen::Infinity>(), step,
                                          p.coeffs.lpNorm<Eigen::Infinity>()});
    }

    if (residual <= cfg.grad_tol) {
        finish_interior(kPolishSteps);
        return report;
    }
    report.status = SolveStatus::Inconclusive;
    report.residual = residual;
    report.message = "iteration limit reached; residual " + std::to_string(residual);
    return report;
}

std::pair<double, PolyCoeffs> barrier_eval(const ObjectiveContext& ctx, const MomentSequence& y,
                                           const SolverConfig& cfg) {
    SolveReport report = fenchel_solve(ctx, y, cfg);
    if (report.status != SolveStatus::Interior) {
        throw std::domain_error("not in barrier domain: " + report.message);
    }
    return {*report.fstar, *report.p_star};
}

NecessaryConditionResult necessary_condition_check(const MomentSequence& y) {
    if (y.basis.mode != BasisMode::AllDegreesUpTo) {
        throw std::invalid_argument("necessary_condition_check: requires the all-degrees basis");
    }
    const Basis full(y.basis);
    if (y.values.size() != static_cast<Eigen::Index>(full.size())) {
        throw std::invalid_argument("necessary_condition_check: moment vector length mismatch");
    }
    const Basis half(BasisSpec{y.basis.num_vars, y.basis.max_degree / 2, BasisMode::AllDegreesUpTo});
    const Eigen::Index size = static_cast<Eigen::Index>(half.size());

    Eigen::MatrixXd moment_matrix(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) {
            MultiIndex sum = half.at(static_cast<std::size_t>(i));
            const MultiIndex& other = half.at(static_cast<std::size_t>(j));
            for (std::size_t v = 0; v < sum.exponents.size(); ++v) {
                sum.exponents[v] += other.exponents[v];
            }
            moment_matrix(i, j) = y.values[static_cast<Eigen::Index>(full.position_of(sum))];
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(moment_matrix);
    NecessaryConditionResult result;
    result.min_eigenvalue = eigen.eigenvalues().minCoeff();
    result.trace = moment_matrix.trace();
    result.pass = result.min_eigenvalue >= -1e-10 * std::abs(result.trace);
    if (!result.pass) {
        Eigen::Index argmin = 0;
        eigen.eigenvalues().minCoeff(&argmin);
        result.witness = eigen.eigenvectors().col(argmin);
    }
    return result;
}

}  // namespace momentcone
