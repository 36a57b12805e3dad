#include "momentcone/objective.hpp"

#include "momentcone/reduction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace momentcone {

namespace {

// exp() overflows just above 709; stopping at 700 leaves headroom for the
// monomial factors multiplied on top of e^{shift}.
constexpr double kExpCap = 700.0;

void require_same_basis(const ObjectiveContext& ctx, const BasisSpec& basis, const char* what) {
    if (!(basis == ctx.basis().spec())) {
        throw std::invalid_argument(std::string(what) + ": basis does not match the context");
    }
}

// Per-node pieces shared by every evaluation: exponents s_i = p(v_i), the
// max shift, the damped terms t_i = w_i e^{s_i - shift} (all <= w_i), and
// log f assembled from their tree sum.
struct ShiftedTerms {
    Eigen::VectorXd t;
    double shift = 0.0;
    double log_f = 0.0;
};

ShiftedTerms shifted_terms(const ObjectiveContext& ctx, const PolyCoeffs& p) {
    if (!p.coeffs.allFinite()) {
        throw std::invalid_argument("objective: polynomial coefficients must be finite");
    }
    const Eigen::VectorXd s = ctx.node_monomials() * p.coeffs;
    ShiftedTerms out;
    out.shift = s.maxCoeff();
    const Eigen::Index count = s.size();
    std::vector<double> terms(static_cast<std::size_t>(count));
    out.t.resize(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        const double ti = ctx.rule().weights[i] * std::exp(s[i] - out.shift);
        out.t[i] = ti;
        terms[static_cast<std::size_t>(i)] = ti;
    }
    out.log_f = out.shift + std::log(pairwise_sum(terms));
    return out;
}

}  // namespace

ObjectiveContext::ObjectiveContext(const BasisSpec& basis, QuadratureRule rule, bool parallel_build)
    : basis_(basis), rule_(std::move(rule)), unit_direction_{basis, {}} {
    const bool on_sphere = rule_.domain.kind == DomainKind::SphereSector;
    if (on_sphere && basis.mode != BasisMode::HomogeneousExactly) {
        throw std::invalid_argument("ObjectiveContext: sphere rules need the homogeneous basis");
    }
    if (basis.max_degree % 2 != 0) {
        throw std::invalid_argument("ObjectiveContext: basis degree must be even");
    }
    if (!on_sphere && basis.mode != BasisMode::AllDegreesUpTo) {
        throw std::invalid_argument("ObjectiveContext: box rules need the all-degrees basis");
    }
    if (rule_.domain.dim != basis.num_vars) {
        throw std::invalid_argument("ObjectiveContext: rule dimension does not match the basis");
    }

    const Eigen::Index count = rule_.nodes.rows();
    const Eigen::Index width = static_cast<Eigen::Index>(basis_.size());
    node_monomials_.resize(count, width);
    std::vector<double> filled = map_indexed(
        static_cast<std::size_t>(count),
        [this](std::size_t i) {
            const Eigen::Index row = static_cast<Eigen::Index>(i);
            node_monomials_.row(row) =
                eval_monomial_vector(basis_, rule_.nodes.row(row).transpose()).transpose();
            return 0.0;
        },
        parallel_build);
    (void)filled;

    Eigen::VectorXd h = Eigen::VectorXd::Zero(width);
    if (basis.mode == BasisMode::AllDegreesUpTo) {
        MultiIndex constant;
        constant.exponents.assign(static_cast<std::size_t>(basis.num_vars), 0);
        h[static_cast<Eigen::Index>(basis_.position_of(constant))] = 1.0;
    } else {
        // (sum_j z_j^2)^d expanded by the multinomial theorem: coefficient
        // d!/prod(b_j!) on the exponent tuple 2b, summed over |b| = d.
        const int d = basis.max_degree / 2;
        BasisSpec half{basis.num_vars, d, BasisMode::HomogeneousExactly};
        for (const MultiIndex& b : enumerate_basis(half)) {
            double coeff = 1.0;
            int used = 0;
            for (int e : b.exponents) {
                for (int j = 1; j <= e; ++j) coeff *= static_cast<double>(++used) / j;
            }
            MultiIndex doubled = b;
            for (int& e : doubled.exponents) e *= 2;
            h[static_cast<Eigen::Index>(basis_.position_of(doubled))] = coeff;
        }
    }
    unit_direction_ = PolyCoeffs{basis, h};

    // <h, L(v)> = 1 must hold at every node; on the sphere this doubles as a
    // check that the nodes actually lie on it.
    const Eigen::VectorXd pairing_at_nodes = node_monomials_ * h;
    if (((pairing_at_nodes.array() - 1.0).abs() > 1e-8).any()) {
        throw std::logic_error("ObjectiveContext: unit direction does not pair to 1 at the nodes");
    }
}

LogFValue eval_logf(const ObjectiveContext& ctx, const PolyCoeffs& p) {
    require_same_basis(ctx, p.basis, "eval_logf");
    const ShiftedTerms st = shifted_terms(ctx, p);
    return LogFValue{st.log_f, st.shift};
}

MomentSequence eval_grad(const ObjectiveContext& ctx, const PolyCoeffs& p) {
    require_same_basis(ctx, p.basis, "eval_grad");
    const ShiftedTerms st = shifted_terms(ctx, p);
    if (st.shift > kExpCap) {
        throw std::overflow_error("eval_grad: e^{p} exceeds the representable range");
    }
    Eigen::VectorXd grad = std::exp(st.shift) * (ctx.node_monomials().transpose() * st.t);
    if (!grad.allFinite()) {
        throw std::overflow_error("eval_grad: moment entries exceed the representable range");
    }
    return MomentSequence{p.basis, std::move(grad)};
}

Eigen::MatrixXd eval_hessian(const ObjectiveContext& ctx, const PolyCoeffs& p) {
    require_same_basis(ctx, p.basis, "eval_hessian");
    const ShiftedTerms st = shifted_terms(ctx, p);
    if (st.shift > kExpCap) {
        throw std::overflow_error("eval_hessian: e^{p} exceeds the representable range");
    }
    const Eigen::MatrixXd scaled =
        st.t.array().sqrt().matrix().asDiagonal() * ctx.node_monomials();
    Eigen::MatrixXd hess = std::exp(st.shift) * (scaled.transpose() * scaled);
    if (!hess.allFinite()) {
        throw std::overflow_error("eval_hessian: entries exceed the representable range");
    }
    hess = (0.5 * (hess + hess.transpose())).eval();
    return hess;
}

double dual_objective(const ObjectiveContext& ctx, const PolyCoeffs& p, const MomentSequence& y) {
    require_same_basis(ctx, p.basis, "dual_objective");
    require_same_basis(ctx, y.basis, "dual_objective");
    const LogFValue lf = eval_logf(ctx, p);
    if (lf.log_f > kExpCap) return -std::numeric_limits<double>::infinity();
    return p.coeffs.dot(y.values) - std::exp(lf.log_f);
}

MomentSequence dual_gradient(const ObjectiveContext& ctx, const PolyCoeffs& p,
                             const MomentSequence& y) {
    require_same_basis(ctx, y.basis, "dual_gradient");
    MomentSequence grad = eval_grad(ctx, p);
    grad.values = y.values - grad.values;
    return grad;
}

MomentSequence normalized_moments(const ObjectiveContext& ctx, const PolyCoeffs& p) {
    require_same_basis(ctx, p.basis, "normalized_moments");
    const ShiftedTerms st = shifted_terms(ctx, p);
    std::vector<double> terms(st.t.data(), st.t.data() + st.t.size());
    const double mass = pairwise_sum(terms);
    Eigen::VectorXd values = (ctx.node_monomials().transpose() * st.t) / mass;
    return MomentSequence{p.basis, std::move(values)};
}

}  // namespace momentcone
