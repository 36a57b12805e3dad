#include "momentcone/basis.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace momentcone {
namespace {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

void check_spec(const BasisSpec& spec) {
    if (spec.num_vars < 1) {
        throw std::invalid_argument("BasisSpec: num_vars must be >= 1, got " +
                                    std::to_string(spec.num_vars));
    }
    if (spec.max_degree < 1) {
        throw std::invalid_argument("BasisSpec: max_degree must be >= 1, got " +
                                    std::to_string(spec.max_degree));
    }
}

// Exponent tuples of total degree exactly `deg`, lexicographically descending.
void emit_degree(int num_vars, int deg, std::vector<int>& prefix,
                 std::vector<MultiIndex>& out) {
    if (num_vars == 1) {
        prefix.push_back(deg);
        out.push_back(MultiIndex{prefix});
        prefix.pop_back();
        return;
    }
    for (int e = deg; e >= 0; --e) {
        prefix.push_back(e);
        emit_degree(num_vars - 1, deg - e, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

int MultiIndex::degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

std::size_t basis_size(const BasisSpec& spec) {
    check_spec(spec);
    if (spec.mode == BasisMode::AllDegreesUpTo) {
        return static_cast<std::size_t>(binomial(spec.num_vars + spec.max_degree, spec.num_vars));
    }
    return static_cast<std::size_t>(
        binomial(spec.num_vars - 1 + spec.max_degree, spec.num_vars - 1));
}

std::vector<MultiIndex> enumerate_basis(const BasisSpec& spec) {
    check_spec(spec);
    std::vector<MultiIndex> out;
    out.reserve(basis_size(spec));
    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(spec.num_vars));
    const int first_degree = spec.mode == BasisMode::AllDegreesUpTo ? 0 : spec.max_degree;
    for (int deg = first_degree; deg <= spec.max_degree; ++deg) {
        emit_degree(spec.num_vars, deg, prefix, out);
    }
    return out;
}

Basis::Basis(const BasisSpec& spec) : spec_(spec), indices_(enumerate_basis(spec)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        lookup_.emplace(indices_[i].exponents, i);
    }
}

std::size_t Basis::position_of(const MultiIndex& alpha) const {
    auto it = lookup_.find(alpha.exponents);
    if (it == lookup_.end()) {
        throw std::out_of_range("Basis: multi-index not in basis");
    }
    return it->second;
}

bool Basis::contains(const MultiIndex& alpha) const {
    return lookup_.find(alpha.exponents) != lookup_.end();
}

Eigen::VectorXd eval_monomial_vector(const Basis& basis, const Eigen::VectorXd& point) {
    const int n = basis.spec().num_vars;
    if (point.size() != n) {
        throw std::invalid_argument("eval_monomial_vector: point dimension mismatch");
    }
    // Per-variable power tables keep entries multiplicative across indices.
    const int max_deg = basis.spec().max_degree;
    Eigen::MatrixXd powers(n, max_deg + 1);
    for (int v = 0; v < n; ++v) {
        powers(v, 0) = 1.0;
        for (int k = 1; k <= max_deg; ++k) {
            powers(v, k) = powers(v, k - 1) * point[v];
        }
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        double value = 1.0;
        const auto& exps = basis.at(i).exponents;
        for (int v = 0; v < n; ++v) {
            value *= powers(v, exps[static_cast<std::size_t>(v)]);
        }
        out[static_cast<Eigen::Index>(i)] = value;
    }
    return out;
}

double eval_poly(const Basis& basis, const Eigen::VectorXd& coeffs, const Eigen::VectorXd& point) {
    if (coeffs.size() != static_cast<Eigen::Index>(basis.size())) {
        throw std::invalid_argument("eval_poly: coefficient length mismatch");
    }
    return coeffs.dot(eval_monomial_vector(basis, point));
}

double pairing(const PolyCoeffs& p, const MomentSequence& y) {
    if (!(p.basis == y.basis)) {
        throw std::invalid_argument("pairing: basis mismatch");
    }
    return p.coeffs.dot(y.values);
}

namespace {

// Shared relabeling alpha <-> (2d - |alpha|, alpha) behind all four maps.
Eigen::VectorXd homogenize_values(const BasisSpec& from, const Eigen::VectorXd& values,
                                  BasisSpec& to_out) {
    if (from.mode != BasisMode::AllDegreesUpTo) {
        throw std::invalid_argument("homogenize: input must be in all-degrees mode");
    }
    const Basis source(from);
    if (values.size() != static_cast<Eigen::Index>(source.size())) {
        throw std::invalid_argument("homogenize: value length does not match basis size");
    }
    BasisSpec to{from.num_vars + 1, from.max_degree, BasisMode::HomogeneousExactly};
    const Basis target(to);
    Eigen::VectorXd out(static_cast<Eigen::Index>(target.size()));
    for (std::size_t i = 0; i < target.size(); ++i) {
        const auto& exps = target.at(i).exponents;
        MultiIndex alpha{std::vector<int>(exps.begin() + 1, exps.end())};
        out[static_cast<Eigen::Index>(i)] =
            values[static_cast<Eigen::Index>(source.position_of(alpha))];
    }
    to_out = to;
    return out;
}

Eigen::VectorXd dehomogenize_values(const BasisSpec& from, const Eigen::VectorXd& values,
                                    BasisSpec& to_out) {
    if (from.mode != BasisMode::HomogeneousExactly) {
        throw std::invalid_argument("dehomogenize: input must be in homogeneous mode");
    }
    if (from.num_vars < 2) {
        throw std::invalid_argument("dehomogenize: need at least two variables");
    }
    const Basis source(from);
    BasisSpec to{from.num_vars - 1, from.max_degree, BasisMode::AllDegreesUpTo};
    const Basis target(to);
    Eigen::VectorXd out(static_cast<Eigen::Index>(target.size()));
    for (std::size_t i = 0; i < target.size(); ++i) {
        const auto& alpha = target.at(i).exponents;
        std::vector<int> padded;
        padded.reserve(alpha.size() + 1);
        padded.push_back(from.max_degree - target.at(i).degree());
        padded.insert(padded.end(), alpha.begin(), alpha.end());
        out[static_cast<Eigen::Index>(i)] =
            values[static_cast<Eigen::Index>(source.position_of(MultiIndex{padded}))];
    }
    to_out = to;
    return out;
}

}  // namespace

MomentSequence homogenize_sequence(const MomentSequence& y) {
    MomentSequence out;
    out.values = homogenize_values(y.basis, y.values, out.basis);
    return out;
}

MomentSequence dehomogenize_sequence(const MomentSequence& y_tilde) {
    MomentSequence out;
    out.values = dehomogenize_values(y_tilde.basis, y_tilde.values, out.basis);
    return out;
}

PolyCoeffs homogenize_poly(const PolyCoeffs& p) {
    PolyCoeffs out;
    out.coeffs = homogenize_values(p.basis, p.coeffs, out.basis);
    return out;
}

PolyCoeffs dehomogenize_poly(const PolyCoeffs& form) {
    PolyCoeffs out;
    out.coeffs = dehomogenize_values(form.basis, form.coeffs, out.basis);
    return out;
}

}  // namespace momentcone
