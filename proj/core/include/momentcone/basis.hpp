#pragma once

#include <Eigen/Core>

#include <map>
#include <vector>

namespace momentcone {

/// Exponent tuple of a monomial, one entry per variable.
struct MultiIndex {
    std::vector<int> exponents;

    int degree() const;
    bool operator==(const MultiIndex& other) const = default;
};

enum class BasisMode {
    AllDegreesUpTo,      // every monomial of total degree <= max_degree
    HomogeneousExactly,  // forms of total degree == max_degree
};

/// Which monomial basis a coefficient or moment vector is indexed by.
struct BasisSpec {
    int num_vars = 0;
    int max_degree = 0;
    BasisMode mode = BasisMode::AllDegreesUpTo;

    bool operator==(const BasisSpec& other) const = default;
};

/// Moment vector y aligned with the canonical order of `basis`.
struct MomentSequence {
    BasisSpec basis;
    Eigen::VectorXd values;
};

/// Polynomial coefficients aligned with the canonical order of `basis`.
struct PolyCoeffs {
    BasisSpec basis;
    Eigen::VectorXd coeffs;
};

std::size_t basis_size(const BasisSpec& spec);

// Canonical order: ascending total degree, then lexicographically descending
// exponents within each degree class. Throws std::invalid_argument for
// num_vars < 1 or max_degree < 1.
std::vector<MultiIndex> enumerate_basis(const BasisSpec& spec);

/// Enumerated basis with exponent -> position lookup.
class Basis {
public:
    explicit Basis(const BasisSpec& spec);

    const BasisSpec& spec() const { return spec_; }
    std::size_t size() const { return indices_.size(); }
    const std::vector<MultiIndex>& indices() const { return indices_; }
    const MultiIndex& at(std::size_t pos) const { return indices_[pos]; }

    // Position of an exponent tuple; throws std::out_of_range if absent.
    std::size_t position_of(const MultiIndex& alpha) const;
    bool contains(const MultiIndex& alpha) const;

private:
    BasisSpec spec_;
    std::vector<MultiIndex> indices_;
    std::map<std::vector<int>, std::size_t> lookup_;
};

// Vector of monomial values (point^alpha over the basis order). This is the
// embedding of an evaluation functional as a coefficient vector.
Eigen::VectorXd eval_monomial_vector(const Basis& basis, const Eigen::VectorXd& point);

double eval_poly(const Basis& basis, const Eigen::VectorXd& coeffs, const Eigen::VectorXd& point);

/// <p, y> pairing of aligned coefficient and moment vectors.
double pairing(const PolyCoeffs& p, const MomentSequence& y);

// Degree-padding maps between the all-degrees basis over n variables and the
// homogeneous degree-2d basis over n+1 variables. The extra variable is
// placed first; the index map sends alpha to (2d - |alpha|, alpha).
MomentSequence homogenize_sequence(const MomentSequence& y);
MomentSequence dehomogenize_sequence(const MomentSequence& y_tilde);
PolyCoeffs homogenize_poly(const PolyCoeffs& p);
PolyCoeffs dehomogenize_poly(const PolyCoeffs& form);

}  // namespace momentcone
