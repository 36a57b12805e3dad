#pragma once

#include "momentcone/basis.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace momentcone {

enum class DomainKind {
    Box,           // compact product [lower, upper]
    FullSpace,     // R^n
    Orthant,       // sign-constrained R^n, e.g. x_i >= 0
    SphereSector,  // sign-constrained subset of the unit sphere S^{dim-1}
};

// Support of the reference measure. Box supports are integrated directly;
// FullSpace and Orthant are first mapped to a SphereSector via
// build_sector_from_K.
struct DomainSpec {
    DomainKind kind = DomainKind::Box;
    int dim = 0;                  // ambient dimension of points
    Eigen::VectorXd lower;        // Box only
    Eigen::VectorXd upper;        // Box only
    std::vector<int> signs;       // Orthant / SphereSector: -1, 0, +1 per coordinate

    static DomainSpec box(Eigen::VectorXd lower, Eigen::VectorXd upper);
    static DomainSpec full_space(int n);
    static DomainSpec orthant(std::vector<int> signs);
    static DomainSpec sphere_sector(std::vector<int> signs);

    int sign_constraint_count() const;
};

enum class MeasureBase {
    LebesgueOnBox,
    RotationInvariantOnSector,
};

// Reference measure: base measure times a strictly positive weight
// scale * e^{q}. `normalized` rescales total mass to 1 at rule construction.
struct MeasureSpec {
    MeasureBase base = MeasureBase::LebesgueOnBox;
    double scale = 1.0;                      // constant factor, must be > 0
    std::optional<PolyCoeffs> log_weight;    // q; absent means constant density
    bool normalized = true;
};

void validate(const DomainSpec& domain);
void validate(const MeasureSpec& measure, const DomainSpec& domain);

// Membership with closed boundaries. Sphere sectors tolerate 1e-9 deviation
// of |z|^2 from 1 and 1e-12 on sign constraints (quadrature nodes are built
// from angles and land on the sphere only up to roundoff).
bool contains(const DomainSpec& domain, const Eigen::VectorXd& point);

// Radial projection of {(1, x) : x in K} onto the unit sphere, closed.
// FullSpace{n} maps to all of S^n; Orthant{n, signs} maps to the sector with
// the homogenizing coordinate (index 0) constrained nonnegative and the
// original sign pattern on the remaining coordinates. Box inputs are
// rejected: compact supports do not take the sphere detour.
DomainSpec build_sector_from_K(const DomainSpec& K);

double box_volume(const DomainSpec& box);

// Fraction of the rotation-invariant probability measure carried by a
// sector: 2^-(number of sign constraints).
double sector_mass(const DomainSpec& sector);

}  // namespace momentcone
