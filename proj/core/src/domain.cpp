#include "momentcone/domain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace momentcone {

namespace {
constexpr double kSphereNormTol = 1e-9;
constexpr double kSignTol = 1e-12;
}  // namespace

DomainSpec DomainSpec::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
    DomainSpec d;
    d.kind = DomainKind::Box;
    d.dim = static_cast<int>(lower.size());
    d.lower = std::move(lower);
    d.upper = std::move(upper);
    validate(d);
    return d;
}

DomainSpec DomainSpec::full_space(int n) {
    DomainSpec d;
    d.kind = DomainKind::FullSpace;
    d.dim = n;
    validate(d);
    return d;
}

DomainSpec DomainSpec::orthant(std::vector<int> signs) {
    DomainSpec d;
    d.kind = DomainKind::Orthant;
    d.dim = static_cast<int>(signs.size());
    d.signs = std::move(signs);
    validate(d);
    return d;
}

DomainSpec DomainSpec::sphere_sector(std::vector<int> signs) {
    DomainSpec d;
    d.kind = DomainKind::SphereSector;
    d.dim = static_cast<int>(signs.size());
    d.signs = std::move(signs);
    validate(d);
    return d;
}

int DomainSpec::sign_constraint_count() const {
    int count = 0;
    for (int s : signs) {
        if (s != 0) ++count;
    }
    return count;
}

void validate(const DomainSpec& domain) {
    if (domain.dim < 1) {
        throw std::invalid_argument("DomainSpec: dimension must be >= 1");
    }
    switch (domain.kind) {
        case DomainKind::Box:
            if (domain.lower.size() != domain.dim || domain.upper.size() != domain.dim) {
                throw std::invalid_argument("DomainSpec: box bound dimensions mismatch");
            }
            for (int i = 0; i < domain.dim; ++i) {
                if (!(domain.lower[i] < domain.upper[i])) {
                    throw std::invalid_argument(
                        "DomainSpec: box requires lower < upper componentwise");
                }
                if (!std::isfinite(domain.lower[i]) || !std::isfinite(domain.upper[i])) {
                    throw std::invalid_argument("DomainSpec: box bounds must be finite");
                }
            }
            break;
        case DomainKind::FullSpace:
            break;
        case DomainKind::Orthant:
        case DomainKind::SphereSector:
            if (static_cast<int>(domain.signs.size()) != domain.dim) {
                throw std::invalid_argument("DomainSpec: sign pattern length mismatch");
            }
            for (int s : domain.signs) {
                if (s < -1 || s > 1) {
                    throw std::invalid_argument("DomainSpec: signs must be -1, 0 or +1");
                }
            }
            if (domain.kind == DomainKind::SphereSector && domain.dim < 2) {
                throw std::invalid_argument("DomainSpec: sphere sector needs dim >= 2");
            }
            break;
    }
}

void validate(const MeasureSpec& measure, const DomainSpec& domain) {
    if (!(measure.scale > 0.0) || !std::isfinite(measure.scale)) {
        throw std::invalid_argument("MeasureSpec: scale must be positive and finite");
    }
    const bool on_sector = domain.kind == DomainKind::SphereSector;
    if (on_sector && measure.base != MeasureBase::RotationInvariantOnSector) {
        throw std::invalid_argument("MeasureSpec: sector domains use the rotation-invariant base");
    }
    if (!on_sector && measure.base != MeasureBase::LebesgueOnBox) {
        throw std::invalid_argument("MeasureSpec: box domains use the Lebesgue base");
    }
    if (measure.log_weight) {
        if (measure.log_weight->basis.num_vars != domain.dim) {
            throw std::invalid_argument("MeasureSpec: weight polynomial dimension mismatch");
        }
        if (static_cast<std::size_t>(measure.log_weight->coeffs.size()) !=
            basis_size(measure.log_weight->basis)) {
            throw std::invalid_argument(
                "MeasureSpec: weight coefficient count does not match its basis");
        }
        if (!measure.log_weight->coeffs.allFinite()) {
            throw std::invalid_argument("MeasureSpec: weight coefficients must be finite");
        }
    }
}

bool contains(const DomainSpec& domain, const Eigen::VectorXd& point) {
    if (point.size() != domain.dim) {
        throw std::invalid_argument("contains: point dimension mismatch");
    }
    switch (domain.kind) {
        case DomainKind::Box:
            for (int i = 0; i < domain.dim; ++i) {
                if (point[i] < domain.lower[i] || point[i] > domain.upper[i]) return false;
            }
            return true;
        case DomainKind::FullSpace:
            return true;
        case DomainKind::Orthant:
            for (int i = 0; i < domain.dim; ++i) {
                if (domain.signs[static_cast<std::size_t>(i)] * point[i] < 0.0) return false;
            }
            return true;
        case DomainKind::SphereSector: {
            if (std::abs(point.squaredNorm() - 1.0) > kSphereNormTol) return false;
            for (int i = 0; i < domain.dim; ++i) {
                const int s = domain.signs[static_cast<std::size_t>(i)];
                if (s != 0 && s * point[i] < -kSignTol) return false;
            }
            return true;
        }
    }
    return false;
}

DomainSpec build_sector_from_K(const DomainSpec& K) {
    if (K.kind == DomainKind::Box) {
        throw std::invalid_argument(
            "build_sector_from_K: compact box supports are integrated directly");
    }
    if (K.kind == DomainKind::SphereSector) {
        throw std::invalid_argument("build_sector_from_K: input is already a sector");
    }
    std::vector<int> signs(static_cast<std::size_t>(K.dim) + 1, 0);
    if (K.kind == DomainKind::Orthant) {
        // Half-sphere patch z0 >= 0; antipodal images carry the same even-degree
        // functionals, so one patch represents the full radial projection.
        signs[0] = 1;
        for (int i = 0; i < K.dim; ++i) {
            signs[static_cast<std::size_t>(i) + 1] = K.signs[static_cast<std::size_t>(i)];
        }
    }
    return DomainSpec::sphere_sector(std::move(signs));
}

double box_volume(const DomainSpec& box) {
    if (box.kind != DomainKind::Box) {
        throw std::invalid_argument("box_volume: domain is not a box");
    }
    double volume = 1.0;
    for (int i = 0; i < box.dim; ++i) {
        volume *= box.upper[i] - box.lower[i];
    }
    return volume;
}

double sector_mass(const DomainSpec& sector) {
    if (sector.kind != DomainKind::SphereSector) {
        throw std::invalid_argument("sector_mass: domain is not a sphere sector");
    }
    return std::ldexp(1.0, -sector.sign_constraint_count());
}

}  // namespace momentcone
