#include "momentcone/quadrature.hpp"

#include "momentcone/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentcone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxBoxNodes = 10'000'000;
constexpr std::size_t kMonteCarloNodes = 131'072;

// One angular coordinate of a spherical product rule.
struct AngleFactor {
    Eigen::VectorXd nodes;    // angle values
    Eigen::VectorXd weights;  // include the measure density along this angle
};

Eigen::VectorXd affine_map(const Eigen::VectorXd& ref, double lo, double hi) {
    return (0.5 * (hi - lo) * ref.array() + 0.5 * (hi + lo)).matrix();
}

// Gauss-Legendre in the angle over [lo, hi] with the density sin^k(theta)
// folded into the weights; `norm` is the full-range integral of sin^k that
// normalizes the density.
AngleFactor polar_angle_factor(int points, double lo, double hi, int sin_power, double norm) {
    auto [ref_nodes, ref_weights] = gauss_legendre(points);
    AngleFactor factor;
    factor.nodes = affine_map(ref_nodes, lo, hi);
    factor.weights.resize(points);
    const double scale = 0.5 * (hi - lo) / norm;
    for (int k = 0; k < points; ++k) {
        factor.weights[k] = scale * ref_weights[k] * std::pow(std::sin(factor.nodes[k]), sin_power);
    }
    return factor;
}

AngleFactor azimuth_full_factor(int points) {
    AngleFactor factor;
    factor.nodes.resize(points);
    factor.weights = Eigen::VectorXd::Constant(points, 1.0 / points);
    for (int k = 0; k < points; ++k) factor.nodes[k] = 2.0 * kPi * (k + 0.5) / points;
    return factor;
}

AngleFactor azimuth_arc_factor(int points, double lo, double hi) {
    auto [ref_nodes, ref_weights] = gauss_legendre(points);
    AngleFactor factor;
    factor.nodes = affine_map(ref_nodes, lo, hi);
    factor.weights = (0.5 * (hi - lo) / (2.0 * kPi)) * ref_weights;
    return factor;
}

// Gauss-Legendre in t = cos(theta) over the full range; sin(theta) dtheta
// becomes plain dt, normalized by 2. Stored as the angle for uniform node
// assembly downstream.
AngleFactor polar_cosine_factor(int points) {
    auto [t_nodes, t_weights] = gauss_legendre(points);
    AngleFactor factor;
    factor.nodes.resize(points);
    for (int k = 0; k < points; ++k) factor.nodes[k] = std::acos(t_nodes[k]);
    factor.weights = 0.5 * t_weights;
    return factor;
}

// Gauss-Chebyshev of the second kind in c = cos(theta) over the full range:
// sin^2(theta) dtheta becomes sqrt(1-c^2) dc, normalized by pi/2. Exact for
// the half-integer powers of 1-c^2 produced by sphere monomials as well.
AngleFactor polar_chebyshev_factor(int points) {
    auto [c_nodes, c_weights] = chebyshev_u(points);
    AngleFactor factor;
    factor.nodes.resize(points);
    for (int k = 0; k < points; ++k) factor.nodes[k] = std::acos(c_nodes[k]);
    factor.weights = (2.0 / kPi) * c_weights;
    return factor;
}

struct AngleRange {
    double lo;
    double hi;
    bool restricted;
};

AngleRange polar_range(int sign) {
    if (sign > 0) return {0.0, 0.5 * kPi, true};
    if (sign < 0) return {0.5 * kPi, kPi, true};
    return {0.0, kPi, false};
}

// Arc of the azimuth circle cut out by sign constraints on the final
// coordinate pair (cos phi, sin phi).
AngleRange azimuth_range(int sign_cos, int sign_sin) {
    if (sign_cos == 0 && sign_sin == 0) return {0.0, 2.0 * kPi, false};
    if (sign_cos > 0 && sign_sin == 0) return {-0.5 * kPi, 0.5 * kPi, true};
    if (sign_cos < 0 && sign_sin == 0) return {0.5 * kPi, 1.5 * kPi, true};
    if (sign_cos == 0 && sign_sin > 0) return {0.0, kPi, true};
    if (sign_cos == 0 && sign_sin < 0) return {kPi, 2.0 * kPi, true};
    if (sign_cos > 0 && sign_sin > 0) return {0.0, 0.5 * kPi, true};
    if (sign_cos < 0 && sign_sin > 0) return {0.5 * kPi, kPi, true};
    if (sign_cos < 0 && sign_sin < 0) return {kPi, 1.5 * kPi, true};
    return {1.5 * kPi, 2.0 * kPi, true};  // (+, -)
}

// Spherical coordinates with the polar angles leading and the azimuth last:
//   dim 2:  z = (cos phi, sin phi)
//   dim 3:  z = (cos t1, sin t1 cos phi, sin t1 sin phi)
//   dim 4:  z = (cos t1, sin t1 cos t2, sin t1 sin t2 cos phi, ...)
Eigen::VectorXd sphere_point(int dim, const std::vector<double>& angles) {
    Eigen::VectorXd z(dim);
    double prefix = 1.0;
    for (int i = 0; i + 2 < dim; ++i) {
        z[i] = prefix * std::cos(angles[i]);
        prefix *= std::sin(angles[i]);
    }
    const double phi = angles[dim - 2];
    z[dim - 2] = prefix * std::cos(phi);
    z[dim - 1] = prefix * std::sin(phi);
    return z;
}

QuadratureRule assemble_sector_product(const DomainSpec& sector, int order,
                                       const std::vector<AngleFactor>& factors) {
    const int dim = sector.dim;
    std::size_t count = 1;
    for (const auto& f : factors) count *= static_cast<std::size_t>(f.nodes.size());

    QuadratureRule rule;
    rule.nodes.resize(static_cast<Eigen::Index>(count), dim);
    rule.weights.resize(static_cast<Eigen::Index>(count));
    rule.exactness_degree = order;
    rule.domain = sector;

    std::vector<double> angles(factors.size());
    std::vector<int> idx(factors.size(), 0);
    for (std::size_t flat = 0; flat < count; ++flat) {
        double w = 1.0;
        for (std::size_t a = 0; a < factors.size(); ++a) {
            angles[a] = factors[a].nodes[idx[a]];
            w *= factors[a].weights[idx[a]];
        }
        rule.nodes.row(static_cast<Eigen::Index>(flat)) = sphere_point(dim, angles).transpose();
        rule.weights[static_cast<Eigen::Index>(flat)] = w;
        for (std::size_t a = factors.size(); a-- > 0;) {
            if (++idx[a] < factors[a].nodes.size()) break;
            idx[a] = 0;
        }
    }
    return rule;
}

// Uniform points on the sector: standard Gaussians normalized to the sphere,
// then sign-constrained coordinates folded to their half-space. Folding is
// measure preserving because reflections fix the rotation-invariant measure.
QuadratureRule monte_carlo_sector_rule(const DomainSpec& sector, std::uint64_t seed) {
    const int dim = sector.dim;
    std::mt19937_64 rng(seed);
    // Box-Muller on explicit 53-bit uniforms; std::normal_distribution is
    // implementation defined and would break cross-platform reproducibility.
    double spare = 0.0;
    bool has_spare = false;
    auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto gaussian = [&]() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare = r * std::sin(2.0 * kPi * u2);
        has_spare = true;
        return r * std::cos(2.0 * kPi * u2);
    };

    QuadratureRule rule;
    rule.nodes.resize(kMonteCarloNodes, dim);
    rule.domain = sector;
    rule.exactness_degree = 0;
    rule.mc_seed = seed;
    rule.mc_standard_error = 1.0 / std::sqrt(static_cast<double>(kMonteCarloNodes));

    Eigen::VectorXd z(dim);
    for (std::size_t i = 0; i < kMonteCarloNodes; ++i) {
        double norm2 = 0.0;
        do {
            for (int j = 0; j < dim; ++j) z[j] = gaussian();
            norm2 = z.squaredNorm();
        } while (norm2 < 1e-300);
        z /= std::sqrt(norm2);
        for (int j = 0; j < dim; ++j) {
            if (sector.signs[j] != 0) z[j] = sector.signs[j] * std::abs(z[j]);
        }
        rule.nodes.row(static_cast<Eigen::Index>(i)) = z.transpose();
    }
    const double mass = sector_mass(sector);
    rule.weights = Eigen::VectorXd::Constant(kMonteCarloNodes, mass / kMonteCarloNodes);
    return rule;
}

// Folds scale * e^{q} into the weights of a freshly built base rule. The
// base rule carries the normalized reference mass (1 on a box, 2^-s on a
// sector); a normalized measure keeps that mass times scale, dividing out
// the quadrature-computed mass of e^{q}, so normalization is exact only up
// to the rule's own accuracy. A non-normalized box measure reverts to raw
// Lebesgue by multiplying the volume back in; the non-normalized sector
// reference is already the sphere probability measure restricted to the
// sector. The max-shift keeps the fold overflow-safe.
void apply_weighted_measure(QuadratureRule& rule, const MeasureSpec& measure) {
    validate(measure, rule.domain);
    rule.measure = measure;
    const double raw_factor =
        (!measure.normalized && rule.domain.kind == DomainKind::Box) ? box_volume(rule.domain) : 1.0;
    if (!measure.log_weight.has_value()) {
        rule.weights *= measure.scale * raw_factor;
        return;
    }
    const double base_mass = rule.weights.sum();
    const Basis basis(measure.log_weight->basis);
    const Eigen::Index count = rule.weights.size();
    Eigen::VectorXd q(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        q[i] = eval_poly(basis, measure.log_weight->coeffs, rule.nodes.row(i).transpose());
    }
    const double shift = q.maxCoeff();
    std::vector<double> shifted(static_cast<std::size_t>(count));
    for (Eigen::Index i = 0; i < count; ++i) {
        shifted[static_cast<std::size_t>(i)] = rule.weights[i] * std::exp(q[i] - shift);
    }
    const double shifted_mass = pairwise_sum(shifted);
    if (!(shifted_mass > 0.0)) {
        throw std::overflow_error("measure weight e^{q} underflowed to zero mass");
    }
    double rescale;
    if (measure.normalized) {
        rescale = measure.scale * base_mass / shifted_mass;
    } else {
        if (shift > 700.0) throw std::overflow_error("measure weight e^{q} overflows the rule");
        rescale = measure.scale * raw_factor * std::exp(shift);
    }
    for (Eigen::Index i = 0; i < count; ++i) {
        rule.weights[i] = shifted[static_cast<std::size_t>(i)] * rescale;
        if (!(rule.weights[i] > 0.0)) {
            throw std::overflow_error("measure weight e^{q} underflowed at a node");
        }
    }
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int points) {
    if (points < 1) throw std::invalid_argument("gauss_legendre: points must be >= 1");
    Eigen::VectorXd nodes(points);
    Eigen::VectorXd weights(points);
    const int half = (points + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi-style initial guess, then Newton on the three-term recurrence.
        double x = std::cos(kPi * (i + 0.75) / (points + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= points; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = points * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[points - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[points - 1 - i] = w;
    }
    if (points % 2 == 1) nodes[half - 1] = 0.0;
    return {nodes, weights};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> chebyshev_u(int points) {
    if (points < 1) throw std::invalid_argument("chebyshev_u: points must be >= 1");
    Eigen::VectorXd nodes(points);
    Eigen::VectorXd weights(points);
    for (int k = 1; k <= points; ++k) {
        const double angle = k * kPi / (points + 1);
        const double s = std::sin(angle);
        nodes[k - 1] = std::cos(angle);
        weights[k - 1] = kPi / (points + 1) * s * s;
    }
    return {nodes, weights};
}

QuadratureRule build_box_rule(const DomainSpec& box, int points_per_axis) {
    validate(box);
    if (box.kind != DomainKind::Box) {
        throw std::invalid_argument("build_box_rule: domain is not a box");
    }
    if (points_per_axis < 2) {
        throw std::invalid_argument("build_box_rule: points_per_axis must be >= 2");
    }
    const int n = box.dim;
    std::size_t count = 1;
    for (int axis = 0; axis < n; ++axis) {
        count *= static_cast<std::size_t>(points_per_axis);
        if (count > kMaxBoxNodes) {
            throw std::invalid_argument("build_box_rule: node count exceeds 1e7");
        }
    }

    auto [ref_nodes, ref_weights] = gauss_legendre(points_per_axis);
    // Per-axis weights normalized to mass 1, so the product discretizes the
    // normalized Lebesgue measure directly.
    const Eigen::VectorXd axis_weights = 0.5 * ref_weights;

    QuadratureRule rule;
    rule.nodes.resize(static_cast<Eigen::Index>(count), n);
    rule.weights.resize(static_cast<Eigen::Index>(count));
    rule.exactness_degree = 2 * points_per_axis - 1;
    rule.domain = box;
    rule.measure = MeasureSpec{MeasureBase::LebesgueOnBox, 1.0, std::nullopt, true};

    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t flat = 0; flat < count; ++flat) {
        double w = 1.0;
        for (int axis = 0; axis < n; ++axis) {
            const int k = idx[static_cast<std::size_t>(axis)];
            rule.nodes(static_cast<Eigen::Index>(flat), axis) =
                0.5 * (box.upper[axis] - box.lower[axis]) * ref_nodes[k] +
                0.5 * (box.upper[axis] + box.lower[axis]);
            w *= axis_weights[k];
        }
        rule.weights[static_cast<Eigen::Index>(flat)] = w;
        for (int axis = n; axis-- > 0;) {
            auto& k = idx[static_cast<std::size_t>(axis)];
            if (++k < points_per_axis) break;
            k = 0;
        }
    }
    rule.weights *= 1.0 / rule.weights.sum();
    return rule;
}

QuadratureRule build_box_rule(const DomainSpec& box, const MeasureSpec& measure,
                              int points_per_axis) {
    QuadratureRule rule = build_box_rule(box, points_per_axis);
    apply_weighted_measure(rule, measure);
    return rule;
}

QuadratureRule build_sector_rule(const DomainSpec& sector, int order,
                                 std::optional<std::uint64_t> mc_seed) {
    validate(sector);
    if (sector.kind != DomainKind::SphereSector) {
        throw std::invalid_argument("build_sector_rule: domain is not a sphere sector");
    }
    if (order < 2) throw std::invalid_argument("build_sector_rule: order must be >= 2");
    const int dim = sector.dim;

    if (dim > 4) {
        if (!mc_seed.has_value()) {
            throw std::invalid_argument(
                "build_sector_rule: no deterministic rule above dimension 4; supply an explicit "
                "Monte Carlo seed");
        }
        QuadratureRule rule = monte_carlo_sector_rule(sector, *mc_seed);
        rule.measure = MeasureSpec{MeasureBase::RotationInvariantOnSector, 1.0, std::nullopt,
                                   sector.sign_constraint_count() == 0};
        return rule;
    }

    const bool full_sphere = sector.sign_constraint_count() == 0;
    // Node counts with margin: Gauss/Chebyshev factors are polynomially exact
    // at about order/2 points, restricted-range factors converge
    // superexponentially in the count.
    const int polar_points = order + 12;
    const int cosine_points = order / 2 + 4;
    const int azimuth_points = 2 * (order + 6);

    std::vector<AngleFactor> factors;
    const AngleRange az =
        azimuth_range(sector.signs[static_cast<std::size_t>(dim - 2)],
                      sector.signs[static_cast<std::size_t>(dim - 1)]);
    if (full_sphere) {
        // Polynomially exact product forms; azimuth symmetry cancels every
        // odd power of the sines, so the cosine-variable rules stay exact.
        if (dim == 4) factors.push_back(polar_chebyshev_factor(cosine_points));
        if (dim >= 3) factors.push_back(polar_cosine_factor(cosine_points));
        factors.push_back(azimuth_full_factor(azimuth_points));
    } else {
        // Angle-form Gauss everywhere: restricted azimuth arcs leave odd sine
        // powers alive, which the cosine-variable forms cannot integrate
        // exactly, while entire trig integrands keep Gauss superexponential.
        for (int i = 0; i + 2 < dim; ++i) {
            const AngleRange r = polar_range(sector.signs[static_cast<std::size_t>(i)]);
            const int sin_power = dim - 2 - i;
            const double norm = sin_power == 1 ? 2.0 : 0.5 * kPi;
            factors.push_back(polar_angle_factor(polar_points, r.lo, r.hi, sin_power, norm));
        }
        if (az.restricted) {
            factors.push_back(azimuth_arc_factor(polar_points, az.lo, az.hi));
        } else {
            factors.push_back(azimuth_full_factor(azimuth_points));
        }
    }

    QuadratureRule rule = assemble_sector_product(sector, order, factors);
    // Snap the mass to the closed form 2^-s; the constructed weights agree
    // with it to roundoff (restricted factors to superexponential accuracy).
    rule.weights *= sector_mass(sector) / rule.weights.sum();
    rule.measure = MeasureSpec{MeasureBase::RotationInvariantOnSector, 1.0, std::nullopt,
                               full_sphere};
    return rule;
}

QuadratureRule build_sector_rule(const DomainSpec& sector, const MeasureSpec& measure, int order,
                                 std::optional<std::uint64_t> mc_seed) {
    QuadratureRule rule = build_sector_rule(sector, order, mc_seed);
    apply_weighted_measure(rule, measure);
    return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(const Eigen::VectorXd&)>& f,
                 bool parallel) {
    const std::size_t count = static_cast<std::size_t>(rule.weights.size());
    std::vector<double> terms = map_indexed(
        count,
        [&](std::size_t i) {
            const Eigen::Index row = static_cast<Eigen::Index>(i);
            return rule.weights[row] * f(rule.nodes.row(row).transpose());
        },
        parallel);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(terms[i])) {
            throw std::domain_error("integrate: integrand not finite at node " + std::to_string(i));
        }
    }
    return pairwise_sum(terms);
}

int default_points_per_axis(int max_degree) { return max_degree + 10; }

int default_sector_order(int max_degree) { return 2 * max_degree + 8; }

}  // namespace momentcone
