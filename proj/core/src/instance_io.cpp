#include "momentcone/instance_io.hpp"

#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace momentcone {

namespace detail {

void fail(const std::string& path, const std::string& message) {
    throw std::invalid_argument(path + ": " + message);
}

const nlohmann::json& require_field(const nlohmann::json& obj, const char* name,
                                    const std::string& path) {
    const auto it = obj.find(name);
    if (it == obj.end()) fail(path + "." + name, "missing required field");
    return *it;
}

int require_int(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

double require_double(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double value = j.get<double>();
    if (!std::isfinite(value)) fail(path, "expected a finite number");
    return value;
}

bool require_bool(const nlohmann::json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

ordered_json indexed_values_to_json(const Basis& basis, const Eigen::VectorXd& values) {
    ordered_json out = ordered_json::array();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        ordered_json entry;
        entry["alpha"] = basis.at(i).exponents;
        entry["value"] = values[static_cast<Eigen::Index>(i)];
        out.push_back(std::move(entry));
    }
    return out;
}

ordered_json basis_spec_to_json(const BasisSpec& spec) {
    ordered_json out;
    out["num_vars"] = spec.num_vars;
    out["degree"] = spec.max_degree;
    out["mode"] = spec.mode == BasisMode::AllDegreesUpTo ? "all_degrees" : "homogeneous";
    return out;
}

ordered_json domain_to_json(const DomainSpec& domain) {
    ordered_json out;
    switch (domain.kind) {
        case DomainKind::Box: {
            out["kind"] = "box";
            std::vector<double> lower(domain.lower.data(), domain.lower.data() + domain.dim);
            std::vector<double> upper(domain.upper.data(), domain.upper.data() + domain.dim);
            out["lower"] = lower;
            out["upper"] = upper;
            break;
        }
        case DomainKind::FullSpace:
            out["kind"] = "fullspace";
            out["n"] = domain.dim;
            break;
        case DomainKind::Orthant:
            out["kind"] = "orthant";
            out["signs"] = domain.signs;
            break;
        case DomainKind::SphereSector:
            out["kind"] = "sphere_sector";
            out["signs"] = domain.signs;
            break;
    }
    return out;
}

ordered_json measure_to_json(const MeasureSpec& measure) {
    ordered_json out;
    out["scale"] = measure.scale;
    out["normalized"] = measure.normalized;
    if (measure.log_weight) {
        const Basis basis(measure.log_weight->basis);
        ordered_json weight;
        weight["basis"] = basis_spec_to_json(measure.log_weight->basis);
        weight["coeffs"] = indexed_values_to_json(basis, measure.log_weight->coeffs);
        out["log_weight"] = std::move(weight);
    }
    return out;
}

BasisSpec basis_spec_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    BasisSpec spec;
    spec.num_vars = require_int(require_field(j, "num_vars", path), path + ".num_vars");
    spec.max_degree = require_int(require_field(j, "degree", path), path + ".degree");
    const nlohmann::json& mode = require_field(j, "mode", path);
    if (!mode.is_string()) fail(path + ".mode", "expected a string");
    const std::string mode_str = mode.get<std::string>();
    if (mode_str == "all_degrees") {
        spec.mode = BasisMode::AllDegreesUpTo;
    } else if (mode_str == "homogeneous") {
        spec.mode = BasisMode::HomogeneousExactly;
    } else {
        fail(path + ".mode", "expected \"all_degrees\" or \"homogeneous\"");
    }
    return spec;
}

DomainSpec domain_from_json(const nlohmann::json& j, const std::string& path, int fallback_n) {
    if (!j.is_object()) fail(path, "expected an object");
    const nlohmann::json& kind = require_field(j, "kind", path);
    if (!kind.is_string()) fail(path + ".kind", "expected a string");
    const std::string kind_str = kind.get<std::string>();

    const auto read_signs = [&](const char* field) {
        const nlohmann::json& signs_json = require_field(j, field, path);
        const std::string signs_path = path + "." + field;
        if (!signs_json.is_array()) fail(signs_path, "expected an array");
        std::vector<int> signs;
        for (std::size_t i = 0; i < signs_json.size(); ++i) {
            const int s =
                require_int(signs_json[i], signs_path + "[" + std::to_string(i) + "]");
            if (s < -1 || s > 1) {
                fail(signs_path + "[" + std::to_string(i) + "]", "expected -1, 0 or 1");
            }
            signs.push_back(s);
        }
        return signs;
    };

    try {
        if (kind_str == "box") {
            const nlohmann::json& lower_json = require_field(j, "lower", path);
            const nlohmann::json& upper_json = require_field(j, "upper", path);
            if (!lower_json.is_array()) fail(path + ".lower", "expected an array");
            if (!upper_json.is_array()) fail(path + ".upper", "expected an array");
            if (lower_json.size() != upper_json.size()) {
                fail(path, "lower and upper must have equal length");
            }
            Eigen::VectorXd lower(static_cast<Eigen::Index>(lower_json.size()));
            Eigen::VectorXd upper(static_cast<Eigen::Index>(upper_json.size()));
            for (std::size_t i = 0; i < lower_json.size(); ++i) {
                lower[static_cast<Eigen::Index>(i)] =
                    require_double(lower_json[i], path + ".lower[" + std::to_string(i) + "]");
                upper[static_cast<Eigen::Index>(i)] =
                    require_double(upper_json[i], path + ".upper[" + std::to_string(i) + "]");
            }
            return DomainSpec::box(std::move(lower), std::move(upper));
        }
        if (kind_str == "fullspace") {
            if (auto it = j.find("n"); it != j.end()) {
                return DomainSpec::full_space(require_int(*it, path + ".n"));
            }
            if (fallback_n < 1) fail(path + ".n", "missing required field");
            return DomainSpec::full_space(fallback_n);
        }
        if (kind_str == "orthant") return DomainSpec::orthant(read_signs("signs"));
        if (kind_str == "sphere_sector") return DomainSpec::sphere_sector(read_signs("signs"));
    } catch (const std::invalid_argument& e) {
        if (std::string(e.what()).rfind(path, 0) == 0) throw;  // already has the path
        fail(path, e.what());
    }
    fail(path + ".kind", "expected \"box\", \"fullspace\", \"orthant\" or \"sphere_sector\"");
}

}  // namespace detail

namespace {

using detail::fail;
using detail::ordered_json;
using detail::require_bool;
using detail::require_double;
using detail::require_field;
using detail::require_int;

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> known,
                         const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (const char* k : known) {
            if (key == k) {
                found = true;
                break;
            }
        }
        if (!found) fail(path + "." + key, "unknown field");
    }
}

MultiIndex parse_alpha(const nlohmann::json& j, int num_vars, int degree,
                       const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of exponents");
    if (static_cast<int>(j.size()) != num_vars) {
        fail(path, "expected " + std::to_string(num_vars) + " exponents");
    }
    MultiIndex alpha;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const int e = require_int(j[i], path + "[" + std::to_string(i) + "]");
        if (e < 0) fail(path + "[" + std::to_string(i) + "]", "exponents must be nonnegative");
        alpha.exponents.push_back(e);
    }
    if (alpha.degree() > degree) {
        fail(path, "total degree " + std::to_string(alpha.degree()) + " exceeds the bound " +
                       std::to_string(degree));
    }
    return alpha;
}

// Reads a sparse {alpha, value} list into a dense vector over `basis`.
// `complete` additionally demands that every index appear exactly once.
Eigen::VectorXd parse_indexed_values(const nlohmann::json& j, const Basis& basis, bool complete,
                                     const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of {alpha, value} entries");
    Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    std::vector<bool> seen(basis.size(), false);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string entry_path = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_object()) fail(entry_path, "expected an object");
        reject_unknown_keys(j[i], {"alpha", "value"}, entry_path);
        const MultiIndex alpha =
            parse_alpha(require_field(j[i], "alpha", entry_path), basis.spec().num_vars,
                        basis.spec().max_degree, entry_path + ".alpha");
        if (!basis.contains(alpha)) fail(entry_path + ".alpha", "not a basis index");
        const std::size_t pos = basis.position_of(alpha);
        if (seen[pos]) fail(entry_path + ".alpha", "duplicate index");
        seen[pos] = true;
        values[static_cast<Eigen::Index>(pos)] =
            require_double(require_field(j[i], "value", entry_path), entry_path + ".value");
    }
    if (complete) {
        for (std::size_t pos = 0; pos < seen.size(); ++pos) {
            if (!seen[pos]) {
                std::ostringstream msg;
                msg << "missing index [";
                const auto& exps = basis.at(pos).exponents;
                for (std::size_t v = 0; v < exps.size(); ++v) {
                    msg << (v ? "," : "") << exps[v];
                }
                msg << "]; the full basis of " << basis.size() << " entries is required";
                fail(path, msg.str());
            }
        }
    }
    return values;
}

MeasureSpec parse_measure(const nlohmann::json* j, const Instance& instance,
                          const std::string& path) {
    MeasureSpec measure;
    measure.base = instance.domain.kind == DomainKind::Box ? MeasureBase::LebesgueOnBox
                                                           : MeasureBase::RotationInvariantOnSector;
    if (j == nullptr) return measure;
    if (!j->is_object()) fail(path, "expected an object");
    reject_unknown_keys(*j, {"scale", "normalized", "log_weight"}, path);
    if (auto it = j->find("scale"); it != j->end()) {
        measure.scale = require_double(*it, path + ".scale");
        if (!(measure.scale > 0.0)) fail(path + ".scale", "must be positive");
    }
    if (auto it = j->find("normalized"); it != j->end()) {
        measure.normalized = require_bool(*it, path + ".normalized");
    }
    if (auto it = j->find("log_weight"); it != j->end()) {
        // The weight exponent is a polynomial in the original variables; on
        // unbounded supports the pipeline transports it to the sector by
        // homogenization.
        const BasisSpec weight_spec{instance.num_vars, instance.degree, BasisMode::AllDegreesUpTo};
        const Basis weight_basis(weight_spec);
        measure.log_weight = PolyCoeffs{
            weight_spec, parse_indexed_values(*it, weight_basis, false, path + ".log_weight")};
    }
    return measure;
}

}  // namespace

Instance parse_instance_text(const std::string& json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("instance: JSON parse error: ") + e.what());
    }
    const std::string path = "instance";
    if (!root.is_object()) fail(path, "expected a JSON object");
    reject_unknown_keys(root, {"n", "degree", "domain", "measure", "moments"}, path);

    Instance instance;
    instance.num_vars = require_int(require_field(root, "n", path), path + ".n");
    if (instance.num_vars < 1) fail(path + ".n", "must be >= 1");
    instance.degree = require_int(require_field(root, "degree", path), path + ".degree");
    if (instance.degree < 2) fail(path + ".degree", "must be >= 2");
    if (instance.degree % 2 != 0) fail(path + ".degree", "must be even");

    instance.domain = detail::domain_from_json(require_field(root, "domain", path),
                                               path + ".domain", instance.num_vars);
    if (instance.domain.kind == DomainKind::SphereSector) {
        fail(path + ".domain.kind", "instances describe the support K, not the sector");
    }
    if (instance.domain.dim != instance.num_vars) {
        fail(path + ".domain", "dimension does not match n");
    }

    const auto measure_it = root.find("measure");
    instance.measure = parse_measure(measure_it == root.end() ? nullptr : &*measure_it, instance,
                                     path + ".measure");

    const BasisSpec moment_spec{instance.num_vars, instance.degree, BasisMode::AllDegreesUpTo};
    const Basis moment_basis(moment_spec);
    instance.moments = MomentSequence{
        moment_spec, parse_indexed_values(require_field(root, "moments", path), moment_basis, true,
                                          path + ".moments")};
    return instance;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open instance file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance_text(buffer.str());
}

std::string instance_to_text(const Instance& instance) {
    ordered_json root;
    root["n"] = instance.num_vars;
    root["degree"] = instance.degree;
    root["domain"] = detail::domain_to_json(instance.domain);
    ordered_json measure = detail::measure_to_json(instance.measure);
    if (instance.measure.log_weight) {
        // Instance files carry the weight in the implicit all-degrees basis.
        const Basis weight_basis(instance.measure.log_weight->basis);
        measure["log_weight"] =
            detail::indexed_values_to_json(weight_basis, instance.measure.log_weight->coeffs);
    }
    root["measure"] = std::move(measure);
    const Basis moment_basis(instance.moments.basis);
    root["moments"] = detail::indexed_values_to_json(moment_basis, instance.moments.values);
    return root.dump(2) + "\n";
}

void save_instance(const Instance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << instance_to_text(instance);
}

std::string density_model_to_text(const DensityModel& model) {
    ordered_json root;
    root["basis"] = detail::basis_spec_to_json(model.p_star.basis);
    const Basis basis(model.p_star.basis);
    root["p_star"] = detail::indexed_values_to_json(basis, model.p_star.coeffs);
    root["domain"] = detail::domain_to_json(model.domain);
    root["measure"] = detail::measure_to_json(model.measure);
    root["log_weight_mass"] = model.log_weight_mass;
    return root.dump(2) + "\n";
}

DensityModel parse_density_model_text(const std::string& json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("density_model: JSON parse error: ") + e.what());
    }
    const std::string path = "density_model";
    if (!root.is_object()) fail(path, "expected a JSON object");
    reject_unknown_keys(root, {"basis", "p_star", "domain", "measure", "log_weight_mass"}, path);

    DensityModel model;
    const BasisSpec spec =
        detail::basis_spec_from_json(require_field(root, "basis", path), path + ".basis");
    const Basis basis(spec);
    model.p_star = PolyCoeffs{
        spec, parse_indexed_values(require_field(root, "p_star", path), basis, false,
                                   path + ".p_star")};
    model.domain = detail::domain_from_json(require_field(root, "domain", path), path + ".domain");

    const nlohmann::json& measure_json = require_field(root, "measure", path);
    if (!measure_json.is_object()) fail(path + ".measure", "expected an object");
    reject_unknown_keys(measure_json, {"scale", "normalized", "log_weight"}, path + ".measure");
    model.measure.base = model.domain.kind == DomainKind::SphereSector
                             ? MeasureBase::RotationInvariantOnSector
                             : MeasureBase::LebesgueOnBox;
    if (auto it = measure_json.find("scale"); it != measure_json.end()) {
        model.measure.scale = require_double(*it, path + ".measure.scale");
    }
    if (auto it = measure_json.find("normalized"); it != measure_json.end()) {
        model.measure.normalized = require_bool(*it, path + ".measure.normalized");
    }
    if (auto it = measure_json.find("log_weight"); it != measure_json.end()) {
        const std::string weight_path = path + ".measure.log_weight";
        if (!it->is_object()) fail(weight_path, "expected an object");
        const BasisSpec weight_spec = detail::basis_spec_from_json(
            require_field(*it, "basis", weight_path), weight_path + ".basis");
        const Basis weight_basis(weight_spec);
        model.measure.log_weight = PolyCoeffs{
            weight_spec, parse_indexed_values(require_field(*it, "coeffs", weight_path),
                                              weight_basis, false, weight_path + ".coeffs")};
    }
    if (auto it = root.find("log_weight_mass"); it != root.end()) {
        model.log_weight_mass = require_double(*it, path + ".log_weight_mass");
    }
    validate(model.measure, model.domain);
    return model;
}

void save_density_model(const DensityModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << density_model_to_text(model);
}

}  // namespace momentcone
