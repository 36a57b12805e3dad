#pragma once

// Internal helpers shared by instance parsing and report assembly; not
// installed. Keeps the vendored JSON header out of the public interface.

#include "momentcone/basis.hpp"
#include "momentcone/domain.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace momentcone::detail {

using ordered_json = nlohmann::ordered_json;

// Sparse {alpha, value} listing of a vector aligned with `basis`; the
// canonical enumeration order keeps output deterministic.
ordered_json indexed_values_to_json(const Basis& basis, const Eigen::VectorXd& values);

ordered_json basis_spec_to_json(const BasisSpec& spec);
ordered_json domain_to_json(const DomainSpec& domain);
ordered_json measure_to_json(const MeasureSpec& measure);

// Parsers throw std::invalid_argument with `path` prefixed to the message.
// fallback_n supplies the dimension of a "fullspace" domain when the object
// omits its own "n" (instance files keep it at the root).
BasisSpec basis_spec_from_json(const nlohmann::json& j, const std::string& path);
DomainSpec domain_from_json(const nlohmann::json& j, const std::string& path, int fallback_n = -1);

int require_int(const nlohmann::json& j, const std::string& path);
double require_double(const nlohmann::json& j, const std::string& path);
bool require_bool(const nlohmann::json& j, const std::string& path);
const nlohmann::json& require_field(const nlohmann::json& obj, const char* name,
                                    const std::string& path);

[[noreturn]] void fail(const std::string& path, const std::string& message);

}  // namespace momentcone::detail
