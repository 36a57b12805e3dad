#pragma once

#include "momentcone/basis.hpp"
#include "momentcone/domain.hpp"
#include "momentcone/reconstruct.hpp"

#include <string>

namespace momentcone {

// One problem statement as supplied by the user: the moment sequence over
// the all-degrees basis in the original variables, the support K, and the
// reference measure. Unbounded kinds take the sphere detour inside the
// pipeline; instance files never mention the sector explicitly.
struct Instance {
    int num_vars = 0;
    int degree = 0;  // even total degree bound 2d
    DomainSpec domain;
    MeasureSpec measure;
    MomentSequence moments;
};

// Parse and validation errors carry the JSON path of the offending field,
// e.g. "moments[3].alpha: exponents must be nonnegative". All throw
// std::invalid_argument.
Instance parse_instance_text(const std::string& json_text);
Instance load_instance(const std::string& path);
std::string instance_to_text(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

// Moments listed with explicit multi-indices; must cover the basis exactly
// once. Exposed for report assembly as well.
std::string density_model_to_text(const DensityModel& model);
DensityModel parse_density_model_text(const std::string& json_text);
void save_density_model(const DensityModel& model, const std::string& path);

}  // namespace momentcone
