#pragma once

#include "momentcone/instance_io.hpp"
#include "momentcone/reconstruct.hpp"
#include "momentcone/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace momentcone {

// Resolved run options shared by the check / reconstruct / barrier commands.
struct PipelineConfig {
    // Points per axis on boxes, angular order on sectors; defaults to
    // degree + 10 and 2*degree + 8 respectively.
    std::optional<int> quad_order;
    double tol = 1e-7;  // verification tolerance; the solver stops at tol/10
    int max_iters = 200;
    double divergence_norm = 1e4;
    double divergence_objective = 1e6;
    bool trace = false;     // embed the per-iteration solver trace in the report
    bool parallel = false;  // parallel node evaluation; results are identical bits
    std::optional<std::uint64_t> mc_seed;  // sector Monte Carlo fallback above dimension 4
};

struct PipelineResult {
    SolveStatus status = SolveStatus::Inconclusive;
    int exit_code = 3;  // 0 interior, 2 unbounded, 3 inconclusive; 1 = input or verification error
    std::string report_json;
    SolveReport solve;
    std::optional<DensityModel> density;  // reconstruct only
    std::optional<MomentResidualReport> verification;  // on the solve rule
    std::optional<MomentResidualReport> independent_verification;  // higher-order rule
};

// Membership check. Unbounded supports take the sphere detour automatically:
// the moment sequence is relabeled onto the homogeneous basis, the sector is
// built from K, and the report logs the relabeled sequence alongside the
// verdict. The positivity necessary condition on the original moment matrix
// is always evaluated and reported.
PipelineResult run_check(const Instance& instance, const PipelineConfig& cfg = {});

// Check plus the reconstructed density: fills `density`, verifies its
// moments on the solve rule and on an independent higher-order rule, and
// reports exit code 1 if either verification misses the tolerance.
PipelineResult run_reconstruct(const Instance& instance, const PipelineConfig& cfg = {});

// Barrier view: reports f*(y) and its gradient p*. Non-interior verdicts
// report "outside barrier domain" with the solver's exit code.
PipelineResult run_barrier(const Instance& instance, const PipelineConfig& cfg = {});

}  // namespace momentcone
