#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "momentcone/pipeline.hpp"

#include "momentcone/basis.hpp"
#include "momentcone/domain.hpp"
#include "momentcone/instance_io.hpp"

#include "oracles.hpp"

#include <Eigen/Core>

#include <regex>
#include <string>

using namespace momentcone;

namespace {

Instance interval_instance() {
    const std::string text = R"({
      "n": 1, "degree": 4,
      "domain": {"kind": "box", "lower": [-1.0], "upper": [1.0]},
      "moments": [
        {"alpha": [0], "value": 1.0},
        {"alpha": [1], "value": 0.0},
        {"alpha": [2], "value": 0.3333333333333333},
        {"alpha": [3], "value": 0.0},
        {"alpha": [4], "value": 0.2}
      ]
    })";
    return parse_instance_text(text);
}

Instance gaussian_instance() {
    const std::string text = R"({
      "n": 1, "degree": 4,
      "domain": {"kind": "fullspace"},
      "moments": [
        {"alpha": [0], "value": 1.0},
        {"alpha": [1], "value": 0.0},
        {"alpha": [2], "value": 1.0},
        {"alpha": [3], "value": 0.0},
        {"alpha": [4], "value": 3.0}
      ]
    })";
    return parse_instance_text(text);
}

std::string strip_timestamp(const std::string& report) {
    return std::regex_replace(report, std::regex(R"("timestamp": "[^"]*")"),
                              R"("timestamp": "")");
}

}  // namespace

TEST_CASE("check on self moments certifies interior with exit code 0") {
    const PipelineResult result = run_check(interval_instance());
    CHECK(result.status == SolveStatus::Interior);
    CHECK(result.exit_code == 0);
    CHECK(result.solve.fstar.value() == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(result.report_json.find("\"status\": \"interior\"") != std::string::npos);
    CHECK(result.report_json.find("necessary_condition") != std::string::npos);
    REQUIRE(result.verification.has_value());
    CHECK(result.verification->pass);
}

TEST_CASE("check relabels unbounded supports onto the sphere") {
    const PipelineResult result = run_check(gaussian_instance());
    CHECK(result.status == SolveStatus::Interior);
    CHECK(result.report_json.find("\"homogenization\"") != std::string::npos);
    CHECK(result.report_json.find("\"applied\": true") != std::string::npos);
    CHECK(result.report_json.find("p_star_sector") != std::string::npos);
}

TEST_CASE("check flags moments outside the cone with exit code 2") {
    Instance instance = interval_instance();
    instance.degree = 2;
    const BasisSpec spec{1, 2, BasisMode::AllDegreesUpTo};
    instance.moments = MomentSequence{spec, (Eigen::VectorXd(3) << 1.0, 0.0, -1.0).finished()};
    const PipelineResult result = run_check(instance);
    CHECK(result.status == SolveStatus::Unbounded);
    CHECK(result.exit_code == 2);
    CHECK(result.report_json.find("\"witness\"") != std::string::npos);
    CHECK(result.report_json.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("reconstruct verifies on the solve rule and an independent rule") {
    const PipelineResult result = run_reconstruct(interval_instance());
    CHECK(result.exit_code == 0);
    REQUIRE(result.density.has_value());
    REQUIRE(result.verification.has_value());
    REQUIRE(result.independent_verification.has_value());
    CHECK(result.verification->pass);
    CHECK(result.independent_verification->pass);
    CHECK(result.report_json.find("independent_verification") != std::string::npos);

    // The model can be serialized and parsed back.
    const DensityModel back = parse_density_model_text(density_model_to_text(*result.density));
    CHECK(back.p_star.basis == result.density->p_star.basis);
}

TEST_CASE("reconstruct on a sector instance returns a sector model") {
    const PipelineResult result = run_reconstruct(gaussian_instance());
    CHECK(result.exit_code == 0);
    REQUIRE(result.density.has_value());
    CHECK(result.density->domain.kind == DomainKind::SphereSector);
    CHECK(result.density->p_star.basis.mode == BasisMode::HomogeneousExactly);
    CHECK(result.independent_verification->pass);
}

TEST_CASE("barrier reports value and gradient for interior input") {
    const PipelineResult result = run_barrier(interval_instance());
    CHECK(result.exit_code == 0);
    CHECK(result.report_json.find("\"barrier\": {") != std::string::npos);
    CHECK(result.report_json.find("\"fstar\"") != std::string::npos);
    CHECK(result.report_json.find("\"gradient\"") != std::string::npos);
}

TEST_CASE("barrier outside the domain carries the diverging message") {
    Instance instance = interval_instance();
    instance.degree = 2;
    const BasisSpec spec{1, 2, BasisMode::AllDegreesUpTo};
    instance.moments = MomentSequence{spec, (Eigen::VectorXd(3) << 1.0, 0.0, -1.0).finished()};
    const PipelineResult result = run_barrier(instance);
    CHECK(result.exit_code == 2);
    CHECK(result.report_json.find("outside barrier domain") != std::string::npos);
    CHECK(result.report_json.find("\"barrier\": {") == std::string::npos);
}

TEST_CASE("reports are byte-identical across runs and parallel mode") {
    PipelineConfig serial;
    PipelineConfig parallel;
    parallel.parallel = true;

    const std::string a = strip_timestamp(run_check(interval_instance(), serial).report_json);
    const std::string b = strip_timestamp(run_check(interval_instance(), serial).report_json);
    const std::string c = strip_timestamp(run_check(interval_instance(), parallel).report_json);
    CHECK(a == b);

    // the parallel report differs only in its recorded config flag
    const std::string c_normalized = std::regex_replace(
        c, std::regex(R"("parallel": true)"), R"("parallel": false)");
    CHECK(a == c_normalized);
}

TEST_CASE("trace flag embeds the solver trajectory") {
    PipelineConfig cfg;
    cfg.trace = true;
    const PipelineResult result = run_check(gaussian_instance(), cfg);
    CHECK(result.report_json.find("solver_trace") != std::string::npos);
    const PipelineResult bare = run_check(gaussian_instance());
    CHECK(bare.report_json.find("solver_trace") == std::string::npos);
}

TEST_CASE("config knobs reach the solver") {
    PipelineConfig cfg;
    cfg.max_iters = 1;
    cfg.quad_order = 18;
    Instance planted = interval_instance();
    // off-center moments so one step cannot converge
    planted.moments.values << 1.0, 0.5, 0.4, 0.3, 0.25;
    const PipelineResult result = run_check(planted, cfg);
    CHECK(result.status == SolveStatus::Inconclusive);
    CHECK(result.exit_code == 3);
    CHECK(result.report_json.find("\"quad_order\": 18") != std::string::npos);
}

TEST_CASE("moment length mismatches are rejected before solving") {
    Instance instance = interval_instance();
    instance.moments.values = Eigen::VectorXd::Ones(3);
    CHECK_THROWS_AS(run_check(instance), std::invalid_argument);
}
