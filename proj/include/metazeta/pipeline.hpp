#pragma once

// End-to-end run: ladder table, certificates, grafts, meta-equations in both
// forms, crossbreeding relations, the L -> 4L trend and the headline report,
// all recorded in a manifest whose artifacts carry content hashes.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "metazeta/crossbreed.hpp"
#include "metazeta/meta.hpp"

namespace metazeta {

struct PipelineConfig {
    EvalConfig eval;

    double t_lo = 4000.0;
    double t_hi = 8400.0;
    double resolution = 0.05;
    std::optional<double> anchor_phi;
    std::string ladder_cache;

    long L = 1592;
    std::vector<std::string> u_set{"0.1", "0.2"};
    int k_max = 2;
    double quadrature_rel_tol = 1e-9;

    double sigma1 = DefaultStrips::sigma1;
    double sigma2 = DefaultStrips::sigma2;
    double delta = DefaultStrips::delta;
    GraftSearchOptions graft;

    MetaTolerances meta;

    bool trend = false;
    int trend_factor = 4;
    int trend_k = 1;
    int trend_samples = 100;
    double trend_t_lo = 19500.0;
    double trend_t_hi = 27000.0;

    bool crossbreed = true;
    // depths of the sin^4, cos^4, sin^6, cos^6 equations in the elimination
    std::array<int, 4> depths{2, 2, 2, 2};

    std::string output_dir = "out";

    // Throws ConfigError; runs before any computation.
    void validate() const;
};

// INI file with sections [zeta], [ladder], [factorization], [grafting],
// [meta], [trend], [crossbreed], [output]. Unknown keys are rejected.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& ini_text);
std::string render_config(const PipelineConfig& cfg);

void to_json(nlohmann::json& j, const PipelineConfig& cfg);

std::string content_hash(const nlohmann::json& j);

struct MetaRecord {
    MetaEquationInstance instance;
    MetaReport exact;
    MetaReport asymptotic;
    std::size_t n = 1;
};

struct CrossbreedRecord {
    std::size_t n = 1;
    double U = 0.0;
    LinearRelation elimination;
    RationalRelation substituted;
    double elimination_value = 0.0;
    double elimination_tolerance = 0.0;
    std::map<int, double> identity_values;  // by depth, relative to D(k)
    double substituted_value = 0.0;
    double substituted_tolerance = 0.0;
    // 2{A5 + A6} + 1 and 3{A3 + A4}, A_l the Z^2-ratio left side of equation l
    double asymptotic_left = 0.0;
    double asymptotic_right = 0.0;
    double asymptotic_tolerance = 0.0;
    // 2{A6 + A7} + 1, the left side read with w_6, w_7 in place of w_5, w_6
    double shifted_left = 0.0;
    bool passed = false;
};

struct TrendRecord {
    long L = 0;
    long far_L = 0;
    int k = 1;
    double near_median = 0.0;
    double far_median = 0.0;
    double near_scale = 0.0;  // 2k / ln(pi L)
    double far_scale = 0.0;
    bool far_instance_passed = false;
    bool passed = false;
};

struct RunManifest {
    PipelineConfig config;
    std::string ladder_checksum;
    std::size_t ladder_rows = 0;
    std::vector<FactorizationCertificate> certificates;
    std::vector<bool> certificate_passed;
    std::vector<Graft> grafts;
    std::vector<MetaRecord> meta;
    std::vector<CrossbreedRecord> crossbreeding;
    std::optional<TrendRecord> trend;
    std::map<std::string, bool> checks;
    std::string failure;

    bool passed() const;
    nlohmann::json to_json() const;
};

// Stage failures are recorded in `failure` with the manifest kept so far.
// Configuration problems throw ConfigError before any computation.
RunManifest run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

// Writes manifest.json, report.md and headline.json into cfg.output_dir.
void write_outputs(const RunManifest& manifest);

// Caveats printed in every report.
const std::vector<std::string>& report_caveats();

nlohmann::json headline_json(const nlohmann::json& manifest);
std::string headline_markdown(const nlohmann::json& manifest);

}  // namespace metazeta
