#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncvortex/fock.hpp"
#include "ncvortex/perturbation.hpp"
#include "ncvortex/taubes.hpp"

namespace ncvortex {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct RunConfig {
    int winding = 1;
    int grid_n = 512;
    double half_extent = 16.0;
    int radial_nodes = 4096;
    double theta = 0.1;
    int order = 1;
    double mask_radius = 1.0;
    std::map<std::string, double> tolerances{{"taubes", 1e-10}, {"linear", 1e-10}};
    std::string output_dir = "run";
    std::uint64_t seed = 1;
    bool fock_enabled = true;
    int fock_dim = 128;
    int fock_margin = 16;
    double fock_theta = 1.0;
};

// Flat dotted keys, one `key = value` per line, `#` comments. Errors are
// ConfigError with the offending key path in the message.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& cfg);
// Canonical `key = value` listing, sorted by key. output.dir is left out so
// the hash identifies the computation, not where it was written.
std::string canonical_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

struct StageRecord {
    std::string name;
    double wall_seconds = 0.0;
    bool pass = false;
    std::string diagnostic;
};

struct RunManifest {
    std::string config_hash;
    std::string artifact_version = kArtifactVersion;
    std::vector<StageRecord> stages;
    std::vector<std::string> files; // relative to the output directory
    bool complete = false;
};

nlohmann::json to_json(const RunManifest& m);

// Runs taubes -> moyal -> perturbation, then fock. Stops at the first failed
// stage; the manifest on disk always reflects the stages run so far.
RunManifest run_pipeline(const RunConfig& cfg);

struct TaubesSummary {
    int N = 0;
    int grid_n = 0;
    double half_extent = 0.0;
    int iterations = 0;
    double newton_residual = 0.0;
    double n0 = 0.0;
    double residual_1 = 0.0;
    double residual_2 = 0.0;
    DecayReport decay;
    bool pass = false;
};
TaubesSummary summarize_taubes(const VortexProfile& p, const VortexBackground& bg);
nlohmann::json to_json(const TaubesSummary& s);
std::string to_csv(const TaubesSummary& s);

struct ActionSummary {
    int N = 0;
    double action = 0.0;
    double action_topological = 0.0;
    double b0_gap = 0.0; // B0 from the star machinery vs 1 - |phi0|^2
    bool pass = false;
};
ActionSummary summarize_action(const VortexProfile& p, const VortexBackground& bg);
nlohmann::json to_json(const ActionSummary& s);

nlohmann::json to_json(const PreservationReport& r, double theta, int winding);
std::string to_csv(const PreservationReport& r);

struct FockSummary {
    int dim = 0;
    int margin = 0;
    double theta = 0.0;
    double bps_residual_1 = 0.0;
    double bps_residual_2 = 0.0;
    double charge = 0.0;
    int unitarity_defect_rank = 0;
    bool varphi_bound_pass = false;
    bool pass = false;
};
FockSummary summarize_fock(int dim, double theta, int margin);
nlohmann::json to_json(const FockSummary& s);
std::string to_csv(const FockSummary& s);

struct CompareVerdict {
    bool pass = true;
    std::vector<std::string> violations; // "path: candidate vs baseline"
};

// Relative comparison |c - b| <= tol |b| per numeric leaf. Tolerances are
// looked up by leaf path, then by top-level key, then "default" (1e-12).
// Array entries are addressed 1-based, e.g. "flux[1]".
CompareVerdict compare_baseline(const std::filesystem::path& report, const std::filesystem::path& baseline,
                                const std::map<std::string, double>& tolerances);
CompareVerdict compare_json(const nlohmann::json& candidate, const nlohmann::json& baseline,
                            const std::map<std::string, double>& tolerances);

// Writes `text` to `path` through a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

} // namespace ncvortex
