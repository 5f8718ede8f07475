#pragma once

#include "latentbench/ancestralize.hpp"
#include "latentbench/graph.hpp"
#include "latentbench/hier_gen.hpp"
#include "latentbench/metrics.hpp"
#include "latentbench/sampler.hpp"
#include "latentbench/spectral_audit.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace latentbench {

inline constexpr const char* kVersion = "0.1.0";

enum class WeightSampler { uniform, wishart };

struct WeightConfig {
    WeightSampler sampler = WeightSampler::uniform;
    double low = 0.0;
    double high = 0.5;
    double neg_prob = 0.5;
    double scale_identity = 1.0;
    double flip_prob = 0.5;
};

struct EmitFlags {
    bool data = true;
    bool dag = true;
    bool ancestral_algorithm1 = true;
    bool ancestral_oracle = false;
    bool audit = true;
    bool matrices = false;
};

struct RunConfig {
    std::uint64_t seed = 0;
    HierarchyConfig hierarchy;
    WeightConfig weights;
    NoiseDist noise_dist = NoiseDist::gaussian;
    double noise_variance = 1.0;
    int samples = 1000;
    /// Empty means "not set in the file".
    std::string outputs;
    EmitFlags emit;
};

/// Flat `key = value` document with dotted keys and `#` comments:
///
///     seed = 7
///     hierarchy.macro_count = 4
///     weights.sampler = wishart
///     emit.matrices = true
///
/// Throws ParseError for malformed lines, unknown or repeated keys, and
/// ValidationError naming the field for bad values.
RunConfig parse_config(std::string_view text);

/// Canonical key/value listing of every setting except `outputs`.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg);

struct RunArtifacts {
    Dag dag;
    VertexSet hidden;
    Dataset data;
    std::optional<ProjectionResult> algorithm1;
    std::optional<ProjectionResult> oracle;
    /// "observed_implicit" when every hidden vertex is a source, else "full_dag".
    std::string audit_model;
    std::optional<AuditReport> audit;
    Matrix omega;
    Matrix sigma;
    std::optional<Matrix> lambda;
};

/// Generation, weighting, sampling, projection and audit. Module errors are
/// rethrown as StageError.
RunArtifacts run_pipeline(const RunConfig& cfg, int threads = 1);

struct RunBundle {
    std::vector<std::filesystem::path> files;
    std::filesystem::path manifest;
    std::string manifest_text;
};

/// Writes the emitted files and manifest.json (config echo, version and a
/// SHA-256 per file) into `dir`. Throws IoError with the path.
RunBundle export_bundle(const RunArtifacts& artifacts, const RunConfig& cfg, const std::filesystem::path& dir);

std::string sha256_hex(std::string_view bytes);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

std::string format_hidden(const VertexSet& hidden);
/// One index per line; blank lines ignored. Throws ParseError.
std::vector<int> parse_hidden(std::string_view text);

std::string audit_to_json(const AuditReport& report, const std::string& model);
std::string score_to_json(const ScoreCard& card);
std::string format_projection(const ProjectionResult& result);

}  // namespace latentbench
