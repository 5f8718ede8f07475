#include "latentbench/cli_io.hpp"

#include "latentbench/covariance.hpp"
#include "latentbench/csv.hpp"
#include "latentbench/edge_list.hpp"
#include "latentbench/errors.hpp"
#include "latentbench/param.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace latentbench {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <class Int>
Int parse_int(const std::string& field, std::string_view v) {
    Int out{};
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ValidationError(field, "expected an integer, got '" + std::string(v) + "'");
    return out;
}

double parse_real(const std::string& field, std::string_view v) {
    try {
        return parse_double(v);
    } catch (const InvalidRange&) {
        throw ValidationError(field, "expected a number, got '" + std::string(v) + "'");
    }
}

bool parse_bool(const std::string& field, std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ValidationError(field, "expected true or false, got '" + std::string(v) + "'");
}

void check_probability(const std::string& field, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(field, "must lie in [0,1]");
}

void check_at_least(const std::string& field, long long v, long long lo) {
    if (v < lo) throw ValidationError(field, "must be >= " + std::to_string(lo));
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"seed", [](RunConfig& c, const std::string& k, std::string_view v) { c.seed = parse_int<std::uint64_t>(k, v); }},
        {"hierarchy.macro_count", [](RunConfig& c, const std::string& k, std::string_view v) { c.hierarchy.macro_count = parse_int<int>(k, v); }},
        {"hierarchy.macro_edge_prob", [](RunConfig& c, const std::string& k, std::string_view v) { c.hierarchy.macro_edge_prob = parse_real(k, v); }},
        {"hierarchy.micro_min", [](RunConfig& c, const std::string& k, std::string_view v) { c.hierarchy.micro_min = parse_int<int>(k, v); }},
        {"hierarchy.micro_max", [](RunConfig& c, const std::string& k, std::string_view v) { c.hierarchy.micro_max = parse_int<int>(k, v); }},
        {"hierarchy.micro_edge_prob", [](RunConfig& c, const std::string& k, std::string_view v) { c.hierarchy.micro_edge_prob = parse_real(k, v); }},
        {"hierarchy.inter_edges_per_macro_edge", [](RunConfig& c, const std::string& k, std::string_view v) { c.hierarchy.inter_edges_per_macro_edge = parse_int<int>(k, v); }},
        {"hierarchy.expected_confounders", [](RunConfig& c, const std::string& k, std::string_view v) { c.hierarchy.expected_confounders = parse_int<int>(k, v); }},
        {"hierarchy.hidden_policy", [](RunConfig& c, const std::string& k, std::string_view v) {
             try {
                 c.hierarchy.hidden_policy = parse_hidden_policy(v);
             } catch (const ConfigInvalid& e) {
                 throw ValidationError(k, e.what());
             }
         }},
        {"hierarchy.hidden_count", [](RunConfig& c, const std::string& k, std::string_view v) { c.hierarchy.hidden_count = parse_int<int>(k, v); }},
        {"weights.sampler", [](RunConfig& c, const std::string& k, std::string_view v) {
             if (v == "uniform") c.weights.sampler = WeightSampler::uniform;
             else if (v == "wishart") c.weights.sampler = WeightSampler::wishart;
             else throw ValidationError(k, "expected uniform or wishart");
         }},
        {"weights.low", [](RunConfig& c, const std::string& k, std::string_view v) { c.weights.low = parse_real(k, v); }},
        {"weights.high", [](RunConfig& c, const std::string& k, std::string_view v) { c.weights.high = parse_real(k, v); }},
        {"weights.neg_prob", [](RunConfig& c, const std::string& k, std::string_view v) { c.weights.neg_prob = parse_real(k, v); }},
        {"weights.scale_identity", [](RunConfig& c, const std::string& k, std::string_view v) { c.weights.scale_identity = parse_real(k, v); }},
        {"weights.flip_prob", [](RunConfig& c, const std::string& k, std::string_view v) { c.weights.flip_prob = parse_real(k, v); }},
        {"noise.dist", [](RunConfig& c, const std::string& k, std::string_view v) {
             try {
                 c.noise_dist = parse_noise_dist(v);
             } catch (const ConfigInvalid& e) {
                 throw ValidationError(k, e.what());
             }
         }},
        {"noise.variance", [](RunConfig& c, const std::string& k, std::string_view v) { c.noise_variance = parse_real(k, v); }},
        {"samples", [](RunConfig& c, const std::string& k, std::string_view v) { c.samples = parse_int<int>(k, v); }},
        {"outputs", [](RunConfig& c, const std::string&, std::string_view v) { c.outputs = std::string(v); }},
        {"emit.data", [](RunConfig& c, const std::string& k, std::string_view v) { c.emit.data = parse_bool(k, v); }},
        {"emit.dag", [](RunConfig& c, const std::string& k, std::string_view v) { c.emit.dag = parse_bool(k, v); }},
        {"emit.ancestral_algorithm1", [](RunConfig& c, const std::string& k, std::string_view v) { c.emit.ancestral_algorithm1 = parse_bool(k, v); }},
        {"emit.ancestral_oracle", [](RunConfig& c, const std::string& k, std::string_view v) { c.emit.ancestral_oracle = parse_bool(k, v); }},
        {"emit.audit", [](RunConfig& c, const std::string& k, std::string_view v) { c.emit.audit = parse_bool(k, v); }},
        {"emit.matrices", [](RunConfig& c, const std::string& k, std::string_view v) { c.emit.matrices = parse_bool(k, v); }},
    };
    return table;
}

void validate(const RunConfig& c) {
    const auto& h = c.hierarchy;
    check_at_least("hierarchy.macro_count", h.macro_count, 1);
    check_probability("hierarchy.macro_edge_prob", h.macro_edge_prob);
    check_at_least("hierarchy.micro_min", h.micro_min, 1);
    check_at_least("hierarchy.micro_max", h.micro_max, h.micro_min);
    check_probability("hierarchy.micro_edge_prob", h.micro_edge_prob);
    check_at_least("hierarchy.inter_edges_per_macro_edge", h.inter_edges_per_macro_edge, 1);
    check_at_least("hierarchy.expected_confounders", h.expected_confounders, 0);
    check_at_least("hierarchy.hidden_count", h.hidden_count, 0);
    if (h.hidden_count > h.expected_confounders)
        throw ValidationError("hierarchy.hidden_count", "exceeds hierarchy.expected_confounders");
    if (!(c.weights.low >= 0.0)) throw ValidationError("weights.low", "must be >= 0");
    if (!(c.weights.high >= c.weights.low)) throw ValidationError("weights.high", "must be >= weights.low");
    check_probability("weights.neg_prob", c.weights.neg_prob);
    if (!(c.weights.scale_identity > 0.0)) throw ValidationError("weights.scale_identity", "must be > 0");
    check_probability("weights.flip_prob", c.weights.flip_prob);
    if (!(c.noise_variance > 0.0)) throw ValidationError("noise.variance", "must be > 0");
    check_at_least("samples", c.samples, 0);
}

std::string str(bool b) { return b ? "true" : "false"; }

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e.what());
    }
}

json bound_json(const BoundCheck& b) {
    return {{"name", b.name}, {"lhs", b.lhs}, {"rhs", b.rhs}, {"satisfied", b.satisfied}};
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError(line_no, "unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ParseError(line_no, "repeated key '" + key + "'");
        if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
        it->second(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& c) {
    const auto& h = c.hierarchy;
    return {
        {"seed", std::to_string(c.seed)},
        {"hierarchy.macro_count", std::to_string(h.macro_count)},
        {"hierarchy.macro_edge_prob", format_double(h.macro_edge_prob)},
        {"hierarchy.micro_min", std::to_string(h.micro_min)},
        {"hierarchy.micro_max", std::to_string(h.micro_max)},
        {"hierarchy.micro_edge_prob", format_double(h.micro_edge_prob)},
        {"hierarchy.inter_edges_per_macro_edge", std::to_string(h.inter_edges_per_macro_edge)},
        {"hierarchy.expected_confounders", std::to_string(h.expected_confounders)},
        {"hierarchy.hidden_policy", to_string(h.hidden_policy)},
        {"hierarchy.hidden_count", std::to_string(h.hidden_count)},
        {"weights.sampler", c.weights.sampler == WeightSampler::uniform ? "uniform" : "wishart"},
        {"weights.low", format_double(c.weights.low)},
        {"weights.high", format_double(c.weights.high)},
        {"weights.neg_prob", format_double(c.weights.neg_prob)},
        {"weights.scale_identity", format_double(c.weights.scale_identity)},
        {"weights.flip_prob", format_double(c.weights.flip_prob)},
        {"noise.dist", to_string(c.noise_dist)},
        {"noise.variance", format_double(c.noise_variance)},
        {"samples", std::to_string(c.samples)},
        {"emit.data", str(c.emit.data)},
        {"emit.dag", str(c.emit.dag)},
        {"emit.ancestral_algorithm1", str(c.emit.ancestral_algorithm1)},
        {"emit.ancestral_oracle", str(c.emit.ancestral_oracle)},
        {"emit.audit", str(c.emit.audit)},
        {"emit.matrices", str(c.emit.matrices)},
    };
}

RunArtifacts run_pipeline(const RunConfig& cfg, int threads) {
    RunArtifacts out;
    Rng structure(derive_seed(cfg.seed, 1));
    Rng params(derive_seed(cfg.seed, 2));
    const std::uint64_t noise_seed = derive_seed(cfg.seed, 3);

    Dag mask = stage("generate", [&] { return generate_hierarchical_dag(cfg.hierarchy, structure); });
    mask = stage("enforce_confounders", [&] { return enforce_confounders(mask, cfg.hierarchy.expected_confounders); });
    out.hidden = stage("select_hidden", [&] {
        return select_hidden(mask, cfg.hierarchy.hidden_policy, cfg.hierarchy.hidden_count, structure);
    });
    mask = mask.with_hidden(out.hidden);

    out.dag = stage("weights", [&] {
        if (cfg.weights.sampler == WeightSampler::uniform)
            return sample_weights_uniform(mask, cfg.weights.low, cfg.weights.high, cfg.weights.neg_prob, params);
        return sample_weights_wishart(mask, mask.size(), cfg.weights.scale_identity, cfg.weights.flip_prob, params);
    });

    const int n = out.dag.size();
    const Vector variances = Vector::Constant(n, cfg.noise_variance);
    out.data = stage("sample", [&] {
        const NoiseSpec noise{cfg.noise_dist, variances};
        return hide_columns(ancestral_sample(out.dag, noise, cfg.samples, noise_seed, threads), out.hidden);
    });

    if (cfg.emit.ancestral_algorithm1)
        out.algorithm1 = stage("ancestralize", [&] { return dag_to_ancestral_algorithm1(out.dag, out.hidden); });
    if (cfg.emit.ancestral_oracle)
        out.oracle = stage("mag_oracle", [&] { return mag_oracle(out.dag, out.hidden); });

    stage("audit", [&] {
        bool roots = true;
        for (int h : members(out.hidden)) roots = roots && out.dag.parents(h).empty();
        ImplicitModel model;
        if (roots) {
            const auto split = split_hidden_roots(out.dag, out.hidden, variances);
            model = implicit_from_hidden(out.dag, out.hidden, variances);
            out.lambda = split.model.Lambda;
            out.audit_model = "observed_implicit";
        } else {
            model = {out.dag.weights(), Matrix(variances.asDiagonal())};
            out.audit_model = "full_dag";
        }
        out.omega = model.Omega;
        out.sigma = sigma_of(model);
        if (cfg.emit.audit) out.audit = audit_model(model);
        return 0;
    });
    return out;
}

RunBundle export_bundle(const RunArtifacts& a, const RunConfig& cfg, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), ec.message());

    std::vector<std::pair<std::string, std::string>> files;
    if (cfg.emit.data) files.emplace_back("data.csv", format_table_csv(a.data.names, a.data.values));
    if (cfg.emit.dag) {
        files.emplace_back("dag.edges", format_dag(a.dag));
        files.emplace_back("hidden.txt", format_hidden(a.hidden));
    }
    if (cfg.emit.ancestral_algorithm1 && a.algorithm1) files.emplace_back("ancestral.edges", format_projection(*a.algorithm1));
    if (cfg.emit.ancestral_oracle && a.oracle) files.emplace_back("ancestral_oracle.edges", format_projection(*a.oracle));
    if (cfg.emit.audit && a.audit) files.emplace_back("audit.json", audit_to_json(*a.audit, a.audit_model));
    if (cfg.emit.matrices) {
        files.emplace_back("omega.csv", format_matrix_csv(a.omega));
        files.emplace_back("sigma.csv", format_matrix_csv(a.sigma));
        if (a.lambda) files.emplace_back("lambda.csv", format_matrix_csv(*a.lambda));
    }

    RunBundle bundle;
    json manifest;
    manifest["tool"] = "latentbench";
    manifest["version"] = kVersion;
    json echo = json::object();
    for (const auto& [k, v] : config_echo(cfg)) echo[k] = v;
    manifest["config"] = echo;
    manifest["audit_model"] = a.audit_model;
    json listed = json::array();
    for (const auto& [name, bytes] : files) {
        const auto path = dir / name;
        write_file(path, bytes);
        bundle.files.push_back(path);
        listed.push_back({{"name", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }
    manifest["files"] = listed;
    bundle.manifest_text = manifest.dump(2) + "\n";
    bundle.manifest = dir / "manifest.json";
    write_file(bundle.manifest, bundle.manifest_text);
    return bundle;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path.string(), "write failed");
}

std::string format_hidden(const VertexSet& hidden) {
    std::string out;
    for (int v : members(hidden)) out += std::to_string(v) + "\n";
    return out;
}

std::vector<int> parse_hidden(std::string_view text) {
    std::vector<int> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        int v = -1;
        auto res = std::from_chars(line.data(), line.data() + line.size(), v);
        if (res.ec != std::errc() || res.ptr != line.data() + line.size() || v < 0)
            throw ParseError(line_no, "expected a vertex index");
        out.push_back(v);
    }
    return out;
}

std::string audit_to_json(const AuditReport& r, const std::string& model) {
    json j;
    j["model"] = model;
    j["delta"] = std::vector<double>(r.delta.data(), r.delta.data() + r.delta.size());
    j["rho_Omega"] = r.rho_Omega;
    j["rho_R_eps"] = r.rho_R_eps;
    j["rho_Omega_inv"] = r.rho_Omega_inv;
    j["rho_Sigma_inv"] = r.rho_Sigma_inv;
    j["rho_Rtilde"] = r.rho_Rtilde;
    j["rho_WplusWT"] = r.rho_WplusWT;
    j["d_max"] = r.d_max;
    j["max_absW"] = r.max_absW;
    j["max_diag_Omega"] = r.max_diag_Omega;
    j["dominant"] = r.dominant;
    j["bounds"] = json::array();
    for (const auto& b : r.bounds) j["bounds"].push_back(bound_json(b));
    j["informational"] = json::array();
    for (const auto& b : r.informational) j["informational"].push_back(bound_json(b));
    j["slack"] = kBoundSlack;
    return j.dump(2) + "\n";
}

std::string score_to_json(const ScoreCard& s) {
    json j;
    j["ancestral_accuracy"] = s.ancestral_accuracy;
    j["directed_precision"] = s.directed_precision;
    j["directed_recall"] = s.directed_recall;
    j["bidirected_precision"] = s.bidirected_precision;
    j["bidirected_recall"] = s.bidirected_recall;
    j["pair_count"] = s.pair_count;
    j["empty_denominator_value"] = 1.0;
    return j.dump(2) + "\n";
}

std::string format_projection(const ProjectionResult& r) {
    std::string observed;
    for (std::size_t i = 0; i < r.observed.size(); ++i) {
        if (i) observed += ' ';
        observed += std::to_string(r.observed[i]);
    }
    return format_admg(r.admg, {{"method", to_string(r.method)}, {"observed", observed}});
}

}  // namespace latentbench
