#include "latentbench/ancestralize.hpp"
#include "latentbench/cli_io.hpp"
#include "latentbench/csv.hpp"
#include "latentbench/edge_list.hpp"
#include "latentbench/errors.hpp"
#include "latentbench/linalg.hpp"
#include "latentbench/metrics.hpp"
#include "latentbench/spectral_audit.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace latentbench;

namespace {

fs::path resolve_out(const std::string& flag, const std::string& from_config) {
    if (!flag.empty()) return flag;
    if (!from_config.empty()) return from_config;
    if (const char* env = std::getenv("LATENTBENCH_OUT"); env && *env) return env;
    return "latentbench_out";
}

VertexSet hidden_from_file(const fs::path& path, int n) {
    VertexSet hidden(n);
    for (int v : parse_hidden(read_file(path))) {
        if (v >= n) throw InvariantViolation("hidden index " + std::to_string(v) + " outside the DAG");
        hidden.set(v);
    }
    return hidden;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic causal benchmarks with hidden confounders"};
    app.require_subcommand(1);
    std::string out;
    int threads = 1;

    auto* gen = app.add_subcommand("generate", "Run the pipeline from a config file");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    gen->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    gen->add_option("--seed", seed, "Override the config seed");
    gen->add_option("--threads", threads, "Sampling threads")->check(CLI::PositiveNumber);
    gen->add_option("--out", out, "Output directory (default: config outputs, then $LATENTBENCH_OUT)");

    auto* anc = app.add_subcommand("ancestralize", "Project dag.edges onto its observed vertices");
    std::string dag_path, hidden_path, method = "algorithm1";
    anc->add_option("dag", dag_path, "dag.edges")->required()->check(CLI::ExistingFile);
    anc->add_option("--hidden", hidden_path, "hidden.txt (default: the file's # hidden: line)")
        ->check(CLI::ExistingFile);
    anc->add_option("--method", method, "algorithm1 or mag_oracle")
        ->check(CLI::IsMember({"algorithm1", "mag_oracle"}));
    anc->add_option("--out", out, "Output directory");

    auto* aud = app.add_subcommand("audit", "Spectral audit of omega.csv against dag.edges");
    std::string omega_path, audit_dag;
    aud->add_option("omega", omega_path, "omega.csv")->required()->check(CLI::ExistingFile);
    aud->add_option("dag", audit_dag, "dag.edges")->required()->check(CLI::ExistingFile);
    aud->add_option("--out", out, "Output directory");

    auto* sc = app.add_subcommand("score", "Score a predicted ADMG against the truth");
    std::string truth_path, pred_path;
    sc->add_option("truth", truth_path, "truth.edges")->required()->check(CLI::ExistingFile);
    sc->add_option("pred", pred_path, "pred.edges")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            RunConfig cfg = parse_config(read_file(config_path));
            if (seed) cfg.seed = *seed;
            const auto dir = resolve_out(out, cfg.outputs);
            const auto bundle = export_bundle(run_pipeline(cfg, threads), cfg, dir);
            for (const auto& f : bundle.files) std::cout << f.string() << "\n";
            std::cout << bundle.manifest.string() << "\n";
        } else if (*anc) {
            const auto parsed = parse_edge_list(read_file(dag_path));
            const Dag dag = parsed.to_dag();
            const VertexSet hidden = hidden_path.empty() ? dag.hidden_set() : hidden_from_file(hidden_path, dag.size());
            const auto result = method == "algorithm1" ? dag_to_ancestral_algorithm1(dag, hidden) : mag_oracle(dag, hidden);
            const auto dir = resolve_out(out, "");
            fs::create_directories(dir);
            const auto path = dir / "ancestral.edges";
            write_file(path, format_projection(result));
            std::cout << path.string() << "\n";
        } else if (*aud) {
            const Dag dag = parse_edge_list(read_file(audit_dag)).to_dag();
            const Matrix omega = parse_matrix_csv(read_file(omega_path));
            ImplicitModel model;
            std::string kind = "full_dag";
            if (omega.rows() == dag.size()) {
                model = {dag.weights(), omega};
            } else {
                const auto observed = members(~dag.hidden_set());
                if (static_cast<int>(observed.size()) != omega.rows())
                    throw VertexMismatch("omega.csv matches neither the full nor the observed vertex count");
                model = {submatrix(dag.weights(), observed, observed), omega};
                kind = "observed_implicit";
            }
            const auto dir = resolve_out(out, "");
            fs::create_directories(dir);
            const auto path = dir / "audit.json";
            write_file(path, audit_to_json(audit_model(model), kind));
            std::cout << path.string() << "\n";
        } else if (*sc) {
            const Admg truth = parse_edge_list(read_file(truth_path)).to_admg();
            const Admg pred = parse_edge_list(read_file(pred_path)).to_admg();
            const auto dir = resolve_out(out, "");
            fs::create_directories(dir);
            const auto path = dir / "score.json";
            write_file(path, score_to_json(score(truth, pred)));
            std::cout << path.string() << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "latentbench: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "latentbench: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
