#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quickim/parallel.hpp"
#include "quickim/quickim.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitIo = 5;

constexpr char kScoreMagic[8] = {'Q', 'I', 'M', 'S', 'C', 'O', 'R', 'E'};
constexpr std::uint32_t kScoreVersion = 1;

/// Writes to `path` through a temporary sibling and a rename, or to stdout when `path` is empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write, bool binary = false) {
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        if (!std::cout) throw quickim::IoError("failed to write to stdout");
        return;
    }
    const fs::path target(path);
    fs::path temp = target;
    temp += ".tmp-" + std::to_string(static_cast<unsigned long long>(
                          std::chrono::steady_clock::now().time_since_epoch().count()));
    try {
        {
            std::ofstream out(temp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
            if (!out) throw quickim::IoError("cannot open " + temp.string() + " for writing");
            write(out);
            out.flush();
            if (!out) throw quickim::IoError("failed to write " + temp.string());
        }
        std::error_code ec;
        fs::rename(temp, target, ec);
        if (ec) throw quickim::IoError("cannot rename " + temp.string() + " to " + path + ": " + ec.message());
    } catch (...) {
        std::error_code ignored;
        fs::remove(temp, ignored);
        throw;
    }
}

void emit_json(const std::string& path, const json& doc) {
    emit(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

unsigned default_threads() {
    if (const char* env = std::getenv("QUICKIM_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value >= 0) return static_cast<unsigned>(value);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid QUICKIM_THREADS=" << env << '\n';
    }
    return 0;
}

unsigned resolve_threads(unsigned threads) { return threads == 0 ? quickim::default_thread_count() : threads; }

json summary_json(const quickim::InfluenceGraph& graph) {
    const auto s = quickim::summarize(graph);
    return {{"n", s.n}, {"m", s.m}, {"avg_out_degree", s.avg_out_degree}, {"probability_model", s.probability_model}};
}

std::vector<quickim::Label> read_seed_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw quickim::IoError("cannot open seeds file " + path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    std::vector<quickim::Label> labels;
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw quickim::ParseError(path + ": " + e.what());
        }
        const json& list = doc.is_object() ? doc.value("seeds", json()) : doc;
        if (!list.is_array()) throw quickim::ParseError(path + ": expected an array of labels or an object with \"seeds\"");
        for (const auto& item : list) {
            if (!item.is_number_unsigned()) throw quickim::ParseError(path + ": seed labels must be non-negative integers");
            labels.push_back(item.get<quickim::Label>());
        }
        return labels;
    }
    std::istringstream tokens(text);
    std::string token;
    while (tokens >> token) {
        if (token.front() == '#') {
            std::getline(tokens, token);
            continue;
        }
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || token.front() == '-') throw quickim::ParseError(path + ": invalid seed label '" + token + "'");
        labels.push_back(value);
    }
    return labels;
}

// ---- probs -----------------------------------------------------------------

struct ProbsArgs {
    std::string model = "wc";
    double p_t = quickim::kDefaultTrivalencyBase;
    double p_u = quickim::kDefaultUniformProbability;
    std::uint64_t rng_seed = 0;
    std::string input;
    std::string output;
    std::string format = "text";
};

void run_probs(const ProbsArgs& args) {
    quickim::ProbabilityModel model;
    model.kind = quickim::parse_model_kind(args.model);
    model.p_t = args.p_t;
    model.p_u = args.p_u;
    model.rng_seed = args.rng_seed;
    model.validate();
    const auto graph = quickim::assign_probabilities(quickim::load_graph(args.input), model);
    if (args.format == "bin") {
        emit(args.output, [&](std::ostream& out) { quickim::write_binary_cache(out, graph); }, true);
    } else {
        emit(args.output, [&](std::ostream& out) { quickim::write_edge_list(out, graph); });
    }
}

// ---- seeds -----------------------------------------------------------------

struct SeedsArgs {
    std::string input;
    std::string output;
    std::size_t k = quickim::kDefaultSeedCount;
    std::size_t L = quickim::kDefaultWalkLength;
    std::string algorithm = "quickim";
    std::size_t simulations = quickim::kDefaultSimulations;
    std::uint64_t rng_seed = 0;
    unsigned threads = 0;
    bool verbose = false;
};

json diagnostics_json(const quickim::LazyDiagnostics& d) {
    json histogram = json::object();
    for (const auto& [t, count] : d.timestamp_histogram) histogram[std::to_string(t)] = count;
    return {{"iteration", d.iteration},
            {"timestamp_histogram", histogram},
            {"f_cache_entries", d.f_cache_entries},
            {"df_cache_entries", d.df_cache_entries},
            {"column_entries", d.column_entries},
            {"total_touched", d.total_touched},
            {"total_skipped", d.total_skipped},
            {"aux_bytes", d.aux_bytes},
            {"peak_aux_bytes", d.peak_aux_bytes}};
}

void run_seeds(const SeedsArgs& args) {
    const auto graph = quickim::load_graph(args.input);
    const unsigned threads = resolve_threads(args.threads);
    quickim::SeedSelection selection;
    if (args.algorithm == "mc-greedy") {
        selection = quickim::mc_greedy(graph, args.k, args.simulations, args.rng_seed, threads);
    } else {
        selection = quickim::run_quickim(graph, args.k, args.L, {threads, args.verbose});
    }

    json iterations = json::array();
    for (const auto& it : selection.per_iteration) {
        iterations.push_back({{"seed", it.label},
                              {"score", it.score},
                              {"touched", it.touched},
                              {"skipped", it.skipped},
                              {"seconds", it.seconds}});
        if (args.verbose) {
            std::cerr << "iteration " << iterations.size() << ": seed " << it.label << " score " << it.score
                      << " touched " << it.touched << " skipped " << it.skipped << '\n';
        }
    }
    json doc = {{"algorithm", selection.config.algorithm},
                {"k", selection.config.k},
                {"L", selection.config.L},
                {"graph", summary_json(graph)},
                {"seeds", selection.labels},
                {"truncated", selection.truncated},
                {"seconds", selection.seconds},
                {"peak_aux_bytes", selection.peak_aux_bytes},
                {"iterations", iterations}};
    if (selection.config.simulations) doc["simulations"] = *selection.config.simulations;
    if (selection.config.rng_seed) doc["rng_seed"] = *selection.config.rng_seed;
    if (selection.diagnostics) doc["diagnostics"] = diagnostics_json(*selection.diagnostics);
    emit_json(args.output, doc);
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
    std::string input;
    std::string seeds;
    std::string output;
    std::size_t simulations = quickim::kDefaultSimulations;
    std::uint64_t rng_seed = 0;
    unsigned threads = 0;
};

void run_eval(const EvalArgs& args) {
    const auto graph = quickim::load_graph(args.input);
    const auto labels = read_seed_labels(args.seeds);
    const auto seeds = quickim::resolve_seeds(graph, labels);
    const auto estimate = quickim::mc_spread(graph, seeds, args.simulations, args.rng_seed, resolve_threads(args.threads));
    emit_json(args.output, {{"graph", summary_json(graph)},
                            {"seeds", labels},
                            {"mean", estimate.mean},
                            {"percent", estimate.percent},
                            {"std_error", estimate.std_error},
                            {"simulations", estimate.simulations},
                            {"rng_seed", estimate.rng_seed}});
}

// ---- oracle ----------------------------------------------------------------

struct OracleArgs {
    std::string input;
    std::string output;
    std::size_t L = quickim::kDefaultWalkLength;
};

json check_json(const quickim::CheckResult& check) {
    json doc = {{"name", check.name},
                {"status", quickim::to_string(check.status)},
                {"cases", check.cases},
                {"violations", check.violations},
                {"max_error", check.max_error}};
    if (!check.detail.empty()) doc["detail"] = check.detail;
    return doc;
}

bool run_oracle(const OracleArgs& args) {
    const auto graph = quickim::load_graph(args.input);
    const auto report = quickim::verify_graph(graph, args.L);
    const auto& inf = report.influence;

    json vertices = json::array();
    json pairs = json::array();
    for (quickim::VertexId u = 0; u < graph.vertex_count(); ++u) {
        vertices.push_back({{"label", graph.label(u)},
                            {"influence", inf.influence_of(u)},
                            {"score", inf.score(u)},
                            {"gap_bound", inf.vertex_gap_bound(u)}});
        for (quickim::VertexId v = 0; v < graph.vertex_count(); ++v) {
            if (inf.walk_count[u][v] == 0) continue;
            json pair = {{"source", graph.label(u)},
                         {"target", graph.label(v)},
                         {"walks", inf.walk_count[u][v]},
                         {"influence", inf.influence[u][v]},
                         {"walk_score", inf.walk_score[u][v]},
                         {"gap_bound", inf.pair_gap_bound(u, v)}};
            if (!inf.embedded_counts[u][v].empty()) pair["embedded_counts"] = inf.embedded_counts[u][v];
            pairs.push_back(pair);
        }
    }
    json checks = json::array();
    for (const auto& c : report.checks) checks.push_back(check_json(c));
    json informational = json::array();
    for (const auto& c : report.informational) informational.push_back(check_json(c));

    emit_json(args.output, {{"graph", summary_json(graph)},
                            {"L", report.L},
                            {"max_probability", inf.max_probability},
                            {"pass", report.pass()},
                            {"checks", checks},
                            {"informational", informational},
                            {"vertices", vertices},
                            {"pairs", pairs}});
    return report.pass();
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string input;
    std::string output;
    std::string csv;
    std::string model = "un";
    std::vector<double> grid = {0.01, 0.02, 0.05, 0.1, 0.2};
    std::size_t k = quickim::kDefaultSeedCount;
    std::size_t L = quickim::kDefaultWalkLength;
    std::size_t repetitions = 3;
    std::uint64_t rng_seed = 0;
};

void run_bench(const BenchArgs& args) {
    const auto kind = quickim::parse_model_kind(args.model);
    const auto graph = quickim::load_graph(args.input);
    const auto report = quickim::robustness_bench(graph, kind, args.grid, args.k, args.L, args.repetitions, args.rng_seed);
    json rows = json::array();
    for (const auto& row : report.rows) rows.push_back({{"p", row.p}, {"seconds", row.seconds}, {"aux_bytes", row.aux_bytes}});
    json doc = {{"graph", summary_json(graph)},
                {"model", quickim::to_string(report.model)},
                {"k", report.k},
                {"L", report.L},
                {"repetitions", args.repetitions},
                {"rows", rows},
                {"time_ratio", report.time_ratio ? json(*report.time_ratio) : json()},
                {"memory_ratio", report.memory_ratio ? json(*report.memory_ratio) : json()}};
    if (!args.csv.empty()) emit(args.csv, [&](std::ostream& out) { out << quickim::to_csv(report); });
    emit_json(args.output, doc);
}

// ---- scores ----------------------------------------------------------------

struct ScoresArgs {
    std::string input;
    std::string output;
    std::size_t L = quickim::kDefaultWalkLength;
    std::string format = "json";
    unsigned threads = 0;
};

template <class T>
void write_raw(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

void run_scores(const ScoresArgs& args) {
    const auto graph = quickim::load_graph(args.input);
    const auto scores = quickim::score_est(graph, args.L, resolve_threads(args.threads));
    const std::size_t n = graph.vertex_count();
    if (args.format == "bin") {
        emit(args.output, [&](std::ostream& out) {
            out.write(kScoreMagic, sizeof(kScoreMagic));
            write_raw(out, kScoreVersion);
            write_raw(out, static_cast<std::uint64_t>(n));
            write_raw(out, static_cast<std::uint64_t>(args.L));
            for (quickim::VertexId v = 0; v < n; ++v) write_raw(out, graph.label(v));
            for (const auto& hop : scores.per_hop) out.write(reinterpret_cast<const char*>(hop.data()), static_cast<std::streamsize>(hop.size() * sizeof(double)));
            out.write(reinterpret_cast<const char*>(scores.total.data()), static_cast<std::streamsize>(n * sizeof(double)));
        }, true);
        return;
    }
    json vertices = json::array();
    for (quickim::VertexId v = 0; v < n; ++v) {
        json hops = json::array();
        for (std::size_t j = 1; j <= args.L; ++j) hops.push_back(scores.hop(j, v));
        vertices.push_back({{"label", graph.label(v)}, {"total", scores.total[v]}, {"per_hop", hops}});
    }
    emit_json(args.output, {{"graph", summary_json(graph)}, {"L", args.L}, {"vertices", vertices}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QuickIM influence maximization"};
    app.require_subcommand(1);
    const unsigned env_threads = default_threads();
    const auto models = CLI::IsMember({"wc", "tr", "un"}, CLI::ignore_case);

    ProbsArgs probs;
    auto* probs_cmd = app.add_subcommand("probs", "Annotate an edge list with influence probabilities");
    probs_cmd->add_option("--model", probs.model, "wc, tr or un")->transform(models)->capture_default_str();
    probs_cmd->add_option("--p-t", probs.p_t, "Base of the trivalency levels")->capture_default_str();
    probs_cmd->add_option("--p-u", probs.p_u, "Uniform probability")->capture_default_str();
    probs_cmd->add_option("--rng-seed", probs.rng_seed, "Seed for trivalency draws")->capture_default_str();
    probs_cmd->add_option("--format", probs.format, "Output format")->check(CLI::IsMember({"text", "bin"}))->capture_default_str();
    probs_cmd->add_option("input", probs.input, "Input edge list")->required();
    probs_cmd->add_option("output", probs.output, "Output file (stdout when omitted)");

    SeedsArgs seeds;
    seeds.threads = env_threads;
    auto* seeds_cmd = app.add_subcommand("seeds", "Select seed vertices");
    seeds_cmd->add_option("input", seeds.input, "Probability-annotated graph")->required();
    seeds_cmd->add_option("-o,--output", seeds.output, "Output JSON file (stdout when omitted)");
    seeds_cmd->add_option("-k,--k", seeds.k, "Number of seeds")->check(CLI::PositiveNumber)->capture_default_str();
    seeds_cmd->add_option("-l,--l", seeds.L, "Maximum walk length")->check(CLI::PositiveNumber)->capture_default_str();
    seeds_cmd->add_option("--algo", seeds.algorithm, "quickim or mc-greedy")
        ->check(CLI::IsMember({"quickim", "mc-greedy"}))
        ->capture_default_str();
    seeds_cmd->add_option("--simulations", seeds.simulations, "Simulations per gain (mc-greedy)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    seeds_cmd->add_option("--rng-seed", seeds.rng_seed, "Simulation seed (mc-greedy)")->capture_default_str();
    seeds_cmd->add_option("--threads", seeds.threads, "Worker threads, 0 for all cores")->capture_default_str();
    seeds_cmd->add_flag("-v,--verbose", seeds.verbose, "Log iterations and include update diagnostics");

    EvalArgs eval;
    eval.threads = env_threads;
    auto* eval_cmd = app.add_subcommand("eval", "Estimate the spread of a seed set");
    eval_cmd->add_option("input", eval.input, "Probability-annotated graph")->required();
    eval_cmd->add_option("--seeds", eval.seeds, "Seeds file: JSON from 'seeds' or a list of labels")->required();
    eval_cmd->add_option("-o,--output", eval.output, "Output JSON file (stdout when omitted)");
    eval_cmd->add_option("--simulations", eval.simulations, "Number of simulations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--rng-seed", eval.rng_seed, "Simulation seed")->capture_default_str();
    eval_cmd->add_option("--threads", eval.threads, "Worker threads, 0 for all cores")->capture_default_str();

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Run the exact verification battery on a small graph");
    oracle_cmd->add_option("input", oracle.input, "Probability-annotated graph")->required();
    oracle_cmd->add_option("-o,--output", oracle.output, "Output JSON file (stdout when omitted)");
    oracle_cmd->add_option("-l,--l", oracle.L, "Maximum walk length")->check(CLI::PositiveNumber)->capture_default_str();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time seed selection across a probability grid");
    bench_cmd->add_option("input", bench.input, "Graph (probabilities are replaced)")->required();
    bench_cmd->add_option("-o,--output", bench.output, "Output JSON file (stdout when omitted)");
    bench_cmd->add_option("--csv", bench.csv, "Also write the table as CSV");
    bench_cmd->add_option("--model", bench.model, "tr or un")->transform(models)->capture_default_str();
    bench_cmd->add_option("--grid", bench.grid, "Probability values")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("-k,--k", bench.k, "Number of seeds")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("-l,--l", bench.L, "Maximum walk length")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--repetitions", bench.repetitions, "Runs per grid value")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--rng-seed", bench.rng_seed, "Seed for trivalency draws")->capture_default_str();

    ScoresArgs scores;
    scores.threads = env_threads;
    auto* scores_cmd = app.add_subcommand("scores", "Dump per-hop walk scores");
    scores_cmd->add_option("input", scores.input, "Probability-annotated graph")->required();
    scores_cmd->add_option("-o,--output", scores.output, "Output file (stdout when omitted)");
    scores_cmd->add_option("-l,--l", scores.L, "Maximum walk length")->check(CLI::PositiveNumber)->capture_default_str();
    scores_cmd->add_option("--format", scores.format, "json or bin")->check(CLI::IsMember({"json", "bin"}))->capture_default_str();
    scores_cmd->add_option("--threads", scores.threads, "Worker threads, 0 for all cores")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (probs_cmd->parsed()) run_probs(probs);
        if (seeds_cmd->parsed()) run_seeds(seeds);
        if (eval_cmd->parsed()) run_eval(eval);
        if (oracle_cmd->parsed() && !run_oracle(oracle)) {
            std::cerr << "error: one or more oracle checks failed\n";
            return 1;
        }
        if (bench_cmd->parsed()) run_bench(bench);
        if (scores_cmd->parsed()) run_scores(scores);
    } catch (const quickim::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const quickim::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const quickim::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const quickim::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
