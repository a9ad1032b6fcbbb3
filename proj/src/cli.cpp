#include <bnsl/analysis.hpp>
#include <bnsl/cli.hpp>
#include <bnsl/dataset.hpp>
#include <bnsl/errors.hpp>
#include <bnsl/generator.hpp>
#include <bnsl/heuristic.hpp>
#include <bnsl/network.hpp>
#include <bnsl/pops.hpp>
#include <bnsl/score_file.hpp>
#include <bnsl/search.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace bnsl::cli {

namespace {

/// Writes through `emit` to `path`, or to `fallback` when the path is empty.
void write_to(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& emit)
{
    if (path.empty()) {
        emit(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParseError("cannot open " + path + " for writing");
    emit(file);
    file.flush();
    if (!file) throw ParseError("failed writing " + path);
}

std::string format_number(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.6f}", v);
}

VariableId parse_index(std::string_view text, std::size_t n)
{
    unsigned long long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw InvalidPartition("bad variable index '" + std::string(text) + "' in --pd-groups");
    }
    if (value >= n) throw InvalidPartition("variable index " + std::string(text) + " out of range in --pd-groups");
    return static_cast<VariableId>(value);
}

/// Groups separated by ':', members by ',', with inclusive a-b ranges.
Partition parse_groups(const std::string& spec, std::size_t n)
{
    Partition groups;
    std::string_view rest(spec);
    while (true) {
        const auto colon = rest.find(':');
        const auto group_text = rest.substr(0, colon);
        VarSet group;
        std::string_view members = group_text;
        while (true) {
            const auto comma = members.find(',');
            const auto item = members.substr(0, comma);
            const auto dash = item.find('-');
            if (dash == std::string_view::npos) {
                const auto v = parse_index(item, n);
                if (group.contains(v)) throw InvalidPartition("variable repeated in --pd-groups");
                group = group.with(v);
            } else {
                const auto lo = parse_index(item.substr(0, dash), n);
                const auto hi = parse_index(item.substr(dash + 1), n);
                if (lo > hi) throw InvalidPartition("descending range in --pd-groups");
                for (auto v = lo; v <= hi; ++v) {
                    if (group.contains(v)) throw InvalidPartition("variable repeated in --pd-groups");
                    group = group.with(v);
                }
            }
            if (comma == std::string_view::npos) break;
            members.remove_prefix(comma + 1);
        }
        groups.push_back(group);
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
    }
    validate_partition(groups, n);
    return groups;
}

Dataset load_data_file(const std::string& path, bool categorical)
{
    if (!categorical) return load_dataset_file(path);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return load_categorical_dataset(in);
}

struct HeuristicFlags {
    std::string kind = "pd";
    std::string groups;
    CLI::Option* groups_opt = nullptr;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--heuristic", kind, "Admissible heuristic")
            ->check(CLI::IsMember({"simple", "pd"}))
            ->capture_default_str();
        groups_opt = cmd->add_option("--pd-groups", groups, "Pattern database groups, e.g. 0-4:5-9");
    }

    HeuristicSpec resolve(std::size_t n) const
    {
        HeuristicSpec spec;
        if (kind == "simple") {
            if (groups_opt->count()) throw InvalidConfig("--pd-groups requires --heuristic pd");
            spec.kind = HeuristicSpec::Kind::simple;
        } else {
            spec.kind = HeuristicSpec::Kind::pattern_database;
            if (groups_opt->count()) spec.groups = parse_groups(groups, n);
        }
        return spec;
    }
};

struct StoreFlags {
    std::string scores;
    std::string data;
    std::size_t max_parents = 0;
    bool categorical = false;
    CLI::Option* scores_opt = nullptr;
    CLI::Option* data_opt = nullptr;
    CLI::Option* max_parents_opt = nullptr;
    CLI::Option* categorical_opt = nullptr;

    void attach(CLI::App* cmd)
    {
        scores_opt = cmd->add_option("--scores", scores, "Score file");
        data_opt = cmd->add_option("--data", data, "Dataset CSV");
        max_parents_opt = cmd->add_option("--max-parents", max_parents, "Parent-set size cap when scoring --data");
        categorical_opt = cmd->add_flag("--categorical", categorical, "Map string labels in --data to states");
        scores_opt->excludes(data_opt);
        data_opt->excludes(scores_opt);
    }

    bool has_source() const { return scores_opt->count() || data_opt->count(); }

    void check(bool required) const
    {
        if (required && !has_source()) throw InvalidConfig("exactly one of --scores or --data is required");
        if (scores_opt->count() && max_parents_opt->count()) throw InvalidConfig("--max-parents applies to --data only");
        if (scores_opt->count() && categorical_opt->count()) throw InvalidConfig("--categorical applies to --data only");
        if (data_opt->count() && !max_parents_opt->count()) throw InvalidConfig("--data requires --max-parents");
    }

    /// Both sources yield the store as read from a score file, so --data and
    /// --scores agree exactly.
    PopsStore load() const
    {
        if (scores_opt->count()) return read_scores_file(scores);
        return round_trip(PopsStore::from_data(load_data_file(data, categorical), max_parents));
    }
};

struct SearchFlags {
    std::string algorithm;
    double epsilon = 1.25;
    double epsilon_step = 0.05;
    std::size_t window = 0;
    std::size_t window_step = 1;
    std::int64_t time_limit_ms = 0;
    std::size_t node_limit = 0;
    CLI::Option* epsilon_opt = nullptr;
    CLI::Option* epsilon_step_opt = nullptr;
    CLI::Option* window_opt = nullptr;
    CLI::Option* window_step_opt = nullptr;
    CLI::Option* time_opt = nullptr;
    CLI::Option* node_opt = nullptr;

    void attach(CLI::App* cmd, bool with_algorithm)
    {
        if (with_algorithm) {
            cmd->add_option("--alg", algorithm, "Search algorithm")
                ->required()
                ->check(CLI::IsMember({"astar", "wastar", "aweia", "ara", "awina"}));
        }
        epsilon_opt = cmd->add_option("--epsilon", epsilon, "Heuristic weight")->capture_default_str();
        epsilon_step_opt = cmd->add_option("--epsilon-step", epsilon_step, "ARA* weight decrement")->capture_default_str();
        window_opt = cmd->add_option("--window", window, "Initial AWinA* window")->capture_default_str();
        window_step_opt = cmd->add_option("--window-step", window_step, "AWinA* window increment")->capture_default_str();
        time_opt = cmd->add_option("--time-limit-ms", time_limit_ms, "Wall-clock limit");
        node_opt = cmd->add_option("--node-limit", node_limit, "Node budget");
    }

    SearchConfig config_for(Algorithm a) const
    {
        const bool weighted = a == Algorithm::wastar || a == Algorithm::aweia || a == Algorithm::ara;
        if (epsilon_opt->count() && !weighted) throw InvalidConfig("--epsilon applies to wastar, aweia and ara only");
        if (epsilon_step_opt->count() && a != Algorithm::ara) throw InvalidConfig("--epsilon-step applies to ara only");
        if ((window_opt->count() || window_step_opt->count()) && a != Algorithm::awina) {
            throw InvalidConfig("--window and --window-step apply to awina only");
        }
        SearchConfig config;
        config.algorithm = a;
        config.epsilon = epsilon;
        config.epsilon_step = epsilon_step;
        config.window_init = window;
        config.window_step = window_step;
        if (time_opt->count()) config.time_limit_ms = time_limit_ms;
        if (node_opt->count()) config.node_limit = node_limit;
        validate(config);
        return config;
    }
};

std::string summary_line(const SolveResult& result, std::int64_t elapsed_ms)
{
    return fmt::format("score={} lower_bound={} error_bound={} proved_optimal={} expanded={} elapsed_ms={}",
                       result.incumbent ? format_number(result.incumbent->score) : std::string("none"),
                       format_number(result.lower_bound), format_number(result.error_bound),
                       result.proved_optimal ? "true" : "false", result.stats.expanded, elapsed_ms);
}

struct Timed {
    SolveResult result;
    std::int64_t elapsed_ms = 0;
};

Timed timed_solve(const PopsStore& store, const SearchConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    auto result = solve(store, config);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    return {std::move(result), std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()};
}

// ---- gen-net ---------------------------------------------------------------

struct GenNetCommand {
    GenConfig config;
    std::size_t steps = 0;
    std::string out_path;
    CLI::Option* steps_opt = nullptr;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--vars", config.num_variables, "Number of variables")->required();
        cmd->add_option("--max-parents", config.max_parents, "In-degree bound")->required();
        cmd->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
        steps_opt = cmd->add_option("--mcmc-steps", steps, "Markov chain steps (default 10 n^2)");
        cmd->add_option("--alpha", config.dirichlet_alpha, "Dirichlet concentration for CPT rows")
            ->capture_default_str();
        cmd->add_option("--out", out_path, "Network file (default: standard output)");
    }

    int run(std::ostream& out)
    {
        if (steps_opt->count()) config.mcmc_steps = steps;
        const auto net = generate_network(config);
        write_to(out_path, out, [&](std::ostream& s) { write_generating_network(s, net); });
        return kExitOk;
    }
};

// ---- sample ----------------------------------------------------------------

struct SampleCommand {
    std::string net_path;
    std::size_t records = 0;
    std::uint64_t seed = 0;
    std::string out_path;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--net", net_path, "Generating network file")->required();
        cmd->add_option("--records", records, "Number of records")->required();
        cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
        cmd->add_option("--out", out_path, "Dataset CSV (default: standard output)");
    }

    int run(std::ostream& out)
    {
        if (records < 1) throw InvalidConfig("--records must be at least 1");
        const auto net = read_generating_network_file(net_path);
        Rng rng(seed);
        const auto data = logic_sample(net, records, rng);
        write_to(out_path, out, [&](std::ostream& s) { write_dataset(s, data); });
        return kExitOk;
    }
};

// ---- score -----------------------------------------------------------------

struct ScoreCommand {
    std::string data_path;
    std::size_t max_parents = 0;
    bool categorical = false;
    std::string out_path;
    bool no_prune = false;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--data", data_path, "Dataset CSV")->required();
        cmd->add_option("--max-parents", max_parents, "Parent-set size cap")->required();
        cmd->add_flag("--categorical", categorical, "Map string labels to states");
        cmd->add_option("--out", out_path, "Score file")->required();
        cmd->add_flag("--no-prune", no_prune, "Write every scored parent set");
    }

    int run(std::ostream& out)
    {
        const auto data = load_data_file(data_path, categorical);
        std::vector<std::vector<ParentSetScore>> lists;
        for (VariableId v = 0; v < data.num_variables(); ++v) {
            auto raw = enumerate_scores(data, v, max_parents);
            for (auto& e : raw) e.score = quantize_score(e.score);
            lists.push_back(no_prune ? std::move(raw) : prune_to_pops(std::move(raw)));
        }
        write_to(out_path, out, [&](std::ostream& s) { write_scores(s, data.names(), lists); });
        std::size_t total = 0;
        for (VariableId v = 0; v < lists.size(); ++v) {
            out << data.name(v) << ' ' << lists[v].size() << '\n';
            total += lists[v].size();
        }
        out << "total " << total << '\n';
        return kExitOk;
    }
};

// ---- solve -----------------------------------------------------------------

struct SolveCommand {
    StoreFlags source;
    HeuristicFlags heuristic;
    SearchFlags search;
    std::string trace_path;
    std::string out_path;

    void attach(CLI::App* cmd)
    {
        source.attach(cmd);
        search.attach(cmd, true);
        heuristic.attach(cmd);
        cmd->add_option("--trace", trace_path, "Trace CSV");
        cmd->add_option("--out", out_path, "Learned network file");
    }

    int run(std::ostream& out)
    {
        source.check(true);
        auto config = search.config_for(*parse_algorithm(search.algorithm));
        const auto store = source.load();
        config.heuristic = heuristic.resolve(store.num_variables());
        const auto [result, elapsed_ms] = timed_solve(store, config);
        if (!trace_path.empty()) write_to(trace_path, out, [&](std::ostream& s) { write_trace_csv(s, result.trace); });
        if (result.incumbent && !out_path.empty()) {
            write_to(out_path, out, [&](std::ostream& s) { write_structure(s, result.incumbent->network); });
        }
        out << summary_line(result, elapsed_ms) << '\n';
        return result.incumbent ? kExitOk : kExitNoIncumbent;
    }
};

// ---- solve-matrix ----------------------------------------------------------

struct SolveMatrixCommand {
    std::vector<std::string> score_paths;
    std::vector<std::string> algorithms;
    HeuristicFlags heuristic;
    SearchFlags search;
    std::size_t threads = 1;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--scores", score_paths, "Score files")->required();
        cmd->add_option("--alg", algorithms, "Algorithms")
            ->required()
            ->check(CLI::IsMember({"astar", "wastar", "aweia", "ara", "awina"}));
        search.attach(cmd, false);
        heuristic.attach(cmd);
        cmd->add_option("--threads", threads, "Concurrent solves")->capture_default_str();
    }

    int run(std::ostream& out)
    {
        if (threads < 1) throw InvalidConfig("--threads must be at least 1");
        std::vector<PopsStore> stores;
        for (const auto& p : score_paths) stores.push_back(read_scores_file(p));
        struct Cell {
            std::size_t store;
            SearchConfig config;
            std::string line;
            bool solved = false;
        };
        std::vector<Cell> cells;
        for (std::size_t s = 0; s < stores.size(); ++s) {
            for (const auto& name : algorithms) {
                auto config = search.config_for(*parse_algorithm(name));
                config.heuristic = heuristic.resolve(stores[s].num_variables());
                cells.push_back({s, config, {}, false});
            }
        }
        std::atomic<std::size_t> next{0};
        std::mutex failure_mutex;
        std::exception_ptr failure;
        auto worker = [&] {
            for (auto i = next++; i < cells.size(); i = next++) {
                try {
                    auto& cell = cells[i];
                    const auto [result, elapsed_ms] = timed_solve(stores[cell.store], cell.config);
                    cell.line = fmt::format("scores={} alg={} {}", score_paths[cell.store],
                                            to_string(cell.config.algorithm), summary_line(result, elapsed_ms));
                    cell.solved = result.incumbent.has_value();
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            for (std::size_t t = 1; t < std::min(threads, cells.size()); ++t) pool.emplace_back(worker);
            worker();
        }
        if (failure) std::rethrow_exception(failure);
        bool all_solved = true;
        for (const auto& cell : cells) {
            out << cell.line << '\n';
            all_solved = all_solved && cell.solved;
        }
        return all_solved ? kExitOk : kExitNoIncumbent;
    }
};

// ---- analyze ---------------------------------------------------------------

struct AnalyzeCommand {
    StoreFlags source;
    HeuristicFlags heuristic;
    std::string census_path;
    std::string histogram_path;
    std::size_t bins = 50;
    std::size_t records = 0;
    std::size_t census_limit = kDefaultCensusLimit;
    double optimal = 0.0;
    std::vector<std::string> shd_paths;
    std::string avg_parents_path;
    CLI::Option* census_opt = nullptr;
    CLI::Option* histogram_opt = nullptr;
    CLI::Option* records_opt = nullptr;
    CLI::Option* optimal_opt = nullptr;
    CLI::Option* shd_opt = nullptr;
    CLI::Option* avg_opt = nullptr;

    void attach(CLI::App* cmd)
    {
        source.attach(cmd);
        heuristic.attach(cmd);
        census_opt = cmd->add_option("--census", census_path, "Per-layer census CSV");
        histogram_opt = cmd->add_option("--histogram", histogram_path, "Histogram CSV of f / records");
        cmd->add_option("--bins", bins, "Histogram bins")->capture_default_str();
        records_opt = cmd->add_option("--records", records, "Record count used to normalize f");
        cmd->add_option("--census-limit", census_limit, "Largest n accepted by the census")->capture_default_str();
        optimal_opt = cmd->add_option("--optimal-score", optimal, "Optimum to compare f against (default: exact)");
        shd_opt = cmd->add_option("--shd", shd_paths, "Structural Hamming distance of two network files")->expected(2);
        avg_opt = cmd->add_option("--avg-parents", avg_parents_path, "Average parent count of a network file");
    }

    int run(std::ostream& out)
    {
        const bool census_mode = census_opt->count() || histogram_opt->count();
        const int modes = int(census_mode) + int(shd_opt->count() > 0) + int(avg_opt->count() > 0);
        if (modes != 1) throw InvalidConfig("choose exactly one of --census/--histogram, --shd, --avg-parents");
        if (shd_opt->count()) {
            out << shd(read_structure_file(shd_paths[0]), read_structure_file(shd_paths[1])) << '\n';
            return kExitOk;
        }
        if (avg_opt->count()) {
            out << fmt::format("{:.6f}", avg_parents(read_structure_file(avg_parents_path))) << '\n';
            return kExitOk;
        }
        source.check(true);
        std::optional<std::size_t> normalizer;
        if (records_opt->count()) normalizer = records;
        const auto store = source.load();
        if (!normalizer) normalizer = store.num_records();
        if (histogram_opt->count() && !normalizer) throw InvalidConfig("--histogram needs --records or --data");
        if (normalizer && *normalizer < 1) throw InvalidConfig("--records must be at least 1");
        const auto h = make_heuristic(store, heuristic.resolve(store.num_variables()));
        const auto census = optimal_opt->count() ? fcost_census(store, *h, optimal, census_limit)
                                                 : fcost_census(store, *h, census_limit);
        if (census_opt->count()) write_to(census_path, out, [&](std::ostream& s) { write_census_csv(s, census); });
        if (histogram_opt->count()) {
            const auto hist = f_histogram(census, static_cast<double>(*normalizer), bins);
            write_to(histogram_path, out, [&](std::ostream& s) { write_histogram_csv(s, hist); });
        }
        out << fmt::format("n={} total_nodes={} optimal_score={:.6f} pct_below_optimal={:.6f}\n", census.n,
                           census.total_nodes, census.optimal_score, census.pct_below_optimal);
        return kExitOk;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app("Exact and anytime Bayesian network structure learning", "bnsl");
    app.require_subcommand(1);
    app.set_version_flag("--version", "bnsl 1.0.0");

    GenNetCommand gen_net;
    SampleCommand sample;
    ScoreCommand score;
    SolveCommand solve_cmd;
    SolveMatrixCommand solve_matrix;
    AnalyzeCommand analyze;

    auto* gen_net_app = app.add_subcommand("gen-net", "Generate a random network with Dirichlet CPTs");
    auto* sample_app = app.add_subcommand("sample", "Draw records from a network by forward sampling");
    auto* score_app = app.add_subcommand("score", "Compute MDL local scores for every parent set");
    auto* solve_app = app.add_subcommand("solve", "Learn a network by order-graph search");
    auto* matrix_app = app.add_subcommand("solve-matrix", "Solve every (score file, algorithm) pair");
    auto* analyze_app = app.add_subcommand("analyze", "Search-space and structure diagnostics");
    gen_net.attach(gen_net_app);
    sample.attach(sample_app);
    score.attach(score_app);
    solve_cmd.attach(solve_app);
    solve_matrix.attach(matrix_app);
    analyze.attach(analyze_app);

    // CLI11 consumes arguments from the back and without the program name
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (gen_net_app->parsed()) return gen_net.run(out);
        if (sample_app->parsed()) return sample.run(out);
        if (score_app->parsed()) return score.run(out);
        if (solve_app->parsed()) return solve_cmd.run(out);
        if (matrix_app->parsed()) return solve_matrix.run(out);
        if (analyze_app->parsed()) return analyze.run(out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace bnsl::cli
