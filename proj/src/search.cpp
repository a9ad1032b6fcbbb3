#include <bnsl/errors.hpp>
#include <bnsl/search.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

namespace bnsl {

std::string_view to_string(Algorithm a) noexcept
{
    switch (a) {
    case Algorithm::astar: return "astar";
    case Algorithm::wastar: return "wastar";
    case Algorithm::aweia: return "aweia";
    case Algorithm::ara: return "ara";
    case Algorithm::awina: return "awina";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept
{
    for (auto a : {Algorithm::astar, Algorithm::wastar, Algorithm::aweia, Algorithm::ara, Algorithm::awina}) {
        if (to_string(a) == name) return a;
    }
    return std::nullopt;
}

std::string_view to_string(TraceEvent e) noexcept
{
    switch (e) {
    case TraceEvent::incumbent_improved: return "incumbentImproved";
    case TraceEvent::bound_improved: return "boundImproved";
    case TraceEvent::iteration_end: return "iterationEnd";
    case TraceEvent::terminated: return "terminated";
    }
    return "?";
}

std::string_view to_string(Termination t) noexcept
{
    switch (t) {
    case Termination::optimal: return "optimal";
    case Termination::time_limit: return "timeLimit";
    case Termination::node_limit: return "nodeLimit";
    case Termination::exhausted: return "exhausted";
    }
    return "?";
}

void validate(const SearchConfig& config)
{
    if (!(config.epsilon >= 1.0) || !std::isfinite(config.epsilon)) throw InvalidConfig("epsilon must be a finite value >= 1");
    if (!(config.epsilon_step > 0.0) || !std::isfinite(config.epsilon_step)) {
        throw InvalidConfig("epsilon step must be positive");
    }
    if (config.window_step < 1) throw InvalidConfig("window step must be at least 1");
    if (config.node_limit && *config.node_limit < 1) throw InvalidConfig("node limit must be at least 1");
    if (config.time_limit_ms && *config.time_limit_ms < 0) throw InvalidConfig("time limit must be non-negative");
}

std::vector<Successor> expand(const PopsStore& store, const SearchNode& node)
{
    std::vector<Successor> out;
    for (auto x : store.all_variables() - node.vars) {
        const auto& best = store.best_score_unchecked(x, node.vars);
        out.push_back({node.vars.with(x), x, best.score, best.parents});
    }
    return out;
}

ReconstructedNetwork reconstruct(const PopsStore& store, VarSet goal,
                                 const std::function<std::optional<VariableId>(VarSet)>& last_var_of)
{
    ReconstructedNetwork result{Network(store.num_variables()), 0.0, {}};
    std::vector<double> costs;
    VarSet u = goal;
    while (!u.empty()) {
        const auto x = last_var_of(u);
        if (!x || !u.contains(*x)) throw BrokenPath("no valid predecessor link for an order-graph node");
        u = u.without(*x);
        const auto& best = store.best_score_unchecked(*x, u);
        result.network.set_parents(*x, best.parents);
        result.order.push_back(*x);
        costs.push_back(best.score);
    }
    std::reverse(result.order.begin(), result.order.end());
    for (auto it = costs.rbegin(); it != costs.rend(); ++it) result.score += *it;
    return result;
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr VariableId kNoVar = std::numeric_limits<VariableId>::max();
constexpr double kBoundEps = 1e-9;

enum class Where : std::uint8_t { none, open, frozen, repair, closed };

struct NodeRecord {
    double g = kInf;
    double h = 0.0;
    VariableId last_var = kNoVar;
    std::uint32_t closed_iteration = 0;
    Where where = Where::none;
    bool ever_expanded = false;
};

struct OpenEntry {
    double key;
    double g;
    VarSet vars;
};

/// Heap order: smallest key first, then larger g (deeper), then smaller set.
struct OpenAfter {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const noexcept
    {
        if (a.key != b.key) return a.key > b.key;
        if (a.g != b.g) return a.g < b.g;
        return b.vars < a.vars;
    }
};

struct BoundEntry {
    double f;
    double g;
    VarSet vars;
};

struct BoundAfter {
    bool operator()(const BoundEntry& a, const BoundEntry& b) const noexcept { return a.f > b.f; }
};

enum class GoalPolicy { on_expansion, on_generation };

/// Shared state and bookkeeping for all order-graph engines. The open list is
/// keyed on g + weight * h; a second heap tracks the smallest unweighted f
/// among nodes waiting in open, frozen or repair, which bounds the optimum
/// whenever every not-yet-expanded improvement lives in one of those lists.
class Engine {
public:
    Engine(const PopsStore& store, const Heuristic& h, const SearchLimits& limits, GoalPolicy goal_policy,
           bool open_bound_valid)
        : store_(store),
          heuristic_(h),
          limits_(limits),
          goal_policy_(goal_policy),
          open_bound_valid_(open_bound_valid),
          n_(store.num_variables()),
          goal_(store.all_variables()),
          start_time_(Clock::now())
    {
        nodes_.reserve(1024);
        auto& start = nodes_[VarSet{}];
        start.g = 0.0;
        start.h = heuristic_.estimate(VarSet{});
        static_bound_ = start.h;
        place(VarSet{}, start, Where::open);
        ++stats_.generated;
    }

    // ---- configuration ----
    void set_weight(double w) { weight_ = w; }
    double weight() const noexcept { return weight_; }
    void set_iteration(std::uint32_t i) { iteration_ = i; }
    bool has_incumbent() const noexcept { return incumbent_.has_value(); }
    double incumbent_score() const noexcept { return incumbent_ ? incumbent_->score : kInf; }

    /// Raises the constant part of the lower bound (for example I / epsilon
    /// once a weighted iteration has completed).
    void raise_static_bound(double lb) { static_bound_ = std::max(static_bound_, lb); }

    // ---- open list ----
    /// Drops stale heap entries; returns the live top or nullopt.
    std::optional<OpenEntry> peek_open()
    {
        while (!open_.empty()) {
            const auto& top = open_.front();
            auto it = nodes_.find(top.vars);
            if (it->second.where == Where::open && it->second.g == top.g) return top;
            std::pop_heap(open_.begin(), open_.end(), OpenAfter{});
            open_.pop_back();
        }
        return std::nullopt;
    }

    OpenEntry pop_open()
    {
        auto top = *peek_open();
        std::pop_heap(open_.begin(), open_.end(), OpenAfter{});
        open_.pop_back();
        return top;
    }

    NodeRecord& node(VarSet s) { return nodes_.find(s)->second; }

    /// Re-keys every open and repair node with the current weight.
    void rebuild_open_from(std::vector<VarSet>& extra, Where extra_where)
    {
        std::vector<VarSet> live;
        for (const auto& e : open_) {
            auto& rec = node(e.vars);
            if (rec.where == Where::open && rec.g == e.g) live.push_back(e.vars);
        }
        for (auto s : extra) {
            auto& rec = node(s);
            if (rec.where == extra_where) live.push_back(s);
        }
        extra.clear();
        open_.clear();
        std::sort(live.begin(), live.end());
        live.erase(std::unique(live.begin(), live.end()), live.end());
        for (auto s : live) {
            auto& rec = node(s);
            if (incumbent_ && rec.g + rec.h >= incumbent_->score) {
                move(rec, Where::none);
                continue;
            }
            move(rec, Where::open);
            open_.push_back({rec.g + weight_ * rec.h, rec.g, s});
        }
        std::make_heap(open_.begin(), open_.end(), OpenAfter{});
    }

    std::vector<VarSet>& frozen_list() { return frozen_; }
    std::vector<VarSet>& repair_list() { return repair_; }
    std::size_t frozen_count() const noexcept { return count_[static_cast<int>(Where::frozen)]; }

    // ---- limits ----
    /// True when the search must stop before expanding a node with
    /// `successors` potential children; records the reason.
    bool must_stop(std::size_t successors)
    {
        if (limits_.stop.stop_requested()) {
            termination_ = Termination::time_limit;
            return true;
        }
        if (limits_.time_limit_ms && elapsed_ms() >= *limits_.time_limit_ms) {
            termination_ = Termination::time_limit;
            return true;
        }
        if (limits_.node_limit && budget_used() + successors > *limits_.node_limit) {
            termination_ = Termination::node_limit;
            return true;
        }
        return false;
    }

    std::size_t budget_used() const noexcept
    {
        return stats_.expanded + count_[static_cast<int>(Where::open)] + count_[static_cast<int>(Where::frozen)] +
               count_[static_cast<int>(Where::repair)];
    }

    // ---- node transitions ----
    void prune(NodeRecord& rec) { move(rec, Where::none); }
    void freeze(VarSet s, NodeRecord& rec)
    {
        move(rec, Where::frozen);
        frozen_.push_back(s);
    }

    bool pruned_by_incumbent(const NodeRecord& rec) const noexcept
    {
        return incumbent_ && rec.g + rec.h >= incumbent_->score;
    }

    /// Marks a node expanded and generates its successors. `on_improved`
    /// decides where a successor with a better g goes; it receives the
    /// successor record and returns the destination list.
    template <typename Placement>
    void expand_node(VarSet u, Placement&& on_improved)
    {
        auto& rec = node(u);
        if (rec.ever_expanded) ++stats_.reexpanded;
        rec.ever_expanded = true;
        rec.closed_iteration = iteration_;
        move(rec, Where::closed);
        ++stats_.expanded;
        const double g = rec.g;

        if (u == goal_) {
            consider_incumbent(u);
            return;
        }
        for (auto x : goal_ - u) {
            const auto& best = store_.best_score_unchecked(x, u);
            const auto succ = u.with(x);
            const double g2 = g + best.score;
            ++stats_.generated;
            auto [it, fresh] = nodes_.try_emplace(succ);
            auto& s = it->second;
            if (fresh) s.h = heuristic_.estimate(succ);
            if (!(g2 < s.g)) continue;

            if (succ == goal_ && goal_policy_ == GoalPolicy::on_generation) {
                s.g = g2;
                s.last_var = x;
                consider_incumbent(succ);
                continue;
            }
            const Where dest = on_improved(s);
            if (dest == Where::closed) continue;  // improvement ignored (weighted A* on closed nodes)
            s.g = g2;
            s.last_var = x;
            if (incumbent_ && g2 + s.h >= incumbent_->score) {
                move(s, Where::none);
                continue;
            }
            place(succ, s, dest);
        }
    }

    void place(VarSet s, NodeRecord& rec, Where dest)
    {
        move(rec, dest);
        switch (dest) {
        case Where::open:
            open_.push_back({rec.g + weight_ * rec.h, rec.g, s});
            std::push_heap(open_.begin(), open_.end(), OpenAfter{});
            break;
        case Where::frozen: frozen_.push_back(s); break;
        case Where::repair: repair_.push_back(s); break;
        default: return;
        }
        bound_.push_back({rec.g + rec.h, rec.g, s});
        std::push_heap(bound_.begin(), bound_.end(), BoundAfter{});
    }

    // ---- incumbent and bounds ----
    void consider_incumbent(VarSet goal)
    {
        auto path = reconstruct(store_, goal, [this](VarSet s) -> std::optional<VariableId> {
            auto it = nodes_.find(s);
            if (it == nodes_.end() || it->second.last_var == kNoVar) return std::nullopt;
            return it->second.last_var;
        });
        if (incumbent_ && !(path.score < incumbent_->score)) return;
        incumbent_ = Incumbent{std::move(path.network), path.score, elapsed_ms()};
        refresh_bound(false);
        emit(TraceEvent::incumbent_improved);
    }

    /// Lower bound = max(previous, static, min f over waiting nodes), capped
    /// at the incumbent. Emits boundImproved on a rise of at least 1e-9.
    void refresh_bound(bool emit_record = true)
    {
        double candidate = static_bound_;
        if (open_bound_valid_) {
            while (!bound_.empty()) {
                const auto& top = bound_.front();
                const auto& rec = nodes_.find(top.vars)->second;
                const bool live = (rec.where == Where::open || rec.where == Where::frozen || rec.where == Where::repair) &&
                                  rec.g == top.g;
                if (live) break;
                std::pop_heap(bound_.begin(), bound_.end(), BoundAfter{});
                bound_.pop_back();
            }
            const double waiting = bound_.empty() ? kInf : bound_.front().f;
            // every waiting node beyond the incumbent proves it optimal
            candidate = std::max(candidate, waiting);
        }
        if (incumbent_) candidate = std::min(candidate, incumbent_->score);
        if (!std::isfinite(candidate)) return;
        const double previous = lower_bound_;
        lower_bound_ = std::max(lower_bound_, candidate);
        if (emit_record && lower_bound_ >= previous + kBoundEps) emit(TraceEvent::bound_improved);
    }

    /// Declares the incumbent optimal (nothing left can beat it).
    void close_gap()
    {
        if (incumbent_) lower_bound_ = std::max(lower_bound_, incumbent_->score);
    }

    bool proved() const noexcept { return incumbent_ && lower_bound_ >= incumbent_->score; }

    double error_bound() const noexcept
    {
        if (!incumbent_) return kInf;
        if (lower_bound_ >= incumbent_->score) return 1.0;
        if (lower_bound_ <= 0.0) return kInf;
        return incumbent_->score / lower_bound_;
    }

    void emit(TraceEvent e)
    {
        TraceRecord r;
        r.elapsed_ms = elapsed_ms();
        r.event = e;
        if (incumbent_) r.incumbent_score = incumbent_->score;
        r.lower_bound = lower_bound_;
        r.error_bound = error_bound();
        r.expanded = stats_.expanded;
        trace_.push_back(r);
    }

    std::int64_t elapsed_ms() const
    {
        return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_time_).count();
    }

    void set_termination(Termination t) { termination_ = t; }
    std::optional<Termination> termination() const noexcept { return termination_; }

    SolveResult finish(Termination fallback)
    {
        const auto t = termination_.value_or(fallback);
        if (t == Termination::optimal) close_gap();
        emit(TraceEvent::terminated);
        SolveResult result;
        result.incumbent = incumbent_;
        result.lower_bound = lower_bound_;
        result.error_bound = error_bound();
        result.proved_optimal = proved();
        result.termination = result.proved_optimal ? Termination::optimal : t;
        result.trace = std::move(trace_);
        result.stats = stats_;
        return result;
    }

    std::size_t num_variables() const noexcept { return n_; }
    VarSet goal() const noexcept { return goal_; }

private:
    void move(NodeRecord& rec, Where to)
    {
        --count_[static_cast<int>(rec.where)];
        ++count_[static_cast<int>(to)];
        rec.where = to;
    }

    const PopsStore& store_;
    const Heuristic& heuristic_;
    SearchLimits limits_;
    GoalPolicy goal_policy_;
    bool open_bound_valid_;
    std::size_t n_;
    VarSet goal_;
    Clock::time_point start_time_;

    std::unordered_map<VarSet, NodeRecord> nodes_;
    std::vector<OpenEntry> open_;
    std::vector<BoundEntry> bound_;
    std::vector<VarSet> frozen_;
    std::vector<VarSet> repair_;
    // the none bucket is never read and may go negative
    std::int64_t count_[5] = {0, 0, 0, 0, 0};

    double weight_ = 1.0;
    std::uint32_t iteration_ = 0;
    double static_bound_ = 0.0;
    double lower_bound_ = 0.0;
    std::optional<Incumbent> incumbent_;
    std::optional<Termination> termination_;
    std::vector<TraceRecord> trace_;
    SearchStats stats_;
};

std::size_t successor_count(const Engine& e, VarSet u) { return e.num_variables() - u.size(); }

/// Plain best-first search that stops when the goal is expanded. With
/// weight 1 it is A*; otherwise weighted A*, which ignores better paths to
/// closed nodes.
SolveResult best_first(const PopsStore& store, const Heuristic& h, double weight, const SearchLimits& limits)
{
    const bool exact = weight == 1.0;
    Engine e(store, h, limits, GoalPolicy::on_expansion, exact);
    e.set_weight(weight);
    e.refresh_bound();
    while (auto top = e.peek_open()) {
        if (e.must_stop(successor_count(e, top->vars))) return e.finish(Termination::exhausted);
        e.pop_open();
        e.expand_node(top->vars, [](NodeRecord& s) { return s.where == Where::closed ? Where::closed : Where::open; });
        if (e.has_incumbent()) {
            if (!exact) e.raise_static_bound(e.incumbent_score() / weight);
            e.refresh_bound(false);
            return e.finish(exact ? Termination::optimal : Termination::exhausted);
        }
        e.refresh_bound();
    }
    return e.finish(Termination::exhausted);
}

}  // namespace

SolveResult astar(const PopsStore& store, const Heuristic& h, const SearchLimits& limits)
{
    return best_first(store, h, 1.0, limits);
}

SolveResult weighted_astar(const PopsStore& store, const Heuristic& h, double epsilon, const SearchLimits& limits)
{
    if (!(epsilon >= 1.0)) throw InvalidConfig("epsilon must be >= 1");
    return best_first(store, h, epsilon, limits);
}

SolveResult anytime_weighted_astar(const PopsStore& store, const Heuristic& h, double epsilon, const SearchLimits& limits)
{
    if (!(epsilon >= 1.0)) throw InvalidConfig("epsilon must be >= 1");
    Engine e(store, h, limits, GoalPolicy::on_generation, true);
    e.set_weight(epsilon);
    e.refresh_bound();
    while (auto top = e.peek_open()) {
        auto& rec = e.node(top->vars);
        if (e.pruned_by_incumbent(rec)) {
            e.pop_open();
            e.prune(rec);
            continue;
        }
        if (e.must_stop(successor_count(e, top->vars))) return e.finish(Termination::exhausted);
        e.pop_open();
        // reopening: closed nodes with a better path go back to open
        e.expand_node(top->vars, [](NodeRecord&) { return Where::open; });
        e.refresh_bound();
        if (e.proved()) return e.finish(Termination::optimal);
    }
    return e.finish(Termination::optimal);
}

SolveResult ara_star(const PopsStore& store, const Heuristic& h, double initial_epsilon, double epsilon_step,
                     const SearchLimits& limits)
{
    if (!(initial_epsilon >= 1.0)) throw InvalidConfig("epsilon must be >= 1");
    if (!(epsilon_step > 0.0)) throw InvalidConfig("epsilon step must be positive");
    Engine e(store, h, limits, GoalPolicy::on_generation, true);
    e.refresh_bound();
    for (std::uint32_t i = 0;; ++i) {
        double eps = initial_epsilon - static_cast<double>(i) * epsilon_step;
        if (eps < 1.0 + 1e-12) eps = 1.0;
        e.set_weight(eps);
        e.set_iteration(i + 1);
        e.rebuild_open_from(e.repair_list(), Where::repair);
        const std::uint32_t iteration = i + 1;
        while (auto top = e.peek_open()) {
            if (e.has_incumbent() && top->key >= e.incumbent_score()) break;
            auto& rec = e.node(top->vars);
            if (e.pruned_by_incumbent(rec)) {
                e.pop_open();
                e.prune(rec);
                continue;
            }
            if (e.must_stop(successor_count(e, top->vars))) return e.finish(Termination::exhausted);
            e.pop_open();
            e.expand_node(top->vars, [iteration](NodeRecord& s) {
                const bool done = s.where == Where::closed || s.where == Where::repair;
                return done && s.closed_iteration == iteration ? Where::repair : Where::open;
            });
            e.refresh_bound();
            if (e.proved()) return e.finish(Termination::optimal);
        }
        if (e.has_incumbent()) e.raise_static_bound(e.incumbent_score() / eps);
        e.refresh_bound(false);
        e.emit(TraceEvent::iteration_end);
        if (eps == 1.0 || e.proved()) return e.finish(Termination::optimal);
    }
}

SolveResult anytime_window_astar(const PopsStore& store, const Heuristic& h, std::size_t initial_window,
                                 std::size_t window_step, const SearchLimits& limits)
{
    if (window_step < 1) throw InvalidConfig("window step must be at least 1");
    Engine e(store, h, limits, GoalPolicy::on_expansion, true);
    e.refresh_bound();
    for (std::uint32_t j = 0;; ++j) {
        const std::int64_t window = static_cast<std::int64_t>(initial_window + j * window_step);
        const std::uint32_t iteration = j + 1;
        e.set_iteration(iteration);
        if (j > 0) e.rebuild_open_from(e.frozen_list(), Where::frozen);
        std::int64_t deepest = std::numeric_limits<std::int64_t>::min() / 2;
        while (auto top = e.peek_open()) {
            auto& rec = e.node(top->vars);
            if (e.pruned_by_incumbent(rec)) {
                e.pop_open();
                e.prune(rec);
                continue;
            }
            const auto layer = static_cast<std::int64_t>(top->vars.size());
            if (layer <= deepest - window) {
                e.pop_open();
                e.freeze(top->vars, rec);
                continue;
            }
            if (e.must_stop(successor_count(e, top->vars))) return e.finish(Termination::exhausted);
            e.pop_open();
            deepest = std::max(deepest, layer);
            e.expand_node(top->vars, [iteration](NodeRecord& s) {
                const bool done = s.where == Where::closed || s.where == Where::frozen;
                return done && s.closed_iteration == iteration ? Where::frozen : Where::open;
            });
            e.refresh_bound();
            if (e.proved()) return e.finish(Termination::optimal);
        }
        e.refresh_bound(false);
        e.emit(TraceEvent::iteration_end);
        if (e.frozen_count() == 0) return e.finish(Termination::optimal);
    }
}

std::unique_ptr<Heuristic> make_heuristic(const PopsStore& store, const HeuristicSpec& spec)
{
    switch (spec.kind) {
    case HeuristicSpec::Kind::simple: return std::make_unique<SimpleHeuristic>(store);
    case HeuristicSpec::Kind::zero: return std::make_unique<ZeroHeuristic>();
    case HeuristicSpec::Kind::pattern_database:
        return std::make_unique<PatternDatabase>(
            store, spec.groups.empty() ? default_partition(store.num_variables()) : spec.groups);
    }
    throw InvalidConfig("unknown heuristic");
}

SolveResult solve(const PopsStore& store, const SearchConfig& config, const Heuristic& h, std::stop_token stop)
{
    validate(config);
    const SearchLimits limits{config.time_limit_ms, config.node_limit, std::move(stop)};
    switch (config.algorithm) {
    case Algorithm::astar: return astar(store, h, limits);
    case Algorithm::wastar: return weighted_astar(store, h, config.epsilon, limits);
    case Algorithm::aweia: return anytime_weighted_astar(store, h, config.epsilon, limits);
    case Algorithm::ara: return ara_star(store, h, config.epsilon, config.epsilon_step, limits);
    case Algorithm::awina: return anytime_window_astar(store, h, config.window_init, config.window_step, limits);
    }
    throw InvalidConfig("unknown algorithm");
}

SolveResult solve(const PopsStore& store, const SearchConfig& config, std::stop_token stop)
{
    validate(config);
    auto h = make_heuristic(store, config.heuristic);
    return solve(store, config, *h, std::move(stop));
}

SolveResult solve(const Dataset& data, std::size_t max_parents, const SearchConfig& config, std::stop_token stop)
{
    return solve(PopsStore::from_data(data, max_parents), config, std::move(stop));
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace)
{
    fmt::memory_buffer buf;
    auto num = [](double v) { return std::isfinite(v) ? fmt::format("{:.6f}", v) : std::string(v > 0 ? "inf" : "-inf"); };
    fmt::format_to(std::back_inserter(buf), "elapsed_ms,event,incumbent_score,lower_bound,error_bound,expanded\n");
    for (const auto& r : trace) {
        fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{}\n", r.elapsed_ms, to_string(r.event),
                       r.incumbent_score ? num(*r.incumbent_score) : std::string(), num(r.lower_bound),
                       num(r.error_bound), r.expanded);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace bnsl
