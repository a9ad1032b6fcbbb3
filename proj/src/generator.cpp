#include <bnsl/errors.hpp>
#include <bnsl/generator.hpp>

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bnsl {

void validate(const GenConfig& config)
{
    if (config.num_variables < 1) throw InvalidConfig("need at least one variable");
    if (config.num_variables > kMaxVariables) throw TooManyVariables("too many variables for generation");
    if (config.max_parents < 1 || config.max_parents >= config.num_variables) {
        throw InvalidConfig("max parents must lie in [1, n)");
    }
    if (!(config.dirichlet_alpha > 0.0) || !std::isfinite(config.dirichlet_alpha)) {
        throw InvalidConfig("Dirichlet concentration must be positive");
    }
}

namespace {

std::vector<VarSet> children_of(const Network& net)
{
    std::vector<VarSet> children(net.num_variables());
    for (VariableId v = 0; v < net.num_variables(); ++v) {
        for (auto p : net.parents(v)) children[p] = children[p].with(v);
    }
    return children;
}

/// Variables reachable from `from` along directed arcs.
VarSet descendants(const std::vector<VarSet>& children, VariableId from)
{
    VarSet seen = VarSet::single(from);
    VarSet frontier = seen;
    while (!frontier.empty()) {
        VarSet next;
        for (auto v : frontier) next = next | children[v];
        frontier = next - seen;
        seen = seen | next;
    }
    return seen;
}

}  // namespace

bool is_connected(const Network& net)
{
    const auto n = net.num_variables();
    if (n <= 1) return true;
    std::vector<VarSet> adjacent(n);
    for (VariableId v = 0; v < n; ++v) {
        adjacent[v] = adjacent[v] | net.parents(v);
        for (auto p : net.parents(v)) adjacent[p] = adjacent[p].with(v);
    }
    VarSet seen = VarSet::single(0);
    VarSet frontier = seen;
    while (!frontier.empty()) {
        VarSet next;
        for (auto v : frontier) next = next | adjacent[v];
        frontier = next - seen;
        seen = seen | next;
    }
    return seen == VarSet::full(n);
}

Network random_dag(const GenConfig& config, Rng& rng)
{
    validate(config);
    const auto n = config.num_variables;
    Network net(n);
    for (VariableId v = 1; v < n; ++v) net.add_arc(v - 1, v);
    if (n < 2) return net;

    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::uniform_int_distribution<std::size_t> second(0, n - 2);
    for (std::size_t step = 0; step < config.steps(); ++step) {
        const auto i = static_cast<VariableId>(first(rng));
        auto j = static_cast<VariableId>(second(rng));
        if (j >= i) ++j;
        if (net.has_arc(i, j)) {
            net.remove_arc(i, j);
            if (!is_connected(net)) net.add_arc(i, j);
        } else {
            if (net.parents(j).size() >= config.max_parents) continue;
            // i -> j closes a cycle iff i is already reachable from j
            if (descendants(children_of(net), j).contains(i)) continue;
            net.add_arc(i, j);
        }
    }
    return net;
}

std::size_t cpt_row(const GeneratingNetwork& net, VariableId v, const std::vector<State>& states)
{
    std::size_t row = 0;
    for (auto p : net.structure.parents(v)) row = row * net.arities[p] + states[p];
    return row;
}

GeneratingNetwork sample_cpts(const Network& structure, double alpha, Rng& rng)
{
    topological_order(structure);
    if (!(alpha > 0.0)) throw InvalidConfig("Dirichlet concentration must be positive");
    const auto n = structure.num_variables();
    GeneratingNetwork net{structure, std::vector<std::uint32_t>(n, 2), {}};
    std::gamma_distribution<double> gamma(alpha, 1.0);
    net.cpts.resize(n);
    for (VariableId v = 0; v < n; ++v) {
        std::size_t rows = 1;
        for (auto p : structure.parents(v)) rows *= net.arities[p];
        auto& table = net.cpts[v];
        table.resize(rows);
        for (auto& row : table) {
            row.resize(net.arities[v]);
            double total = 0.0;
            for (auto& x : row) total += (x = gamma(rng));
            if (total > 0.0) {
                for (auto& x : row) x /= total;
            } else {
                for (auto& x : row) x = 1.0 / static_cast<double>(row.size());
            }
        }
    }
    return net;
}

Dataset logic_sample(const GeneratingNetwork& net, std::size_t num_records, Rng& rng)
{
    if (num_records < 1) throw InvalidConfig("need at least one record");
    const auto n = net.num_variables();
    const auto order = topological_order(net.structure);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<State>> columns(n, std::vector<State>(num_records));
    std::vector<State> states(n);
    for (std::size_t j = 0; j < num_records; ++j) {
        for (auto v : order) {
            const auto& row = net.cpts[v][cpt_row(net, v, states)];
            const double u = unit(rng);
            double cumulative = 0.0;
            State chosen = static_cast<State>(row.size() - 1);
            for (std::size_t s = 0; s < row.size(); ++s) {
                cumulative += row[s];
                if (u < cumulative) {
                    chosen = static_cast<State>(s);
                    break;
                }
            }
            // a zero-probability tail state is never the fallback
            while (chosen > 0 && row[chosen] == 0.0) --chosen;
            states[v] = chosen;
            columns[v][j] = chosen;
        }
    }
    std::vector<std::string> names;
    for (std::size_t v = 0; v < n; ++v) names.push_back("X" + std::to_string(v));
    return Dataset(std::move(names), std::move(columns), net.arities);
}

GeneratingNetwork generate_network(const GenConfig& config)
{
    Rng rng(config.seed);
    auto dag = random_dag(config, rng);
    return sample_cpts(dag, config.dirichlet_alpha, rng);
}

void write_generating_network(std::ostream& out, const GeneratingNetwork& net)
{
    write_structure(out, net.structure);
    fmt::memory_buffer buf;
    for (const auto& table : net.cpts) {
        for (const auto& row : table) {
            for (std::size_t s = 0; s < row.size(); ++s) {
                if (s) buf.push_back(' ');
                fmt::format_to(std::back_inserter(buf), "{}", row[s]);
            }
            buf.push_back('\n');
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

GeneratingNetwork read_generating_network(std::istream& in)
{
    auto structure = read_structure(in);
    const auto n = structure.num_variables();
    GeneratingNetwork net{structure, std::vector<std::uint32_t>(n, 2), {}};
    try {
        topological_order(structure);
    } catch (const CyclicStructure&) {
        throw ParseError("network file: structure is cyclic");
    }
    net.cpts.resize(n);
    std::string line;
    for (VariableId v = 0; v < n; ++v) {
        std::size_t rows = std::size_t{1} << structure.parents(v).size();
        net.cpts[v].resize(rows);
        for (auto& row : net.cpts[v]) {
            do {
                if (!std::getline(in, line)) throw ParseError("network file: truncated CPT section");
            } while (line.find_first_not_of(" \t\r") == std::string::npos);
            std::istringstream cells(line);
            double p = 0.0;
            while (cells >> p) row.push_back(p);
            if (!cells.eof()) throw ParseError("network file: bad probability in '" + line + "'");
            if (row.size() != 2) throw ParseError("network file: CPT rows must list 2 probabilities");
            double total = 0.0;
            for (auto x : row) {
                if (!(x >= 0.0 && x <= 1.0)) throw ParseError("network file: probability outside [0, 1]");
                total += x;
            }
            if (std::abs(total - 1.0) > 1e-6) throw ParseError("network file: CPT row does not sum to 1");
        }
    }
    return net;
}

GeneratingNetwork read_generating_network_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_generating_network(in);
}

}  // namespace bnsl
