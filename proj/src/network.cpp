#include <bnsl/errors.hpp>
#include <bnsl/network.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bnsl {

Network::Network(std::size_t n) : parents_(n)
{
    if (n > kMaxVariables) throw TooManyVariables("network exceeds " + std::to_string(kMaxVariables) + " variables");
}

Network::Network(std::vector<VarSet> parents) : Network(parents.size())
{
    for (std::size_t v = 0; v < parents.size(); ++v) set_parents(static_cast<VariableId>(v), parents[v]);
}

void Network::set_parents(VariableId v, VarSet parents)
{
    if (v >= parents_.size()) throw InvalidStructure("variable index out of range");
    if (parents.contains(v)) throw InvalidStructure("variable " + std::to_string(v) + " is its own parent");
    if (!parents.is_subset_of(VarSet::full(parents_.size()))) throw InvalidStructure("parent index out of range");
    parents_[v] = parents;
}

namespace {

void check_arc(VariableId from, VariableId to, std::size_t n)
{
    if (from >= n || to >= n) throw InvalidStructure("arc endpoint out of range");
}

}  // namespace

void Network::add_arc(VariableId from, VariableId to)
{
    check_arc(from, to, parents_.size());
    set_parents(to, parents_[to].with(from));
}

void Network::remove_arc(VariableId from, VariableId to)
{
    check_arc(from, to, parents_.size());
    set_parents(to, parents_[to].without(from));
}

std::size_t Network::num_arcs() const noexcept
{
    std::size_t total = 0;
    for (auto p : parents_) total += p.size();
    return total;
}

std::vector<VariableId> topological_order(const Network& net)
{
    const auto n = net.num_variables();
    std::vector<VariableId> order;
    order.reserve(n);
    VarSet placed;
    // n is at most 64, so a quadratic scan is cheaper than building child lists.
    while (order.size() < n) {
        bool progressed = false;
        for (VariableId v = 0; v < n; ++v) {
            if (!placed.contains(v) && net.parents(v).is_subset_of(placed)) {
                order.push_back(v);
                placed = placed.with(v);
                progressed = true;
                break;
            }
        }
        if (!progressed) throw CyclicStructure("network contains a directed cycle");
    }
    return order;
}

bool is_acyclic(const Network& net)
{
    try {
        topological_order(net);
        return true;
    } catch (const CyclicStructure&) {
        return false;
    }
}

void write_structure(std::ostream& out, const Network& net)
{
    out << net.num_variables() << '\n';
    for (VariableId v = 0; v < net.num_variables(); ++v) {
        out << v << " |";
        for (auto p : net.parents(v)) out << ' ' << p;
        out << '\n';
    }
}

Network read_structure(std::istream& in)
{
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    {
        std::istringstream head(line);
        if (!(head >> n)) throw ParseError("network file: missing variable count");
    }
    Network net(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::getline(in, line)) throw ParseError("network file: truncated structure section");
        auto bar = line.find('|');
        if (bar == std::string::npos) throw ParseError("network file: expected 'i | parents', got '" + line + "'");
        std::istringstream lhs(line.substr(0, bar));
        std::size_t v = 0;
        if (!(lhs >> v) || v != k) throw ParseError("network file: structure lines must list variables in order");
        std::istringstream rhs(line.substr(bar + 1));
        VarSet parents;
        std::string token;
        while (rhs >> token) {
            std::size_t p = 0;
            try {
                std::size_t used = 0;
                p = std::stoul(token, &used);
                if (used != token.size()) throw ParseError("");
            } catch (const std::exception&) {
                throw ParseError("network file: bad parent index '" + token + "'");
            }
            if (p >= n) throw ParseError("network file: parent index out of range");
            parents = parents.with(static_cast<VariableId>(p));
        }
        try {
            net.set_parents(static_cast<VariableId>(k), parents);
        } catch (const InvalidStructure& e) {
            throw ParseError(std::string("network file: ") + e.what());
        }
    }
    return net;
}

Network read_structure_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_structure(in);
}

}  // namespace bnsl
