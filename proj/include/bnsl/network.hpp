#pragma once

#include <bnsl/var_set.hpp>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace bnsl {

/// A directed graph over n variables given as one parent set per variable.
/// Self-parents are rejected on assignment; acyclicity is checked by
/// topological_order, so a Network may hold a cyclic candidate.
class Network {
public:
    Network() = default;
    explicit Network(std::size_t n);
    explicit Network(std::vector<VarSet> parents);

    std::size_t num_variables() const noexcept { return parents_.size(); }

    VarSet parents(VariableId v) const { return parents_[v]; }
    const std::vector<VarSet>& all_parents() const noexcept { return parents_; }

    void set_parents(VariableId v, VarSet parents);
    void add_arc(VariableId from, VariableId to);
    void remove_arc(VariableId from, VariableId to);
    bool has_arc(VariableId from, VariableId to) const { return parents_[to].contains(from); }

    std::size_t num_arcs() const noexcept;

    friend bool operator==(const Network&, const Network&) = default;

private:
    std::vector<VarSet> parents_;
};

/// Kahn's algorithm, smallest ready index first. Throws CyclicStructure.
std::vector<VariableId> topological_order(const Network& net);

bool is_acyclic(const Network& net);

/// Writes `n`, then one `i | p1 p2 ...` line per variable.
void write_structure(std::ostream& out, const Network& net);

/// Reads the structure lines of a network file; any trailing lines (for
/// example CPT rows) are left unread.
Network read_structure(std::istream& in);
Network read_structure_file(const std::string& path);

}  // namespace bnsl
