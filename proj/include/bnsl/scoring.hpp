#pragma once

#include <bnsl/dataset.hpp>
#include <bnsl/network.hpp>
#include <bnsl/var_set.hpp>

#include <cstdint>
#include <vector>

namespace bnsl {

/// Joint counts of one child against the observed configurations of its
/// parents. Unobserved parent configurations have no row.
struct CountTable {
    struct Row {
        std::vector<State> parent_states;  ///< one value per parent, ascending parent index
        std::vector<std::uint64_t> counts;  ///< indexed by child state
        std::uint64_t marginal = 0;
    };

    VariableId child = 0;
    VarSet parents;
    std::vector<Row> rows;  ///< sorted by parent_states
};

CountTable contingency(const Dataset& data, VariableId child, VarSet parents);

/// MDL local score in bits: score = entropy + log2(N) / 2 * num_params.
struct LocalScore {
    VariableId child = 0;
    VarSet parents;
    double score = 0.0;
    double entropy = 0.0;     ///< H(X, PA), conditional log-loss in bits
    double num_params = 0.0;  ///< K(X, PA) = (r_X - 1) * prod r_parent
};

LocalScore mdl_local(const Dataset& data, VariableId child, VarSet parents);

/// Sum of local scores; throws CyclicStructure for a cyclic network.
double mdl_network(const Dataset& data, const Network& net);

/// A decomposable local score. MDL is the only built-in; the parent-set
/// enumeration accepts any implementation.
class LocalScoreFunction {
public:
    virtual ~LocalScoreFunction() = default;
    virtual std::size_t num_variables() const = 0;
    virtual double score(VariableId child, VarSet parents) const = 0;
};

class MdlScore final : public LocalScoreFunction {
public:
    explicit MdlScore(const Dataset& data) : data_(data) {}
    std::size_t num_variables() const override { return data_.num_variables(); }
    double score(VariableId child, VarSet parents) const override { return mdl_local(data_, child, parents).score; }
    const Dataset& data() const noexcept { return data_; }

private:
    const Dataset& data_;
};

namespace detail {

/// Per-record parent configuration keys, built one parent at a time. Keys
/// are re-ranked densely when the mixed-radix space would grow too large.
struct ConfigKeys {
    std::vector<std::uint64_t> keys;
    std::uint64_t space = 1;
};

ConfigKeys empty_config_keys(std::size_t num_records);
ConfigKeys extend_config_keys(const ConfigKeys& base, const Dataset& data, VariableId parent);

/// Conditional entropy in bits of `child` given precomputed parent keys.
/// `scratch` is reused between calls to avoid reallocation.
double conditional_entropy(const ConfigKeys& keys, const Dataset& data, VariableId child,
                           std::vector<std::uint64_t>& scratch);

}  // namespace detail

}  // namespace bnsl
