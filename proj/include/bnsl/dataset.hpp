#pragma once

#include <bnsl/var_set.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bnsl {

using State = std::uint32_t;

/// N complete records over n discrete variables. Stored column-major since
/// counting walks one column at a time. Immutable after construction.
class Dataset {
public:
    /// `columns[i][j]` is the state of variable i in record j. Arities are
    /// inferred as max state + 1, floored at 2.
    Dataset(std::vector<std::string> names, std::vector<std::vector<State>> columns);

    /// Same, with explicit arities; every state must be below its arity.
    Dataset(std::vector<std::string> names, std::vector<std::vector<State>> columns,
            std::vector<std::uint32_t> arities);

    std::size_t num_variables() const noexcept { return columns_.size(); }
    std::size_t num_records() const noexcept { return num_records_; }

    std::uint32_t arity(VariableId v) const { return arities_[v]; }
    const std::vector<std::uint32_t>& arities() const noexcept { return arities_; }
    const std::string& name(VariableId v) const { return names_[v]; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    const std::vector<State>& column(VariableId v) const { return columns_[v]; }
    State at(std::size_t record, VariableId v) const { return columns_[v][record]; }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<State>> columns_;
    std::vector<std::uint32_t> arities_;
    std::size_t num_records_ = 0;
};

/// Reads the header-plus-integer-rows CSV format. Throws ParseError on
/// malformed rows or non-integer cells and EmptyDataset when no records.
Dataset load_dataset(std::istream& in);
Dataset load_dataset_file(const std::string& path);

/// Like load_dataset, but each column's cell labels are mapped to dense
/// states by order of first appearance, so string-labeled data loads too.
Dataset load_categorical_dataset(std::istream& in);

/// Writes the canonical CSV form: header line, then one line per record.
void write_dataset(std::ostream& out, const Dataset& data);
void write_dataset_file(const std::string& path, const Dataset& data);

}  // namespace bnsl
