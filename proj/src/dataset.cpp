#include <bnsl/dataset.hpp>
#include <bnsl/errors.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace bnsl {

namespace {

constexpr State kMaxState = 65535;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

/// Shared line reader; `on_row` receives the split cells of each record.
template <typename RowFn>
std::vector<std::string> read_csv(std::istream& in, RowFn&& on_row)
{
    std::string line;
    std::vector<std::string> names;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_cells(line);
        if (!have_header) {
            for (auto c : cells) names.emplace_back(c);
            have_header = true;
            continue;
        }
        if (cells.size() != names.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(names.size()) +
                             " cells, found " + std::to_string(cells.size()));
        }
        on_row(cells, line_no);
    }
    if (!have_header) throw EmptyDataset("dataset has no header line");
    return names;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<State>> columns)
    : names_(std::move(names)), columns_(std::move(columns))
{
    if (names_.size() != columns_.size()) throw DimensionMismatch("name count differs from column count");
    if (columns_.size() > kMaxVariables) {
        throw TooManyVariables(std::to_string(columns_.size()) + " variables exceeds the limit of " +
                               std::to_string(kMaxVariables));
    }
    num_records_ = columns_.empty() ? 0 : columns_.front().size();
    arities_.reserve(columns_.size());
    for (const auto& col : columns_) {
        if (col.size() != num_records_) throw DimensionMismatch("columns have different lengths");
        State top = col.empty() ? 0 : *std::max_element(col.begin(), col.end());
        arities_.push_back(std::max<std::uint32_t>(2, top + 1));
    }
    if (num_records_ == 0) throw EmptyDataset("dataset has no records");
}

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<State>> columns,
                 std::vector<std::uint32_t> arities)
    : Dataset(std::move(names), std::move(columns))
{
    if (arities.size() != arities_.size()) throw DimensionMismatch("arity count differs from column count");
    for (std::size_t i = 0; i < arities.size(); ++i) {
        if (arities[i] < 2) throw ParseError("declared arity below 2 for column " + names_[i]);
        const auto& col = columns_[i];
        if (std::any_of(col.begin(), col.end(), [&](State s) { return s >= arities[i]; })) {
            throw ParseError("column " + names_[i] + " has a state outside its declared arity");
        }
    }
    arities_ = std::move(arities);
}

Dataset load_dataset(std::istream& in)
{
    std::vector<std::vector<State>> columns;
    auto names = read_csv(in, [&](const std::vector<std::string_view>& cells, std::size_t line_no) {
        if (columns.empty()) columns.resize(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            auto cell = cells[i];
            State value = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw ParseError("line " + std::to_string(line_no) + ": cell '" + std::string(cell) +
                                 "' is not a non-negative integer");
            }
            if (value > kMaxState) {
                throw ParseError("line " + std::to_string(line_no) + ": state " + std::string(cell) + " too large");
            }
            columns[i].push_back(value);
        }
    });
    if (columns.empty()) throw EmptyDataset("dataset has no records");
    return Dataset(std::move(names), std::move(columns));
}

Dataset load_dataset_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return load_dataset(in);
}

Dataset load_categorical_dataset(std::istream& in)
{
    std::vector<std::vector<State>> columns;
    std::vector<std::unordered_map<std::string, State>> labels;
    auto names = read_csv(in, [&](const std::vector<std::string_view>& cells, std::size_t) {
        if (columns.empty()) {
            columns.resize(cells.size());
            labels.resize(cells.size());
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            auto [it, inserted] = labels[i].try_emplace(std::string(cells[i]), static_cast<State>(labels[i].size()));
            columns[i].push_back(it->second);
        }
    });
    if (columns.empty()) throw EmptyDataset("dataset has no records");
    return Dataset(std::move(names), std::move(columns));
}

void write_dataset(std::ostream& out, const Dataset& data)
{
    const auto n = data.num_variables();
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out << ',';
        out << data.name(static_cast<VariableId>(i));
    }
    out << '\n';
    std::string line;
    char buf[16];
    for (std::size_t j = 0; j < data.num_records(); ++j) {
        line.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (i) line.push_back(',');
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, data.at(j, static_cast<VariableId>(i)));
            line.append(buf, ptr);
        }
        line.push_back('\n');
        out << line;
    }
}

void write_dataset_file(const std::string& path, const Dataset& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    write_dataset(out, data);
}

}  // namespace bnsl
