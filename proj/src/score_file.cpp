#include <bnsl/errors.hpp>
#include <bnsl/score_file.hpp>

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace bnsl {

void write_scores(std::ostream& out, const std::vector<std::string>& names,
                  const std::vector<std::vector<ParentSetScore>>& lists)
{
    if (names.size() != lists.size()) throw DimensionMismatch("name count differs from list count");
    for (const auto& name : names) {
        if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
            throw ParseError("variable name '" + name + "' cannot be written to a score file");
        }
    }
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "{}\n", lists.size());
    for (std::size_t v = 0; v < lists.size(); ++v) {
        fmt::format_to(std::back_inserter(buf), "{} {}\n", names[v], lists[v].size());
        for (const auto& entry : lists[v]) {
            fmt::format_to(std::back_inserter(buf), "{:.6f} {}", entry.score, entry.parents.size());
            for (auto p : entry.parents) fmt::format_to(std::back_inserter(buf), " {}", names.at(p));
            buf.push_back('\n');
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_scores(std::ostream& out, const PopsStore& store)
{
    std::vector<std::vector<ParentSetScore>> lists;
    for (VariableId v = 0; v < store.num_variables(); ++v) lists.push_back(store.parent_sets(v));
    write_scores(out, store.names(), lists);
}

PopsStore read_scores(std::istream& in)
{
    auto fail = [](const std::string& what) -> ParseError { return ParseError("score file: " + what); };
    std::size_t n = 0;
    if (!(in >> n)) throw fail("missing variable count");
    if (n > kMaxVariables) throw TooManyVariables("score file has " + std::to_string(n) + " variables");

    struct RawEntry {
        double score;
        std::vector<std::string> parents;
    };
    std::vector<std::string> names(n);
    std::vector<std::vector<RawEntry>> raw(n);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t count = 0;
        if (!(in >> names[v] >> count)) throw fail("missing header for variable " + std::to_string(v));
        raw[v].reserve(count);
        for (std::size_t e = 0; e < count; ++e) {
            std::string score_token;
            std::size_t k = 0;
            if (!(in >> score_token >> k)) throw fail("truncated entry list for " + names[v]);
            RawEntry entry{};
            try {
                std::size_t used = 0;
                entry.score = std::stod(score_token, &used);
                if (used != score_token.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw fail("bad score '" + score_token + "'");
            }
            if (k >= kMaxVariables) throw fail("parent count out of range");
            entry.parents.resize(k);
            for (auto& p : entry.parents) {
                if (!(in >> p)) throw fail("truncated parent list for " + names[v]);
            }
            raw[v].push_back(std::move(entry));
        }
    }
    std::string extra;
    if (in >> extra) throw fail("unexpected trailing content '" + extra + "'");

    std::unordered_map<std::string, VariableId> index;
    for (VariableId v = 0; v < n; ++v) {
        if (!index.emplace(names[v], v).second) throw fail("duplicate variable name " + names[v]);
    }
    std::vector<std::vector<ParentSetScore>> lists(n);
    for (VariableId v = 0; v < n; ++v) {
        for (const auto& entry : raw[v]) {
            VarSet parents;
            for (const auto& p : entry.parents) {
                auto it = index.find(p);
                if (it == index.end()) throw fail("unknown parent name " + p);
                if (parents.contains(it->second)) throw fail("repeated parent " + p);
                parents = parents.with(it->second);
            }
            lists[v].push_back({parents, entry.score});
        }
    }
    try {
        return PopsStore(std::move(lists), std::move(names));
    } catch (const MissingEmptySet& e) {
        throw fail(e.what());
    } catch (const ChildInParents& e) {
        throw fail(e.what());
    }
}

PopsStore read_scores_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_scores(in);
}

PopsStore round_trip(const PopsStore& store)
{
    std::stringstream buf;
    write_scores(buf, store);
    auto copy = read_scores(buf);
    return PopsStore(
        [&] {
            std::vector<std::vector<ParentSetScore>> lists;
            for (VariableId v = 0; v < copy.num_variables(); ++v) lists.push_back(copy.parent_sets(v));
            return lists;
        }(),
        copy.names(), store.num_records());
}

}  // namespace bnsl
