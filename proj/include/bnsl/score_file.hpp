#pragma once

#include <bnsl/pops.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace bnsl {

// Score file layout (whitespace separated):
//   n
//   NAME COUNT            once per variable
//   SCORE K P1 ... PK     COUNT lines; parents by name, score with 6 decimals

void write_scores(std::ostream& out, const std::vector<std::string>& names,
                  const std::vector<std::vector<ParentSetScore>>& lists);
void write_scores(std::ostream& out, const PopsStore& store);

/// Parses a score file into a pruned store. Throws ParseError.
PopsStore read_scores(std::istream& in);
PopsStore read_scores_file(const std::string& path);

/// Store as it reads back after a write; the 6-decimal rounding applied.
PopsStore round_trip(const PopsStore& store);

}  // namespace bnsl
