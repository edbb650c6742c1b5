#pragma once

// Result emission. All floating-point output goes through one fixed format
// (12 significant digits, scientific) so identical runs produce byte-identical
// files. CSV carries provenance as '#'-prefixed metadata lines above the
// header; JSON carries the same metadata as a string map.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace nhq {

// %.11e with negative zero normalized to zero.
std::string format_number(double v);

struct ResultTable {
  std::string name;  // empty for single-table outputs
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // cells preformatted
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_csv(std::ostream& os, const Metadata& meta, const std::vector<ResultTable>& tables);
void write_json(std::ostream& os, const Metadata& meta, const std::vector<ResultTable>& tables);

}  // namespace nhq
