#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "resfluor/config.hpp"
#include "resfluor/experiment.hpp"

namespace resfluor {

/// One value in a result table; monostate renders as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::string kind;  // subcommand that produced it
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::map<std::string, Cell> notes;  // run-level scalars
  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

enum class Format { Csv, Json };

/// CSV: '#' lines carrying kind, notes and the resolved config, then the header
/// and rows. JSON: {"kind", "config", "notes", "rows": [{column: value}]}.
/// Doubles are printed with round-trip precision; output is byte-stable.
std::string render(const Table& table, const ExperimentConfig& cfg, Format format);

Cell cell(const std::optional<double>& x);

Table angle_scan_table(const AngleScan& scan);
Table optimum_table(const std::vector<ScaleOptimum>& rows);
Table monte_carlo_table(const std::vector<McReport>& rows);
Table random_table(const std::vector<RandomEnsembleReport>& rows);
Table threshold_table(const std::vector<ThresholdRow>& rows);

}  // namespace resfluor
