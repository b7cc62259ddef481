#include "resfluor/output.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace resfluor {

namespace {

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return fmt_double(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else return std::to_string(v);
      },
      c);
}

nlohmann::ordered_json json_value(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else return v;
      },
      c);
}

}  // namespace

Cell cell(const std::optional<double>& x) { return x ? Cell{*x} : Cell{}; }

std::string render(const Table& table, const ExperimentConfig& cfg, Format format) {
  const auto config = cfg.resolved();
  if (format == Format::Csv) {
    std::ostringstream out;
    out << "# kind = " << table.kind << '\n';
    for (const auto& [k, v] : table.notes) out << "# " << k << " = " << csv_text(v) << '\n';
    for (const auto& [k, v] : config) out << "# config " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_text(row[i]);
      out << '\n';
    }
    return out.str();
  }

  nlohmann::ordered_json doc;
  doc["kind"] = table.kind;
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) doc["config"][k] = v;
  doc["notes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.notes) doc["notes"][k] = json_value(v);
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i)
      obj[table.columns[i]] = json_value(row[i]);
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

Table angle_scan_table(const AngleScan& scan) {
  Table t;
  t.kind = "scan-angle";
  t.columns.push_back("phi2_rad");
  for (int n : scan.n_atoms) t.columns.push_back("mu_norm_n" + std::to_string(n));
  for (std::size_t k = 0; k < scan.phi2.size(); ++k) {
    std::vector<Cell> row{scan.phi2[k]};
    for (const auto& col : scan.mu_normalized) row.emplace_back(col[k]);
    t.add(std::move(row));
  }
  if (scan.verify_deviation) t.notes["verify_max_deviation"] = *scan.verify_deviation;
  return t;
}

Table optimum_table(const std::vector<ScaleOptimum>& rows) {
  Table t;
  t.kind = "optimize";
  t.columns = {"n", "gamma_opt_lambda", "ideal_mu", "perfect_mu", "ideal_over_perfect",
               "delta_z_lambda", "verify_max_deviation"};
  for (const auto& r : rows)
    t.add({std::int64_t{r.n_atoms}, r.gamma_lambda, r.ideal_mu, r.perfect_mu,
           r.perfect_mu != 0.0 ? Cell{r.ideal_mu / r.perfect_mu} : Cell{}, r.delta_z_lambda,
           cell(r.verify_deviation)});
  return t;
}

Table monte_carlo_table(const std::vector<McReport>& rows) {
  Table t;
  t.kind = "mc";
  t.columns = {"n",         "samples",          "mean_mu",     "stderr_mu",   "mean_mu_normalized",
               "relative_negativity", "quantile_05", "quantile_95", "gamma_opt_lambda",
               "seed",      "ideal_mu",         "delta_z_lambda", "verify_max_deviation"};
  for (const auto& r : rows)
    t.add({std::int64_t{r.n_atoms}, std::uint64_t{r.samples}, r.mean_mu, r.stderr_mu,
           r.mean_mu_normalized, r.relative_negativity, r.quantile_05, r.quantile_95,
           r.gamma_opt_lambda, r.seed, r.ideal_mu, r.delta_z_lambda, cell(r.verify_deviation)});
  return t;
}

Table random_table(const std::vector<RandomEnsembleReport>& rows) {
  Table t;
  t.kind = "random";
  t.columns = {"n",        "samples",  "box_lambda", "mean_mu",       "stderr_mu",
               "lower_99", "upper_99", "regular_mu", "mean_positive", "seed"};
  for (const auto& r : rows)
    t.add({std::int64_t{r.n_atoms}, std::uint64_t{r.samples}, r.box_lambda, r.mean_mu, r.stderr_mu,
           r.lower_99, r.upper_99, r.regular_mu, r.mean_positive, r.seed});
  return t;
}

Table threshold_table(const std::vector<ThresholdRow>& rows) {
  Table t;
  t.kind = "threshold";
  t.columns = {"n", "gamma2", "detuning", "rabi_max", "growth", "expected_growth", "squeeze_rabi_max"};
  for (const auto& r : rows)
    t.add({std::int64_t{r.n_atoms}, r.gamma2, r.detuning, cell(r.rabi_max), cell(r.growth),
           cell(expected_growth(r.n_atoms, r.gamma2)),
           cell(r.squeeze_rabi_max)});
  return t;
}

}  // namespace resfluor
