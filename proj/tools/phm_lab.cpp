// phm-lab: command-line front end.
//
//   phm-lab run --scenario <id> [--param k=v]... [--checks a,b,c] [--points N]
//           [--seed S] [--tol T] [--format json|text] [--out FILE] [--threads N]
//   phm-lab run --config <file>
//   phm-lab catalog list
//   phm-lab catalog show <id>
//
// Exit codes: 0 every check passed (or was not applicable), 1 some check
// failed or was indeterminate, 2 configuration/usage error, 3 engine error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "phm/config.hpp"

namespace {

int run_command(const std::string& config_file, const std::string& scenario,
                const std::vector<std::string>& params, const std::string& checks, int points,
                long long seed, double tol, double fail_threshold, const std::string& format,
                const std::string& out, int threads) {
  nlohmann::json doc;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) {
      std::cerr << "error: cannot open config file '" << config_file << "'\n";
      return 2;
    }
    try {
      in >> doc;
    } catch (const std::exception& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
      return 2;
    }
  } else if (!scenario.empty()) {
    doc["scenario"] = scenario;
  } else {
    std::cerr << "error: either --config or --scenario is required\n";
    return 2;
  }
  if (!params.empty()) {
    nlohmann::json p = doc.count("params") ? doc["params"] : nlohmann::json::object();
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --param expects key=value, got '" << kv << "'\n";
        return 2;
      }
      try {
        p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        std::cerr << "error: --param value in '" << kv << "' is not a number\n";
        return 2;
      }
    }
    doc["params"] = p;
  }
  if (!checks.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    std::string cur;
    for (char c : checks + ",") {
      if (c == ',') {
        if (!cur.empty()) arr.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    doc["checks"] = arr;
  }
  if (points > 0) doc["points"] = points;
  if (seed >= 0) doc["seed"] = seed;
  if (tol > 0) doc["tol"] = tol;
  if (fail_threshold > 0) doc["fail_threshold"] = fail_threshold;
  if (!format.empty()) doc["format"] = format;
  if (threads > 0) doc["threads"] = threads;

  phm::RunConfig cfg;
  try {
    cfg = phm::load_config(doc);
  } catch (const phm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const phm::EngineInconsistencyError& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return 3;
  }

  std::vector<phm::CheckReport> reports;
  try {
    reports = phm::run_checks(cfg);
  } catch (const std::exception& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return 3;
  }
  const std::string text = phm::emit_report(cfg, reports);
  if (out.empty()) {
    std::cout << text;
    if (cfg.format == "json") std::cout << "\n";
  } else {
    std::ofstream of(out, std::ios::binary);
    if (!of) {
      std::cerr << "error: cannot write '" << out << "'\n";
      return 2;
    }
    of << text;
    if (cfg.format == "json") of << "\n";
  }
  for (const auto& r : reports) {
    if (r.name.find('.') != std::string::npos) continue;  // informational sub-rows
    if (r.verdict == phm::Verdict::Fail || r.verdict == phm::Verdict::Indeterminate) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of pseudo-harmonic morphism geometry"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run checks on a scenario");
  std::string config_file, scenario, checks, format, out;
  std::vector<std::string> params;
  int points = -1, threads = -1;
  long long seed = -1;
  double tol = -1, fail_threshold = -1;
  run->add_option("--config", config_file, "JSON config file");
  run->add_option("--scenario", scenario, "catalog scenario id");
  run->add_option("--param", params, "catalog parameter key=value (repeatable)");
  run->add_option("--checks", checks, "comma-separated check names");
  run->add_option("--points", points, "sample point count");
  run->add_option("--seed", seed, "sampling seed");
  run->add_option("--tol", tol, "pass tolerance");
  run->add_option("--fail-threshold", fail_threshold, "failure threshold");
  run->add_option("--format", format, "report format: json | text");
  run->add_option("--out", out, "write the report to a file instead of stdout");
  run->add_option("--threads", threads, "worker count (report bytes are unaffected)");

  auto* catalog = app.add_subcommand("catalog", "catalog inspection");
  auto* list = catalog->add_subcommand("list", "list catalog ids");
  auto* show = catalog->add_subcommand("show", "describe one catalog entry");
  std::string show_id;
  show->add_option("id", show_id, "catalog id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*list) {
    for (const auto& id : phm::catalog_ids()) std::cout << id << "\n";
    return 0;
  }
  if (*show) {
    try {
      const std::string doc = phm::catalog_doc(show_id);
      const phm::Scenario s = phm::catalog_lookup(show_id, {}, false);
      std::cout << show_id << "\n" << doc << "\n\n";
      std::cout << "chart: " << s.source.label << "  dim " << s.source.dim() << "\n";
      std::cout << "coords:";
      for (const auto& c : s.source.coords) std::cout << " " << c;
      std::cout << "\nbox:";
      for (const auto& [lo, hi] : s.source.box.range) std::cout << " [" << lo << ", " << hi << "]";
      std::cout << "\nmetric:\n";
      for (const auto& row : s.source.metric) {
        std::cout << "  ";
        for (size_t j = 0; j < row.size(); ++j)
          std::cout << (j ? ", " : "") << row[j].print(s.source.coords);
        std::cout << "\n";
      }
      if (s.has_map()) {
        std::cout << "map ->" << " " << s.target->chart.label << ":";
        for (const auto& c : s.map_components) std::cout << " " << c.print(s.source.coords);
        std::cout << "\n";
      }
      if (s.acs) {
        std::cout << "xi:";
        for (const auto& c : s.acs->xi) std::cout << " " << c.print(s.source.coords);
        std::cout << "\neta:";
        for (const auto& c : s.acs->eta) std::cout << " " << c.print(s.source.coords);
        std::cout << "\n";
      }
      std::cout << "expected flags:";
      for (const auto& [k, v] : s.flags) std::cout << " " << k << "=" << (v ? "yes" : "no");
      std::cout << "\nnotes: " << s.notes << "\n";
      return 0;
    } catch (const phm::CatalogError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  if (*run)
    return run_command(config_file, scenario, params, checks, points, seed, tol, fail_threshold,
                       format, out, threads);
  return 2;
}
