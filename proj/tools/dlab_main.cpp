// dlab: command-line front end for the surface/automorphism/growth toolkit.
//
// Subcommands:
//   tchar     growth-characteristic table over a geometric radius schedule
//   check     run one named verification experiment, or all of them
//   word      apply / reduce / normalform on JSON-encoded words
//   jacobian  chart Jacobian of a word at a point
//
// Exit codes: 0 success (and all checks passed), 1 a check failed,
// 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dlab/checks.hpp"
#include "dlab/complex_literal.hpp"
#include "dlab/nevanlinna.hpp"
#include "dlab/poly.hpp"
#include "dlab/surface.hpp"
#include "dlab/surface_expr.hpp"
#include "dlab/word_json.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

dlab::SurfacePoint parse_point(const std::string& text) {
  const auto parts = dlab::parse_complex_list(text);
  if (parts.size() != 3)
    throw std::invalid_argument("--point needs three comma-separated complex literals");
  return {parts[0], parts[1], parts[2]};
}

ordered_json point_to_json(const dlab::SurfacePoint& p) {
  return ordered_json{{"x", dlab::format_complex(p.x)},
                      {"y", dlab::format_complex(p.y)},
                      {"z", dlab::format_complex(p.z)}};
}

dlab::Word load_word(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open word file: " + path);
  json j;
  in >> j;
  return dlab::word_from_json(j);
}

// "key=value" pairs; numeric values become JSON numbers.
json parse_params(const std::vector<std::string>& params) {
  json config = json::object();
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--param expects key=value, got: " + kv);
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double num = std::stod(value, &used);
      if (used == value.size()) {
        config[key] = num;
        continue;
      }
    } catch (const std::exception&) {
    }
    config[key] = value;
  }
  return config;
}

struct TcharOptions {
  std::string poly;
  std::string expr;
  double r_start = 100.0;
  double factor = 10.0;
  int steps = 1;
  std::int64_t samples = 200000;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string format = "csv";
};

int run_tchar(const TcharOptions& opt) {
  const dlab::Danielewski S(dlab::ComplexPoly::parse(opt.poly));
  const dlab::SurfaceFunction F = dlab::parse_surface_expr(opt.expr);
  const dlab::RSchedule sched(opt.r_start, opt.factor, opt.steps);

  std::vector<dlab::CharacteristicEstimate> rows;
  for (double r : sched.grid())
    rows.push_back(dlab::characteristic(S, F, r, opt.samples, opt.seed, opt.workers));

  if (opt.format == "json") {
    ordered_json out = ordered_json::array();
    for (const auto& e : rows)
      out.push_back(ordered_json{{"r", e.r},
                                 {"mean", e.mean},
                                 {"stderr", e.std_error},
                                 {"n_samples", e.n_samples},
                                 {"n_skipped", e.n_skipped},
                                 {"seed", e.seed},
                                 {"valid", e.valid}});
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << dlab::characteristic_csv_header() << "\n";
    for (const auto& e : rows) std::cout << dlab::characteristic_csv_row(e) << "\n";
  }
  for (const auto& e : rows)
    if (!e.valid)
      std::cerr << "warning: estimate at r=" << e.r
                << " skipped more than 1% of draws\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Danielewski surface toolkit: overshear words and growth estimates"};
  app.require_subcommand(1);

  // tchar
  TcharOptions tchar;
  auto* tchar_cmd =
      app.add_subcommand("tchar", "characteristic table over a radius schedule");
  tchar_cmd->add_option("--poly", tchar.poly,
                        "surface polynomial, ascending coefficients")->required();
  tchar_cmd->add_option("--expr", tchar.expr, "expression in x, y, z")->required();
  tchar_cmd->add_option("--r-start", tchar.r_start, "first radius (> 0)");
  tchar_cmd->add_option("--factor", tchar.factor, "grid factor (> 1)");
  tchar_cmd->add_option("--steps", tchar.steps, "grid length (>= 1)");
  tchar_cmd->add_option("--samples", tchar.samples, "draws per radius (>= 100)");
  tchar_cmd->add_option("--seed", tchar.seed, "random seed (default 0)");
  tchar_cmd->add_option("--workers", tchar.workers, "worker threads (0 = auto)");
  tchar_cmd->add_option("--format", tchar.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // check
  std::string check_name;
  bool check_all = false;
  bool check_list = false;
  std::uint64_t check_seed = 0;
  std::vector<std::string> check_params;
  auto* check_cmd = app.add_subcommand("check", "run verification experiments");
  check_cmd->add_option("--name", check_name, "experiment name");
  check_cmd->add_flag("--all", check_all, "run the whole registry");
  check_cmd->add_flag("--list", check_list, "list experiment names");
  check_cmd->add_option("--seed", check_seed, "random seed (default 0)");
  check_cmd->add_option("--param", check_params, "config override key=value");

  // word apply|reduce|normalform
  auto* word_cmd = app.add_subcommand("word", "operate on JSON-encoded words");
  word_cmd->require_subcommand(1);
  std::string word_file, word_poly, word_point;

  auto* apply_cmd = word_cmd->add_subcommand("apply", "apply a word to a point");
  apply_cmd->add_option("--file", word_file, "word JSON file")->required();
  apply_cmd->add_option("--poly", word_poly, "surface polynomial")->required();
  apply_cmd->add_option("--point", word_point, "point as x,y,z")->required();

  auto* reduce_cmd = word_cmd->add_subcommand("reduce", "reduce a word");
  reduce_cmd->add_option("--file", word_file, "word JSON file")->required();

  auto* normal_cmd =
      word_cmd->add_subcommand("normalform", "conjugate into alternating form");
  normal_cmd->add_option("--file", word_file, "word JSON file")->required();

  // jacobian
  std::string jac_file, jac_poly, jac_point;
  double jac_step = 1e-5;
  auto* jac_cmd = app.add_subcommand("jacobian", "chart Jacobian of a word");
  jac_cmd->add_option("--file", jac_file, "word JSON file")->required();
  jac_cmd->add_option("--poly", jac_poly, "surface polynomial")->required();
  jac_cmd->add_option("--point", jac_point, "point as x,y,z")->required();
  jac_cmd->add_option("--step", jac_step, "relative differentiation step");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tchar_cmd->parsed()) {
      if (!(tchar.r_start > 0.0) || !(tchar.factor > 1.0) || tchar.steps < 1 ||
          tchar.samples < 100) {
        std::cerr << "tchar: need r-start > 0, factor > 1, steps >= 1, samples >= 100\n";
        return kExitUsage;
      }
      return run_tchar(tchar);
    }

    if (check_cmd->parsed()) {
      if (check_list) {
        for (const auto& name : dlab::check_names()) std::cout << name << "\n";
        return kExitOk;
      }
      const json config = parse_params(check_params);
      if (check_all) {
        ordered_json out = ordered_json::array();
        bool all_pass = true;
        for (const auto& name : dlab::check_names()) {
          const auto rep = dlab::run_check(name, config, check_seed);
          all_pass = all_pass && rep.pass;
          out.push_back(dlab::report_to_json(rep));
        }
        std::cout << out.dump(2) << "\n";
        return all_pass ? kExitOk : kExitCheckFailed;
      }
      if (check_name.empty()) {
        std::cerr << "check: need --name, --all or --list\n";
        return kExitUsage;
      }
      const auto rep = dlab::run_check(check_name, config, check_seed);
      std::cout << dlab::report_to_json(rep).dump(2) << "\n";
      return rep.pass ? kExitOk : kExitCheckFailed;
    }

    if (apply_cmd->parsed()) {
      const dlab::Danielewski S(dlab::ComplexPoly::parse(word_poly));
      const dlab::Word w = load_word(word_file);
      const dlab::SurfacePoint out = dlab::word_apply(S, w, parse_point(word_point));
      std::cout << point_to_json(out).dump(2) << "\n";
      return kExitOk;
    }
    if (reduce_cmd->parsed()) {
      const dlab::Word reduced = dlab::word_reduce(load_word(word_file));
      std::cout << dlab::word_to_json(reduced).dump(2) << "\n";
      return kExitOk;
    }
    if (normal_cmd->parsed()) {
      const auto res = dlab::conjugate_normal_form(load_word(word_file));
      ordered_json out{{"normal", dlab::word_to_json(res.normal)},
                       {"conjugator", dlab::word_to_json(res.conjugator)}};
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }

    if (jac_cmd->parsed()) {
      const dlab::Danielewski S(dlab::ComplexPoly::parse(jac_poly));
      const dlab::Word w = load_word(jac_file);
      const dlab::cnum j = dlab::jacobian_xz(S, w, parse_point(jac_point), jac_step);
      ordered_json out{{"jacobian", dlab::format_complex(j)}};
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
