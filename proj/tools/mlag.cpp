// Command-line front end: single-value evaluation, single-identity checks
// and batch suites with machine-readable reports.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "mlag/suite.hpp"

namespace {

using mlag::cplx;
using mlag::json;

// key=value parameter parsing: scalars are "1.5" or "0.5-0.25i", vectors are
// comma-separated, lists of vectors semicolon-separated.
json parse_scalar(const std::string& tok) {
  std::string s = tok;
  bool complex_val = !s.empty() && (s.back() == 'i' || s.back() == 'I');
  if (!complex_val) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw mlag::DomainError("bad numeric value '" + tok + "'");
    return json(v);
  }
  s.pop_back();  // drop the trailing i
  // split at the last +/- that is not an exponent sign or leading sign
  size_t split = std::string::npos;
  for (size_t p = s.size(); p-- > 1;) {
    char c = s[p];
    if ((c == '+' || c == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  double re = 0.0, im = 0.0;
  if (split == std::string::npos) {
    im = s.empty() ? 1.0 : std::stod(s);
  } else {
    re = std::stod(s.substr(0, split));
    std::string imtok = s.substr(split);
    im = (imtok == "+" || imtok == "-") ? std::stod(imtok + "1")
                                        : std::stod(imtok);
  }
  return json{{"re", re}, {"im", im}};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

json parse_value(const std::string& text) {
  auto groups = split(text, ';');
  if (groups.size() > 1) {
    json outer = json::array();
    for (const auto& g : groups) {
      json inner = json::array();
      for (const auto& tok : split(g, ',')) inner.push_back(parse_scalar(tok));
      outer.push_back(std::move(inner));
    }
    return outer;
  }
  auto toks = split(text, ',');
  if (toks.size() > 1) {
    json arr = json::array();
    for (const auto& tok : toks) arr.push_back(parse_scalar(tok));
    return arr;
  }
  return parse_scalar(toks[0]);
}

json parse_kv_params(const std::vector<std::string>& args) {
  json params = json::object();
  for (const auto& arg : args) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0)
      throw mlag::DomainError("expected key=value, got '" + arg + "'");
    params[arg.substr(0, eq)] = parse_value(arg.substr(eq + 1));
  }
  return params;
}

void print_value(cplx v) {
  std::printf("%.15g%+.15gi\n", v.real(), v.imag());
}

void print_report(const mlag::IdentityReport& r) {
  std::printf("identity:         %s\n", r.identity_id.c_str());
  std::printf("lhs:              %.15g%+.15gi\n", r.lhs.real(), r.lhs.imag());
  std::printf("rhs:              %.15g%+.15gi\n", r.rhs.real(), r.rhs.imag());
  std::printf("abs residual:     %.3e\n", r.abs_residual);
  std::printf("rel residual:     %.3e\n", r.rel_residual);
  std::printf("truncation order: %d\n", r.truncation_order);
  std::printf("shells used:      %d\n", r.shells_used);
  std::printf("converged:        %s\n", r.converged ? "yes" : "no");
  std::printf("wall time:        %.3f s\n", r.wall_time);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const mlag::BudgetError*>(&e)) return 3;
  if (dynamic_cast<const mlag::NonConvergenceError*>(&e)) return 1;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multivariate Laguerre polynomials and their generating-function identities"};
  app.require_subcommand(1);

  double tol = 1e-8;
  int max_order = -1;
  int jobs = 1;
  long long seed_override = -1;
  std::string format = "json";
  std::string out_path;

  app.add_option("--tol", tol, "residual threshold for check/suite");
  app.add_option("--max-order", max_order, "series truncation order override");
  app.add_option("--jobs", jobs, "concurrent suite evaluations");
  app.add_option("--seed", seed_override, "override the suite config seed");
  app.add_option("--format", format, "suite report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "suite report output path");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a single function");
  std::string fn_name;
  std::vector<std::string> eval_args;
  eval_cmd->fallthrough();
  eval_cmd->add_option("function", fn_name)->required();
  eval_cmd->add_option("params", eval_args, "key=value parameters");

  auto* check_cmd = app.add_subcommand("check", "verify a single identity");
  std::string id_name;
  std::vector<std::string> check_args;
  check_cmd->fallthrough();
  check_cmd->add_option("identity", id_name)->required();
  check_cmd->add_option("params", check_args, "key=value parameters");

  auto* suite_cmd = app.add_subcommand("suite", "run a suite config");
  std::string config_path;
  suite_cmd->fallthrough();
  suite_cmd->add_option("config", config_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // command-line usage problems are parameter errors
  }

  mlag::EvalOptions opts;
  if (max_order > 0)
    opts.ctl = mlag::SeriesControl(max_order, opts.ctl.rel_tol,
                                   opts.ctl.tail_window);

  if (eval_cmd->parsed()) {
    try {
      json params = parse_kv_params(eval_args);
      print_value(mlag::eval_function(fn_name, params, opts));
      return 0;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return exit_code_for(e);
    }
  }

  if (check_cmd->parsed()) {
    try {
      json params = parse_kv_params(check_args);
      if (mlag::identity_out_of_regime(id_name, params, opts)) {
        std::fprintf(stderr,
                     "error: outside the certified quadrature regime\n");
        return 3;
      }
      auto rep = mlag::run_identity(id_name, params, opts);
      print_report(rep);
      return (rep.converged && rep.rel_residual <= tol) ? 0 : 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return exit_code_for(e);
    }
  }

  // suite
  mlag::SuiteConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw mlag::DomainError("cannot open config '" + config_path + "'");
    json doc = json::parse(in);
    if (seed_override >= 0)
      doc["seed"] = static_cast<std::uint64_t>(seed_override);
    cfg = mlag::parse_suite_config(doc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  auto result = mlag::run_suite(cfg, jobs);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::fprintf(stderr, "error: cannot write '%s'\n", out_path.c_str());
      return 2;
    }
    if (format == "csv")
      out << mlag::suite_report_csv(result);
    else
      out << mlag::suite_report_json(result).dump(2) << "\n";
  }
  std::printf("%s\n", result.summary().c_str());
  return result.ok() ? 0 : 1;
}
