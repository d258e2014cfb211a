#include "fracmt/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "fracmt/fraclap.hpp"
#include "fracmt/green.hpp"
#include "fracmt/io.hpp"
#include "fracmt/mtineq.hpp"
#include "fracmt/nehari.hpp"
#include "fracmt/parallel.hpp"
#include "fracmt/validate.hpp"

namespace fracmt::cli {

namespace {

using io::json;
using io::format_number;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Params {
  std::string config;
  std::string out_dir = "fracmt-out";
  std::vector<double> p{2.0};
  double s = 0.25;
  int n = 399;
  std::string h = "square";
  std::vector<double> taus{4, 6, 8, 10};
  double lambda_frac = 0.5;
  std::vector<double> lambda_fracs{0.5, 0.3, 0.2, 0.1};
  std::uint64_t seed = 0;
  int npu = 0;  // 0: per-command default
};

// Fill options absent on the command line from the JSON config (command section
// first, then top level).
void apply_config(const CLI::App& sub, Params& P) {
  if (P.config.empty()) return;
  std::ifstream in(P.config);
  if (!in) throw UsageError("cannot read config file " + P.config);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid JSON config: ") + e.what());
  }
  const std::string name = sub.get_name();
  auto lookup = [&](const std::string& key) -> const json* {
    if (cfg.contains(name) && cfg[name].is_object() && cfg[name].contains(key)) return &cfg[name][key];
    if (cfg.contains(key)) return &cfg[key];
    return nullptr;
  };
  auto given = [&](const std::string& flag) {
    for (const CLI::Option* o : sub.get_options())
      if (o->check_lname(flag)) return o->count() > 0;
    return true;  // option not offered by this command
  };
  try {
    auto set = [&](const std::string& flag, const std::string& key, auto& target) {
      if (given(flag)) return;
      if (const json* v = lookup(key)) v->get_to(target);
    };
    set("out", "out", P.out_dir);
    set("s", "s", P.s);
    set("n", "n", P.n);
    set("h", "h", P.h);
    set("taus", "taus", P.taus);
    set("lambda-frac", "lambda_frac", P.lambda_frac);
    set("lambda-fracs", "lambda_fracs", P.lambda_fracs);
    set("seed", "seed", P.seed);
    set("npu", "npu", P.npu);
    if (!given("p")) {
      if (const json* v = lookup("p")) {
        if (v->is_array()) v->get_to(P.p);
        else P.p = {v->get<double>()};
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config value of wrong type: ") + e.what());
  }
}

json params_json(const std::string& cmd, const Params& P) {
  json j{{"out", P.out_dir}};
  if (cmd == "constants") j["p"] = P.p;
  if (cmd == "greens") j.update({{"s", P.s}, {"n", P.n}});
  if (cmd == "mt-probe") j.update({{"p", P.p.front()}, {"h", P.h}, {"taus", P.taus}, {"npu", P.npu}});
  if (cmd == "mt-line-probe") j.update({{"h", P.h}, {"taus", P.taus}, {"npu", P.npu}});
  if (cmd == "nehari-solve") j.update({{"lambda_frac", P.lambda_frac}, {"npu", P.npu}});
  if (cmd == "blowup-scan") j.update({{"lambda_fracs", P.lambda_fracs}, {"npu", P.npu}});
  if (cmd == "validate") j["seed"] = P.seed;
  return j;
}

void write_manifest(const std::string& cmd, const Params& P, const json& grid, const json& tolerances,
                    const json& results) {
  std::filesystem::create_directories(P.out_dir);
  json m{{"command", cmd},
         {"parameters", params_json(cmd, P)},
         {"grid", grid},
         {"tolerances", tolerances},
         {"results", results},
         {"workers", worker_count()},
         {"git_describe", io::git_describe()}};
  io::write_json(P.out_dir + "/" + cmd + "_manifest.json", m);
}

std::vector<std::vector<std::string>> probe_rows(const std::vector<ProbeRow>& rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) out.push_back({format_number(r.tau), format_number(r.value), r.overflow ? "1" : "0"});
  return out;
}

int cmd_constants(const Params& P, std::ostream& out) {
  std::vector<std::vector<std::string>> rows;
  json res = json::array();
  for (double p : P.p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw UsageError("--p must exceed 1");
    const double a = sharp_constant(Exponent(p));
    out << "alpha_p(p=" << format_number(p) << ") = " << format_number(a) << '\n';
    rows.push_back({format_number(p), format_number(a)});
    res.push_back({{"p", p}, {"alpha_p", a}});
  }
  std::filesystem::create_directories(P.out_dir);
  io::write_csv(P.out_dir + "/constants.csv", {"p", "alpha_p"}, rows);
  write_manifest("constants", P, nullptr, json{}, res);
  return 0;
}

int cmd_greens(const Params& P, std::ostream& out) {
  if (!(P.s > 0.0 && P.s < 0.5)) throw UsageError("--s must lie in (0, 1/2) (fundamental solution F_s)");
  if (P.n < 3 || P.n % 2 == 0) throw UsageError("--n must be an odd interior node count >= 3");
  const int npu = (P.n + 1) / 2;
  const auto grid = make_grid({-1.0, 1.0}, npu, 2.0);
  const FracOrder order(P.s);
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = green_table(grid, order);
  double min_g = 1e300, max_excess = -1e300;
  for (std::size_t r = 0; r < table.rows(); ++r)
    for (std::size_t j = grid->index_a(); j <= grid->index_b(); ++j) {
      // Diagonal entries hold -H (the pole of G is omitted); they are not values of G.
      if (table.is_diagonal(r, j)) continue;
      const double g = table.g(r, j);
      min_g = std::min(min_g, g);
      max_excess = std::max(max_excess, g - fundamental_solution(order, grid->x(grid->interior_node(r)) - grid->x(j)));
    }
  const auto u = sample([](double x) { return std::abs(x) < 1.0 ? std::sqrt(1.0 - x * x) : 0.0; }, grid);
  const auto op = assemble_dirichlet_operator(grid, order);
  const auto f = op.extend_by_zero(op.matrix * op.restrict_interior(u));
  const auto back = reproduce(table, f);
  double resid = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) resid = std::max(resid, std::abs(back.values[i] - u.values[i]));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "green table s=" << format_number(P.s) << " interior_nodes=" << table.rows() << '\n'
      << "min_G = " << format_number(min_g) << " (bound -1e-8)\n"
      << "max_G_minus_F = " << format_number(max_excess) << " (bound 1e-8)\n"
      << "reproduction_residual = " << format_number(resid) << '\n'
      << "seconds = " << format_number(secs) << '\n';
  std::filesystem::create_directories(P.out_dir);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < table.rows(); ++r)
    for (std::size_t j = grid->index_a(); j <= grid->index_b(); ++j)
      rows.push_back({format_number(grid->x(grid->interior_node(r))), format_number(grid->x(j)),
                      format_number(table.g(r, j)), format_number(table.h(r, j)), table.is_diagonal(r, j) ? "1" : "0"});
  io::write_csv(P.out_dir + "/greens.csv", {"x", "y", "G", "H", "diagonal"}, rows);
  const bool ok = min_g >= -1e-8 && max_excess <= 1e-8;
  write_manifest("greens", P, io::grid_to_json(*grid), json{{"G_lower", -1e-8}, {"G_minus_F_upper", 1e-8}},
                 json{{"min_G", min_g}, {"max_G_minus_F", max_excess}, {"reproduction_residual", resid}, {"bounds_ok", ok}});
  return ok ? 0 : 1;
}

int cmd_mt_probe(const Params& P, std::ostream& out) {
  if (P.p.size() != 1 || !(P.p.front() > 1.0)) throw UsageError("--p must be a single value > 1");
  const auto weight = probe_weight(P.h);
  const auto grid = make_grid({-1.0, 1.0}, P.npu > 0 ? P.npu : 100, 2.0);
  const auto rows = sharpness_probe(Exponent(P.p.front()), weight, P.taus, grid);
  const auto csv = probe_rows(rows);
  out << io::csv_string({"tau", "value", "overflow_flag"}, csv);
  std::filesystem::create_directories(P.out_dir);
  io::write_csv(P.out_dir + "/mt_probe.csv", {"tau", "value", "overflow_flag"}, csv);
  json fams = json::array();
  for (double tau : P.taus) {
    const auto f = build_interval_test(Exponent(P.p.front()), tau, grid);
    fams.push_back({{"tau", tau}, {"r", f.r}, {"lp_norm_f", f.lp_norm_f}, {"constraint_norm", f.constraint_norm},
                    {"plateau_mean", f.plateau_mean}, {"plateau_dev", f.plateau_dev}, {"tail_exponent", f.tail_exponent}});
  }
  write_manifest("mt-probe", P, io::grid_to_json(*grid), json{{"exp_clamp", kExpClamp}}, fams);
  return 0;
}

int cmd_mt_line_probe(const Params& P, std::ostream& out) {
  const auto weight = probe_weight(P.h);
  const auto grid = make_grid({-1.0, 1.0}, P.npu > 0 ? P.npu : 100, 2.0);
  const auto rows = line_sharpness_probe(weight, P.taus, grid);
  const auto csv = probe_rows(rows);
  out << io::csv_string({"tau", "value", "overflow_flag"}, csv);
  std::filesystem::create_directories(P.out_dir);
  io::write_csv(P.out_dir + "/mt_line_probe.csv", {"tau", "value", "overflow_flag"}, csv);
  json fams = json::array();
  for (double tau : P.taus) {
    const auto f = build_line_test(tau, grid);
    fams.push_back({{"tau", tau}, {"r", f.r}, {"delta", f.delta}, {"l2_norm_sq", f.l2_norm_sq},
                    {"seminorm_sq", f.seminorm_sq}, {"full_norm_sq", f.full_norm_sq},
                    {"plateau_mean", f.plateau_mean}, {"plateau_dev", f.plateau_dev}});
  }
  write_manifest("mt-line-probe", P, io::grid_to_json(*grid), json{{"exp_clamp", kExpClamp}}, fams);
  return 0;
}

int cmd_nehari(const Params& P, std::ostream& out) {
  if (!(P.lambda_frac > 0.0 && P.lambda_frac < 1.0)) throw UsageError("--lambda-frac must lie in (0, 1)");
  const auto grid = make_grid({-1.0, 1.0}, P.npu > 0 ? P.npu : 100, 2.0);
  const auto ctx = make_nehari_context(grid);
  NehariOptions opts;
  NehariSolution sol;
  bool ok = true;
  try {
    sol = minimize_nehari(ctx, P.lambda_frac * ctx.lambda1, ctx.phi1, opts);
  } catch (const NehariNotConverged& e) {
    sol = e.partial;
    ok = false;
  }
  out << "lambda_1 = " << format_number(ctx.lambda1) << '\n'
      << "lambda = " << format_number(sol.lambda) << '\n'
      << "energy = " << format_number(sol.energy) << '\n'
      << "residual = " << format_number(sol.residual) << '\n'
      << "equation_residual = " << format_number(sol.equation_residual) << '\n'
      << "sup_u = " << format_number(*std::max_element(sol.u0.values.begin(), sol.u0.values.end())) << '\n'
      << "converged = " << (sol.converged ? "true" : "false") << '\n';
  std::filesystem::create_directories(P.out_dir);
  json j = io::solution_to_json(sol);
  j["lambda1"] = ctx.lambda1;
  io::write_json(P.out_dir + "/nehari_solution.json", j);
  write_manifest("nehari-solve", P, io::grid_to_json(*grid), json{{"tol", opts.tol}, {"t_tol", opts.t_tol}},
                 json{{"energy", sol.energy}, {"residual", sol.residual}, {"converged", sol.converged}});
  return ok ? 0 : 1;
}

int cmd_blowup(const Params& P, std::ostream& out) {
  for (std::size_t k = 0; k < P.lambda_fracs.size(); ++k) {
    if (!(P.lambda_fracs[k] > 0.0 && P.lambda_fracs[k] < 1.0)) throw UsageError("--lambda-fracs entries must lie in (0, 1)");
    if (k > 0 && !(P.lambda_fracs[k] < P.lambda_fracs[k - 1])) throw UsageError("--lambda-fracs must be descending");
  }
  const auto grid = make_grid({-1.0, 1.0}, P.npu > 0 ? P.npu : 400, 2.0);
  const auto ctx = make_nehari_context(grid);
  std::vector<double> lambdas;
  for (double f : P.lambda_fracs) lambdas.push_back(f * ctx.lambda1);
  const auto recs = blowup_scan(lambdas, grid);
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : recs)
    rows.push_back({format_number(r.lambda), format_number(r.m), format_number(r.r_scale), format_number(r.eta_error)});
  const std::vector<std::string> header{"lambda", "m", "r_scale", "eta_error"};
  out << io::csv_string(header, rows);
  std::filesystem::create_directories(P.out_dir);
  io::write_csv(P.out_dir + "/blowup_scan.csv", header, rows);
  json res = json::array();
  for (const auto& r : recs)
    res.push_back({{"lambda", r.lambda}, {"m", r.m}, {"r_scale", r.r_scale}, {"eta_error", r.eta_error},
                   {"eta_error_unit_scaling", r.eta_error_unit_scaling}, {"energy", r.energy}});
  write_manifest("blowup-scan", P, io::grid_to_json(*grid), json{{"eta_window", 5.0}}, res);
  return recs.size() == lambdas.size() ? 0 : 1;
}

int cmd_validate(const Params& P, std::ostream& out) {
  const auto rep = run_validation(P.seed);
  out << rep.text();
  std::filesystem::create_directories(P.out_dir);
  std::ofstream(P.out_dir + "/validate_report.txt", std::ios::binary) << rep.text();
  write_manifest("validate", P, nullptr, json{}, json{{"all_passed", rep.all_passed()}, {"checks", rep.checks.size()}});
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fracmt: fractional Moser-Trudinger numerics"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Params P;
  app.add_option("--config", P.config, "JSON config file (CLI flags take precedence)");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", P.out_dir, "output directory");
    sub->add_option("--config", P.config, "JSON config file (CLI flags take precedence)");
  };
  auto* constants = app.add_subcommand("constants", "sharp constants alpha_p");
  constants->add_option("--p", P.p, "exponent(s) p > 1")->delimiter(',');
  auto* greens = app.add_subcommand("greens", "Green table on (-1,1) and invariant report");
  greens->add_option("--s", P.s, "order s in (0, 1/2)");
  greens->add_option("--n", P.n, "interior node count (odd)");
  auto* probe = app.add_subcommand("mt-probe", "interval sharpness probe");
  probe->add_option("--p", P.p, "exponent p > 1");
  probe->add_option("--h", P.h, "weight: one, zero, square, quartic");
  probe->add_option("--taus", P.taus, "comma-separated tau list")->delimiter(',');
  probe->add_option("--npu", P.npu, "grid nodes per unit length");
  auto* line = app.add_subcommand("mt-line-probe", "whole-line sharpness probe");
  line->add_option("--h", P.h, "weight: one, zero, square, quartic");
  line->add_option("--taus", P.taus, "comma-separated tau list")->delimiter(',');
  line->add_option("--npu", P.npu, "grid nodes per unit length");
  auto* neh = app.add_subcommand("nehari-solve", "Nehari minimizer at lambda = frac * lambda_1");
  neh->add_option("--lambda-frac", P.lambda_frac, "fraction of lambda_1 in (0, 1)");
  neh->add_option("--npu", P.npu, "grid nodes per unit length");
  auto* blow = app.add_subcommand("blowup-scan", "blow-up profile diagnostics along descending lambda");
  blow->add_option("--lambda-fracs", P.lambda_fracs, "descending fractions of lambda_1")->delimiter(',');
  blow->add_option("--npu", P.npu, "grid nodes per unit length");
  auto* val = app.add_subcommand("validate", "deterministic invariant suite");
  val->add_option("--seed", P.seed, "random seed");
  for (auto* s : {constants, greens, probe, line, neh, blow, val}) common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  try {
    apply_config(*sub, P);
    const std::string name = sub->get_name();
    if (name == "constants") return cmd_constants(P, out);
    if (name == "greens") return cmd_greens(P, out);
    if (name == "mt-probe") return cmd_mt_probe(P, out);
    if (name == "mt-line-probe") return cmd_mt_line_probe(P, out);
    if (name == "nehari-solve") return cmd_nehari(P, out);
    if (name == "blowup-scan") return cmd_blowup(P, out);
    if (name == "validate") return cmd_validate(P, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace fracmt::cli
