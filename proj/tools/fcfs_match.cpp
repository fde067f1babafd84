// fcfs-match: exact metrics and Monte Carlo checks for directed FCFS
// bipartite matching models.
//
// Exit codes: 0 ok, 1 usage, 2 invalid model, 3 unstable, 4 size cap,
// 5 verification failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fcfs/analytic.hpp"
#include "fcfs/delays.hpp"
#include "fcfs/limits.hpp"
#include "fcfs/model_io.hpp"
#include "fcfs/report_io.hpp"
#include "fcfs/simulator.hpp"
#include "fcfs/verify.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kUnstable = 3, kTooLarge = 4, kVerifyFailed = 5 };

struct Config {
  std::string model_path;
  std::string out_path;
  std::optional<std::string> format;
  double rho_min = 0.1;
  double rho_max = 0.9;
  int steps = 9;
  std::uint64_t events = 1'000'000;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> burn_in;
  bool allow_large = false;
  double z_max = 4.0;
  bool table = false;
  double corrupt_rate = 1.0;
};

fcfs::EnumerationOptions enumeration(const Config& c) {
  fcfs::EnumerationOptions o;
  o.allow_large = c.allow_large;
  return o;
}

void emit(const Config& c, const std::string& text) {
  if (c.out_path.empty() || c.out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out_path);
  if (!out) throw fcfs::Error(fcfs::ErrorCode::DomainError, "cannot write " + c.out_path);
  out << text;
}

std::string format_of(const Config& c, const char* fallback) {
  const std::string f = c.format.value_or(fallback);
  if (f != "json" && f != "csv") throw CLI::ValidationError("--format", "expected json or csv");
  return f;
}

int cmd_validate(const Config& c) {
  fcfs::ModelSpec spec = fcfs::load_model_spec(c.model_path);
  const auto issues = fcfs::validate(spec);
  nlohmann::json report;
  report["valid"] = issues.empty();
  if (!issues.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& i : issues) list.push_back({{"kind", fcfs::to_string(i.kind)}, {"message", i.message}});
    report["issues"] = list;
    std::cout << report.dump(2) << '\n';
    return kInvalid;
  }
  const auto model = fcfs::MatchingModel::build(std::move(spec));
  const auto stability = fcfs::check_stability(model);
  const auto bound = fcfs::max_stable_rho(model);
  report["rho"] = model.rho();
  report["stable"] = stability.stable;
  report["min_margin"] = stability.min_margin;
  if (stability.witness) {
    nlohmann::json w = nlohmann::json::array();
    for (int t : fcfs::members(*stability.witness)) w.push_back(model.agent_name(t));
    report["witness"] = w;
  } else {
    report["witness"] = nullptr;
  }
  report["crp"] = fcfs::check_crp(model);
  report["max_stable_rho"] = bound.max_rho;
  report["proper_subset_min"] = std::isfinite(bound.proper_min) ? nlohmann::json(bound.proper_min) : nlohmann::json(nullptr);
  emit(c, report.dump(2) + "\n");
  return kOk;
}

int cmd_rates(const Config& c) {
  const auto model = fcfs::load_model(c.model_path);
  const auto rates = fcfs::matching_rates(model, enumeration(c));
  if (c.table) std::cout << fcfs::rates_table(rates);
  const auto f = format_of(c, "json");
  if (c.table && c.out_path.empty()) return kOk;
  emit(c, f == "csv" ? fcfs::rates_csv(rates) : fcfs::to_json(rates).dump(2) + "\n");
  return kOk;
}

int cmd_delays(const Config& c, bool waits) {
  const auto model = fcfs::load_model(c.model_path);
  const auto delays = fcfs::delay_moments(model, enumeration(c));
  if (c.table) std::cout << fcfs::delays_table(delays, waits);
  const auto f = format_of(c, "json");
  if (c.table && c.out_path.empty()) return kOk;
  emit(c, f == "csv" ? fcfs::delays_csv(delays, waits) : fcfs::to_json(delays, waits).dump(2) + "\n");
  return kOk;
}

int cmd_sweep(const Config& c) {
  const auto model = fcfs::load_model(c.model_path);
  const auto grid = fcfs::linear_grid(c.rho_min, c.rho_max, c.steps);
  const auto f = format_of(c, "csv");
  const auto series = fcfs::sweep(model, grid, enumeration(c));
  emit(c, f == "csv" ? fcfs::sweep_csv(series) : fcfs::to_json(series).dump(2) + "\n");
  return kOk;
}

fcfs::sim::SimOptions sim_options(const Config& c) {
  fcfs::sim::SimOptions o;
  o.n_events = c.events;
  o.seed = c.seed;
  o.burn_in = c.burn_in;
  return o;
}

int cmd_simulate(const Config& c) {
  const auto model = fcfs::load_model(c.model_path);
  if (format_of(c, "json") != "json") throw CLI::ValidationError("--format", "simulate writes json only");
  const auto stats = fcfs::sim::run(model, sim_options(c));
  emit(c, fcfs::sim_to_json(model, stats).dump(2) + "\n");
  return kOk;
}

int cmd_verify(const Config& c) {
  const auto model = fcfs::load_model(c.model_path);
  if (format_of(c, "csv") != "csv") throw CLI::ValidationError("--format", "verify writes csv only");
  auto analytic = fcfs::analyze(model, enumeration(c));
  if (c.corrupt_rate != 1.0) {
    for (int j = 0; j < model.good_count(); ++j) {
      for (int i = 0; i < model.agent_count(); ++i) {
        if (analytic.rates.edge[j][i]) {
          analytic.rates.rate[j][i] *= c.corrupt_rate;
          j = model.good_count();
          break;
        }
      }
    }
  }
  const auto stats = fcfs::sim::run(model, sim_options(c));
  const auto rows = fcfs::compare(model, analytic, stats, 1e-4, enumeration(c));
  emit(c, fcfs::verify_csv(rows));
  const double worst = fcfs::max_abs_z(rows);
  std::fprintf(stderr, "verify: %zu quantities, max |z| = %.3f (limit %.3f)\n", rows.size(), worst, c.z_max);
  return worst <= c.z_max ? kOk : kVerifyFailed;
}

int exit_for(const fcfs::Error& e) {
  switch (e.code()) {
    case fcfs::ErrorCode::InvalidModel:
    case fcfs::ErrorCode::UnknownIdentifier:
    case fcfs::ErrorCode::DuplicateType:
      return kInvalid;
    case fcfs::ErrorCode::UnstableModel:
    case fcfs::ErrorCode::UnstableGridPoint:
      return kUnstable;
    case fcfs::ErrorCode::TooManyTypes:
      return kTooLarge;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact metrics and Monte Carlo checks for directed FCFS bipartite matching"};
  app.require_subcommand(1);
  Config c;

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--model", c.model_path, "Model file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", c.out_path, "Output path (default stdout)");
    sub->add_option("--format", c.format, "json or csv");
    sub->add_flag("--allow-large", c.allow_large, "Lift the agent-type cap on enumeration");
  };
  auto simulation = [&c](CLI::App* sub) {
    sub->add_option("--events", c.events, "Simulated items")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--burn-in", c.burn_in, "Items discarded before measuring");
  };

  auto* validate = app.add_subcommand("validate", "Validate a model and report stability and resource pooling");
  common(validate);
  auto* rates = app.add_subcommand("rates", "Matching and loss rates");
  common(rates);
  rates->add_flag("--table", c.table, "Print a rate matrix");
  auto* delays = app.add_subcommand("delays", "Delay moments in sequence positions");
  common(delays);
  delays->add_flag("--table", c.table, "Print delay matrices");
  auto* waits = app.add_subcommand("waits", "Waiting-time moments under Poisson arrivals");
  common(waits);
  waits->add_flag("--table", c.table, "Print waiting-time matrices");
  auto* sweep = app.add_subcommand("sweep", "Rates and delays over a traffic-intensity grid");
  common(sweep);
  sweep->add_option("--rho-min", c.rho_min, "First grid point");
  sweep->add_option("--rho-max", c.rho_max, "Last grid point");
  sweep->add_option("--steps", c.steps, "Number of grid points");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates with batch-means errors");
  common(simulate);
  simulation(simulate);
  auto* verify = app.add_subcommand("verify", "Compare analytic values with simulation");
  common(verify);
  simulation(verify);
  verify->add_option("--z-max", c.z_max, "Largest accepted |z| score");
  verify->add_option("--corrupt-rate", c.corrupt_rate)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(c);
    if (*rates) return cmd_rates(c);
    if (*delays) return cmd_delays(c, false);
    if (*waits) return cmd_delays(c, true);
    if (*sweep) return cmd_sweep(c);
    if (*simulate) return cmd_simulate(c);
    if (*verify) return cmd_verify(c);
  } catch (const fcfs::UnstableGridPoint& e) {
    std::fprintf(stderr, "error: unstable at rho = %.12g: %s\n", e.rho(), e.what());
    return kUnstable;
  } catch (const fcfs::InvalidModel& e) {
    std::fprintf(stderr, "error: invalid model\n");
    for (const auto& i : e.issues()) std::fprintf(stderr, "  %s: %s\n", fcfs::to_string(i.kind), i.message.c_str());
    return kInvalid;
  } catch (const fcfs::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_for(e);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
