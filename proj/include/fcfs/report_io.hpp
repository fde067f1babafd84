#pragma once

#include <map>
#include <string>
#include <vector>

#include "fcfs/limits.hpp"
#include "fcfs/reports.hpp"
#include "fcfs/simulator.hpp"
#include "json.hpp"

namespace fcfs {

/// 12 significant digits, as printed in every CSV and table.
std::string format_number(double value);

nlohmann::json to_json(const RateReport& report);
nlohmann::json to_json(const DelayReport& report, bool waits);
nlohmann::json to_json(const SweepSeries& series);
nlohmann::json sim_to_json(const MatchingModel& model, const sim::SimStats& stats);

/// `good,agent,rate` rows for every edge, then `good,LOST,rate` per good.
std::string rates_csv(const RateReport& report);
/// `good,agent,mean,variance` table, a blank line, `agent,mean,variance`.
std::string delays_csv(const DelayReport& report, bool waits);
/// `rho,good,agent,rate,delay_mean,delay_var` with `rho,good,LOST,rate,,`.
std::string sweep_csv(const SweepSeries& series);

/// Fixed-width matrix in the layout of the usual rate/delay tables.
std::string rates_table(const RateReport& report);
std::string delays_table(const DelayReport& report, bool waits);

struct VerifyRow {
  std::string quantity;
  double analytic = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;

  /// (empirical - analytic) / std_error; 0 when both agree exactly.
  double z_score() const;
};

std::string verify_csv(const std::vector<VerifyRow>& rows);

/// Minimal CSV reader for the files above: one vector of cells per line,
/// blank lines kept as empty rows.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace fcfs
