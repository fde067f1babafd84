#pragma once

#include <vector>

#include "fcfs/analytic.hpp"
#include "fcfs/report_io.hpp"
#include "fcfs/simulator.hpp"

namespace fcfs {

/// Side-by-side analytic and simulated values for rates, losses, B, pair and
/// agent delay/wait moments, and first-appearance orders with analytic
/// probability above `min_pi`. Quantity names are colon separated, e.g.
/// `rate:s1:c2` or `pi_y:c1>c3`.
std::vector<VerifyRow> compare(const MatchingModel& model, const AnalyticResult& analytic, const sim::SimStats& stats,
                               double min_pi = 1e-4, const EnumerationOptions& options = {});

/// Largest |z| over the rows (0 for no rows).
double max_abs_z(const std::vector<VerifyRow>& rows);

}  // namespace fcfs
