#pragma once

#include "fcfs/analytic.hpp"

namespace fcfs::reference {

/// Literal serial evaluation of rates and delay/wait moments: every subset
/// is expanded into its permutations with std::next_permutation, prefix sums
/// are recomputed from scratch for each order, and sums are plain doubles.
///
/// Kept as an independent check of the enumeration kernel and as the
/// benchmark baseline. Cost is O(f(I) * I * J).
AnalyticResult analyze(const MatchingModel& model, int max_types = 12);

}  // namespace fcfs::reference
