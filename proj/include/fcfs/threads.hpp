#pragma once

namespace fcfs {

/// Worker count for parallel regions. `requested` > 0 is taken as given;
/// otherwise the OpenMP default. Either way FCFS_MATCH_THREADS, when set to a
/// positive integer, caps the result.
int worker_count(int requested = 0);

}  // namespace fcfs
