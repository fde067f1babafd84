#include "fcfs/threads.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace fcfs {

int worker_count(int requested) {
  int n = requested > 0 ? requested : omp_get_max_threads();
  if (const char* env = std::getenv("FCFS_MATCH_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) n = std::min(n, cap);
    } catch (const std::exception&) {
      // unparsable value: no cap
    }
  }
  return std::max(n, 1);
}

}  // namespace fcfs
