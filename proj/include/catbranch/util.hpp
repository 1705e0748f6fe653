#pragma once

#include <functional>
#include <string>
#include <vector>

namespace catbranch {

// Shortest decimal form that parses back to exactly the same double; C locale.
std::string format_double(double v);

double trapezoid(const std::vector<double>& xs, const std::vector<double>& ys);

// Thread count actually used: requested if > 0, else CATBRANCH_THREADS if set
// and valid, else hardware concurrency; always clamped to [1, jobs].
int resolve_threads(int requested, int jobs);

// Static partition of [0, jobs) over worker threads; fn(i) must be safe to run
// concurrently for distinct i. Exceptions are captured and the first rethrown.
void parallel_for(int jobs, int threads, const std::function<void(int)>& fn);

}  // namespace catbranch
