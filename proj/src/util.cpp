#include "catbranch/util.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <thread>

#include "catbranch/errors.hpp"

namespace catbranch {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double trapezoid(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw SimError(ErrorCode::DimensionMismatch, "trapezoid array sizes");
  if (xs.size() < 2) throw SimError(ErrorCode::EmptyInput, "trapezoid needs >= 2 points");
  double s = 0.0;
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    s += 0.5 * (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]);
  return s;
}

int resolve_threads(int requested, int jobs) {
  int t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("CATBRANCH_THREADS")) {
      char* end = nullptr;
      long parsed = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && parsed > 0) t = static_cast<int>(parsed);
    }
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  if (jobs < 1) jobs = 1;
  return t < jobs ? t : jobs;
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& fn) {
  if (jobs <= 0) return;
  threads = resolve_threads(threads, jobs);
  if (threads == 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<int> error_guard{0};
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= jobs || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (error_guard.fetch_add(1) == 0) first_error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (failed.load() && first_error) std::rethrow_exception(first_error);
}

}  // namespace catbranch
