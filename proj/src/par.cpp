#include "hmmwave/par.hpp"

#include <atomic>

#ifdef HMMWAVE_HAVE_OPENMP
#include <omp.h>
#endif

namespace hmmwave::exec {

namespace {
std::atomic<bool> g_parallel{true};
}

void set_parallel(bool on) { g_parallel.store(on); }

bool parallel_enabled() {
#ifdef HMMWAVE_HAVE_OPENMP
  return g_parallel.load();
#else
  return false;
#endif
}

bool use_omp() {
#ifdef HMMWAVE_HAVE_OPENMP
  return g_parallel.load() && omp_get_max_threads() > 1 && !omp_in_parallel();
#else
  return false;
#endif
}

void set_threads(int n) {
#ifdef HMMWAVE_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
  if (n == 1) g_parallel.store(false);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef HMMWAVE_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hmmwave::exec
