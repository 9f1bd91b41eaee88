#include "odmts/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace odmts {

namespace {
int g_default_threads = 0;
}

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? threads : g_default_threads);
#else
  (void)threads;
  (void)g_default_threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace odmts
