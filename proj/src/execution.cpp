#include "greenroute/execution.hpp"

#include <omp.h>

namespace greenroute {

namespace {
int default_threads = -1;
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int threads) {
  if (default_threads < 0) default_threads = omp_get_max_threads();
  omp_set_num_threads(threads > 0 ? threads : default_threads);
}

}  // namespace greenroute
