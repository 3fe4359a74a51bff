#include "itlrr/parallel.hpp"

#include <omp.h>

namespace itlrr {

namespace {
int default_threads() {
    static const int threads = omp_get_max_threads();
    return threads;
}
}  // namespace

void set_thread_limit(int threads) { omp_set_num_threads(threads > 0 ? threads : default_threads()); }

int max_threads() { return omp_get_max_threads(); }

}  // namespace itlrr
