#include "carnotkit/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carnotkit {

int worker_threads() {
#ifdef _OPENMP
  static const int cap = [] {
    if (const char* env = std::getenv("CARNOT_KIT_THREADS")) {
      try {
        int v = std::stoi(env);
        if (v > 0) return v;
      } catch (...) {
      }
    }
    return omp_get_max_threads();
  }();
  return cap;
#else
  return 1;
#endif
}

}  // namespace carnotkit
