#ifndef CARNOTKIT_PARALLEL_HPP
#define CARNOTKIT_PARALLEL_HPP

namespace carnotkit {

/// Worker cap for the OpenMP kernels: CARNOT_KIT_THREADS when set to a
/// positive integer, otherwise the OpenMP default. Returns 1 in builds
/// without OpenMP.
int worker_threads();

}  // namespace carnotkit

#endif
