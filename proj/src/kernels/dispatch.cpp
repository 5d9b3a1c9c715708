#include <cstdlib>
#include <cstring>

#include "fdte/errors.hpp"
#include "fdte/kernels.hpp"
#include "kernels/tables.hpp"

namespace fdte::kernels {

bool simd_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#elif defined(__aarch64__)
  return true;
#else
  return false;
#endif
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("FDTE_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "simd") == 0 && simd_supported()) return Backend::simd;
    return Backend::scalar;
  }
  return simd_supported() ? Backend::simd : Backend::scalar;
}

Backend& backend_state() {
  static Backend b = initial_backend();
  return b;
}

}  // namespace

Backend active_backend() { return backend_state(); }

void set_backend(Backend b) {
  if (b == Backend::simd && !simd_supported()) {
    throw DomainError("kernels: simd backend not supported on this cpu");
  }
  backend_state() = b;
}

const Ops& ops(Backend b) {
  return b == Backend::simd ? simd_ops : scalar_ops;
}

const Ops& ops() { return ops(backend_state()); }

}  // namespace fdte::kernels
