#include "senseopt/kernels/backend.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace senseopt::kernels {

namespace {

Backend detect_impl() {
#if SENSEOPT_HAVE_AVX2 && (defined(__x86_64__) || defined(__i386__))
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::avx2;
#endif
  return Backend::scalar;
}

Backend initial_backend() {
  const Backend best = detect_impl();
  if (const char* env = std::getenv("SENSEOPT_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && best == Backend::avx2)
      return Backend::avx2;
  }
  return best;
}

Backend& current() {
  static Backend b = initial_backend();
  return b;
}

}  // namespace

Backend detect_backend() { return detect_impl(); }

Backend active_backend() { return current(); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && detect_impl() != Backend::avx2)
    throw std::invalid_argument("avx2 backend not available on this CPU");
  current() = b;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace senseopt::kernels
