#pragma once

namespace senseopt::kernels {

enum class Backend { scalar, avx2 };

/// Best backend the CPU supports (compile-time availability AND runtime
/// CPUID check).
Backend detect_backend();

/// Backend used by the dispatching kernel entry points. Defaults to
/// detect_backend(); the SENSEOPT_KERNELS environment variable
/// ("scalar" or "avx2") overrides it at first use.
Backend active_backend();

/// Force a backend (tests). Throws std::invalid_argument if the requested
/// backend is not available on this machine.
void set_backend(Backend b);

const char* backend_name(Backend b);

}  // namespace senseopt::kernels
