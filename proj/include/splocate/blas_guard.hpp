#pragma once

#include <string>

namespace splocate {

/// Verifies once per process that sparse QR gives correct least-squares
/// answers with the loaded BLAS. Some OpenBLAS builds pick broken kernels on
/// newer CPUs; in that case a more conservative kernel set is selected. Throws
/// if no working configuration is found.
void ensure_blas_sane();

/// Kernel set chosen by ensure_blas_sane ("" when untouched).
const std::string& blas_override();

}  // namespace splocate
