#pragma once

namespace splocate {

/// Worker count for data-parallel loops: SPLOCATE_THREADS if set, otherwise
/// the OpenMP default.
int worker_count();

}  // namespace splocate
