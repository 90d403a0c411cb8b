#pragma once

#include <cstddef>

namespace cubep {

// Caps the OpenMP worker count (no-op in non-OpenMP builds).
void set_threads(int threads);
int max_threads();

}  // namespace cubep
