#pragma once

#include <cstdint>

namespace ribbonkit {

/// Knobs shared by every search-based routine. A zero grid_resolution means
/// "use the routine's own default" (each module documents its default).
struct SearchConfig {
    std::uint64_t seed = 0;
    int grid_resolution = 0;
    int multistarts = 32;
    int max_iters = 2000;
    double tol = 1e-5;
};

}  // namespace ribbonkit
