#pragma once

#include <cstddef>
#include <cstdint>

namespace graspkde {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path; OpenMP must produce bit-identical results, which the test suite
/// checks. Work items never share mutable state, so the two paths differ
/// only in scheduling.
enum class Exec { Serial, OpenMP };

template <typename Body>
void parallel_for(std::size_t n, Exec exec, Body&& body) {
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
        body(static_cast<std::size_t>(i));
}

}  // namespace graspkde
