#pragma once

#include <cstdint>

namespace akc {

// Largest flattened dimension a single generated complex may have.
// Overridden by the AKC_SIZE_GUARD environment variable.
std::int64_t size_guard();

// Above this total dimension is_quasi_iso relies on the cone test alone and
// reports the induced-map comparison as skipped. Overridden by
// AKC_INDUCED_LIMIT.
std::int64_t induced_route_limit();

// Largest number of basis pairs a multiplication table may have when written
// out as JSON. Overridden by AKC_EXPORT_LIMIT.
std::int64_t export_limit();

}  // namespace akc
