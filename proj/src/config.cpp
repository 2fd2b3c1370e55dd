#include "akc/config.hpp"

#include <cstdlib>
#include <string>

namespace akc {

namespace {

std::int64_t env_or(const char* name, std::int64_t fallback)
{
    const char* v = std::getenv(name);
    if (!v || !*v)
        return fallback;
    try {
        return std::stoll(v);
    } catch (...) {
        return fallback;
    }
}

}  // namespace

std::int64_t size_guard() { return env_or("AKC_SIZE_GUARD", 25'000'000); }

std::int64_t export_limit() { return env_or("AKC_EXPORT_LIMIT", 4'000'000); }

std::int64_t induced_route_limit() { return env_or("AKC_INDUCED_LIMIT", 60'000); }

}  // namespace akc
