#pragma once

#include <cstdint>
#include <string>

#include "akc/report.hpp"

namespace akc {

// quick: a few trials per property; default: the acceptance-sized suite;
// corrupted: quick plus fixtures with planted defects, each of which must be
// the only failing check of its kind.
enum class Profile { Quick, Default, Corrupted };

Profile profile_from(const std::string& name);  // throws std::invalid_argument
const char* profile_name(Profile p);

Report selftest(std::uint64_t seed, Profile profile);

}  // namespace akc
