#pragma once

// Check reports shared by the command-line tool, the self-test and the
// acceptance runner.

#include <optional>
#include <string>
#include <vector>

#include "akc/io.hpp"
#include "akc/status.hpp"

namespace akc {

inline constexpr const char* tool_version = "0.3.0";

// Every check name maps to a fixed anchor naming the statement it exercises.
const std::string& anchor_of(const std::string& check);
const std::vector<std::pair<std::string, std::string>>& anchor_table();

struct Check {
    std::string name;
    std::string anchor;
    Status status = Status::Failed;
    std::string witness;  // empty when none
    double elapsed = 0;
};

struct Report {
    std::string command;
    std::string digest;                 // FNV-1a of the canonical input
    std::optional<std::uint64_t> seed;
    io::Json params = io::Json::object();
    std::vector<Check> checks;

    Check& add(const std::string& name, Status s, std::string witness = {}, double elapsed = 0);
    Check& add(const std::string& name, bool ok, std::string witness = {}, double elapsed = 0)
    {
        return add(name, ok ? Status::Verified : Status::Failed, std::move(witness), elapsed);
    }

    // 1 if any check failed, else 2 if any was refused, else 0.
    int exit_code() const;
    io::Json to_json(bool timings = false) const;
    std::string text(bool timings = false) const;
};

std::string digest_of(const io::Json& input);

}  // namespace akc
