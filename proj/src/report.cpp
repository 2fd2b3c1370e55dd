#include "akc/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace akc {

const std::vector<std::pair<std::string, std::string>>& anchor_table()
{
    static const std::vector<std::pair<std::string, std::string>> t{
        {"algebra", "local-algebra:axioms"},
        {"linalg", "exact-linear-algebra:rank-nullity"},
        {"complex", "complex:d-squared"},
        {"cdga", "cdga:leibniz-associativity-commutativity"},
        {"C1", "akc:C1 R = H^0"},
        {"C2", "akc:C2 exterior cohomology"},
        {"C3", "akc:C3 flatness"},
        {"dims", "de-rham:cartier dim H^q = C(n,q) dim R"},
        {"cartier", "de-rham:cartier basis"},
        {"kos", "koszul:d-squared"},
        {"alpha", "koszul:alpha isomorphisms"},
        {"kos-qi", "koszul:quasi-isomorphism invariance"},
        {"kos-tensor", "koszul:tensor splitting"},
        {"gate", "reconstruction:hypotheses"},
        {"reconstruct", "reconstruction:quasi-isomorphism"},
        {"splitting", "decomposition:splitting of tau<=1"},
        {"decompose", "decomposition:range witness"},
        {"specseq", "spectral:page transitions and E_inf = gr H"},
        {"degeneration", "spectral:degeneration by gap"},
        {"mutations", "negative-control:table mutations"},
        {"round-trip", "serialization:round trip"},
        {"planted", "selftest:planted failures"},
    };
    return t;
}

const std::string& anchor_of(const std::string& check)
{
    for (const auto& [name, anchor] : anchor_table())
        if (name == check)
            return anchor;
    throw std::logic_error("no anchor for check " + check);
}

Check& Report::add(const std::string& name, Status s, std::string witness, double elapsed)
{
    checks.push_back({name, anchor_of(name), s, std::move(witness), elapsed});
    return checks.back();
}

int Report::exit_code() const
{
    bool refused = false;
    for (const auto& c : checks) {
        if (c.status == Status::Failed)
            return 1;
        refused = refused || c.status == Status::Refused;
    }
    return refused ? 2 : 0;
}

io::Json Report::to_json(bool timings) const
{
    io::Json cs = io::Json::array();
    for (const auto& c : checks) {
        io::Json o = io::Json::object();
        o["name"] = c.name;
        o["anchor"] = c.anchor;
        o["status"] = status_name(c.status);
        if (!c.witness.empty())
            o["witness"] = c.witness;
        if (timings)
            o["elapsed"] = c.elapsed;
        cs.push_back(std::move(o));
    }
    io::Json out = io::Json::object();
    out["tool"] = "akc";
    out["version"] = tool_version;
    out["command"] = command;
    out["input_digest"] = digest;
    if (seed)
        out["seed"] = *seed;
    out["params"] = params;
    out["checks"] = std::move(cs);
    out["exit_code"] = exit_code();
    return out;
}

std::string Report::text(bool timings) const
{
    std::string s;
    for (const auto& c : checks) {
        s += std::string(status_name(c.status)) + "  " + c.name + "  [" + c.anchor + "]";
        if (timings) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "  %.3fs", c.elapsed);
            s += buf;
        }
        s += "\n";
        if (!c.witness.empty())
            s += "      " + c.witness + "\n";
    }
    return s;
}

std::string digest_of(const io::Json& input) { return io::hex64(io::fnv1a(input.dump())); }

}  // namespace akc
