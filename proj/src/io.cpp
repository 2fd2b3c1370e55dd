#include "akc/io.hpp"

#include <cstdio>

namespace akc::io {

Json parse(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
}

std::string dump(const Json& j) { return j.dump(1, ' ', false) + "\n"; }

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Json field_json(const FieldDesc& f)
{
    Json out = Json::object();
    if (f.kind == FieldDesc::Kind::Rationals) {
        out["kind"] = "Q";
    } else {
        out["kind"] = "Fp";
        out["p"] = f.p;
    }
    return out;
}

FieldDesc field_from(const Json& j, const std::string& at)
{
    if (!j.is_object())
        throw ParseError(at, "expected a field descriptor");
    const auto& kind = detail::need(j, "kind", at);
    if (kind == "Q")
        return FieldDesc::rationals();
    if (kind != "Fp")
        throw ParseError(detail::sub(at, "kind"), "expected \"Fp\" or \"Q\"");
    auto p = detail::integer(detail::need(j, "p", at), detail::sub(at, "p"));
    if (p < 2 || p > (std::int64_t(1) << 31))
        throw ParseError(detail::sub(at, "p"), "modulus out of range");
    try {
        return FieldDesc::prime(std::uint32_t(p));
    } catch (const std::invalid_argument& e) {
        throw ParseError(detail::sub(at, "p"), e.what());
    }
}

FieldDesc peek_field(const Json& j)
{
    if (!j.is_object())
        throw ParseError("$", "expected an object");
    if (j.contains("base"))
        return field_from(j["base"], "$.base");
    if (j.contains("algebra") && j["algebra"].is_object())
        return field_from(detail::need(j["algebra"], "base", "$.algebra"), "$.algebra.base");
    if (j.contains("source") && j["source"].is_object() && j["source"].contains("algebra"))
        return field_from(detail::need(j["source"]["algebra"], "base", "$.source.algebra"),
                          "$.source.algebra.base");
    throw ParseError("$", "cannot find the base field (no \"base\" or \"algebra\")");
}

namespace detail {

const Json& need(const Json& j, const char* key, const std::string& at)
{
    if (!j.is_object())
        throw ParseError(at, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(at, std::string("missing key \"") + key + "\"");
    return *it;
}

std::int64_t integer(const Json& j, const std::string& at)
{
    if (!j.is_number_integer())
        throw ParseError(at, "expected an integer");
    return j.get<std::int64_t>();
}

void expect_array(const Json& j, const std::string& at)
{
    if (!j.is_array())
        throw ParseError(at, "expected an array");
}

}  // namespace detail

Json hodge_json(const HodgeTable& h)
{
    Json e = Json::array();
    for (const auto& [ij, v] : h) {
        Json o = Json::object();
        o["i"] = ij.first;
        o["j"] = ij.second;
        o["h"] = v;
        e.push_back(std::move(o));
    }
    Json out = Json::object();
    out["entries"] = std::move(e);
    return out;
}

HodgeTable hodge_from(const Json& j, const std::string& at)
{
    HodgeTable h;
    auto eat = detail::sub(at, "entries");
    const auto& e = detail::need(j, "entries", at);
    detail::expect_array(e, eat);
    for (std::size_t k = 0; k < e.size(); ++k) {
        auto here = detail::sub(eat, k);
        int i = int(detail::integer(detail::need(e[k], "i", here), detail::sub(here, "i")));
        int jj = int(detail::integer(detail::need(e[k], "j", here), detail::sub(here, "j")));
        auto v = detail::integer(detail::need(e[k], "h", here), detail::sub(here, "h"));
        if (v < 0)
            throw ParseError(detail::sub(here, "h"), "negative Hodge number");
        if (h.count({i, jj}))
            throw ParseError(here, "duplicate entry");
        h[{i, jj}] = v;
    }
    return h;
}

}  // namespace akc::io
