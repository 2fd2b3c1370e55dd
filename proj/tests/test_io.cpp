#include "doctest.h"

#include "akc/derham.hpp"
#include "akc/generators.hpp"
#include "akc/io.hpp"
#include "akc/reconstruct.hpp"
#include "akc/report.hpp"
#include "akc/selftest.hpp"

using namespace akc;
using io::Json;

namespace {

template <class Write, class Read>
void check_round_trip(const Json& j, Write write, Read read)
{
    std::string a = io::dump(j);
    std::string b = io::dump(write(read(io::parse(a))));
    CHECK(a == b);
}

std::string where_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const io::ParseError& e) {
        return e.where;
    }
    return "";
}

}  // namespace

TEST_CASE("scalars, vectors and matrices in both encodings")
{
    FpContext ctx(5);
    auto v = io::vector_from<Fp>(Json::parse(R"(["0", "3", "4"])"), 3, "$");
    CHECK(v == SparseVec<Fp>{{1, Fp(3)}, {2, Fp(4)}});
    CHECK(io::vector_json(v).dump() == R"([[1,"3"],[2,"4"]])");
    auto m = io::matrix_from<Fp>(Json::parse(R"([["1","0"],["0","2"],["0","0"]])"), 3, 2, "$");
    CHECK(io::matrix_json(m).dump() == R"({"rows":3,"cols":2,"entries":[[0,0,"1"],[1,1,"2"]]})");
    CHECK(equal<Fp>(io::matrix_from<Fp>(io::matrix_json(m), 3, 2, "$"), m));
    CHECK(where_of([] { io::matrix_from<Fp>(Json::parse(R"({"rows":1,"cols":1,"entries":[[0,2,"1"]]})"), 1, 1, "$.d"); }) ==
          "$.d.entries[0]");
    CHECK(where_of([] { io::vector_from<Fp>(Json::parse(R"([[0, "x"]])"), 2, "$.v"); }) == "$.v[0]");
    // residues only, no signs or representatives outside [0, p)
    CHECK(where_of([] { io::vector_from<Fp>(Json::parse(R"(["0", "-1"])"), 2, "$.v"); }) == "$.v[1]");
    CHECK(where_of([] { io::vector_from<Fp>(Json::parse(R"(["5", "0"])"), 2, "$.v"); }) == "$.v[0]");
}

TEST_CASE("rational scalars in lowest terms")
{
    auto q = io::scalar_from<Rational>(Json("-3/2"), "$");
    CHECK(io::scalar_json(q) == Json("-3/2"));
    CHECK(where_of([] { io::scalar_from<Rational>(Json("-6/4"), "$.x"); }) == "$.x");
    CHECK(io::scalar_json(io::scalar_from<Rational>(Json("7"), "$")) == Json("7"));
}

TEST_CASE("round trips are byte-identical")
{
    FpContext ctx(3);
    gen::Rng rng(2);
    auto M = derham(DeRhamSpec{3, 2, 2, Flavor::Affine});
    check_round_trip(io::algebra_json(M.R()), [](auto R) { return io::algebra_json(*R); },
                     [](const Json& j) { return io::algebra_from<Fp>(j); });
    check_round_trip(io::cdga_json(M.cdga), [](const auto& K) { return io::cdga_json(K); },
                     [](const Json& j) { return io::cdga_from<Fp>(j); });
    auto C = tau_range(M.cdga.complex, 1, 2);
    check_round_trip(io::complex_json(C), [](const auto& K) { return io::complex_json(K); },
                     [](const Json& j) { return io::complex_from<Fp>(j); });
    auto T = gen::two_term(M.cdga.complex.R, gen::map(M.R(), rng, 2, 2));
    check_round_trip(io::two_term_json(T), [](const auto& t) { return io::two_term_json(t); },
                     [](const Json& j) { return io::two_term_from<Fp>(j); });
    auto r = theorem_map(M.cdga, 2, 1, {false});
    REQUIRE(r.status == Status::Verified);
    check_round_trip(io::chain_map_json(r.mu), [](const auto& f) { return io::chain_map_json(f); },
                     [](const Json& j) { return io::chain_map_from<Fp>(j); });
    for (int t = 0; t < 10; ++t) {
        auto f = gen::filtered_complex<Fp>(rng, 3, 3, 15);
        check_round_trip(io::filtered_json(f), [](const auto& g) { return io::filtered_json(g); },
                         [](const Json& j) { return io::filtered_from<Fp>(j); });
        auto h = gen::hodge_table(rng, 4);
        check_round_trip(io::hodge_json(h), [](const auto& x) { return io::hodge_json(x); },
                         [](const Json& j) { return io::hodge_from(j); });
    }
}

TEST_CASE("a parsed cdga is the same cdga")
{
    FpContext ctx(3);
    auto M = derham(DeRhamSpec{3, 2, 1, Flavor::Affine});
    auto K = io::cdga_from<Fp>(io::parse(io::dump(io::cdga_json(M.cdga))));
    CHECK(K.generators == M.cdga.generators);
    CHECK(verify_akc(K).ok());
    CHECK(theorem_map(K, 2, 1, {false}).status == Status::Verified);
}

TEST_CASE("the two-term reader rejects maps that are not R-linear")
{
    FpContext ctx(3);
    auto R = truncated_polynomial_algebra<Fp>(1, 2);
    TwoTermComplex<Fp> T{R, 1, 1, RLinearMap<Fp>::identity(*R, 1)};
    Json j = io::two_term_json(T);
    j["u"] = Json::parse(R"([["1","0"],["0","0"]])");
    CHECK(where_of([&] { io::two_term_from<Fp>(j); }) == "$.u");
}

TEST_CASE("malformed input carries a location")
{
    CHECK(where_of([] { io::parse("{\"a\": [1, 2"); }).rfind("byte ", 0) == 0);
    FpContext ctx(3);
    auto M = derham(DeRhamSpec{3, 1, 1, Flavor::Affine});
    Json j = io::cdga_json(M.cdga);
    j["terms"][1].erase("ambient_rank");
    CHECK(where_of([&] { io::cdga_from<Fp>(j); }) == "$.terms[1]");
    j = io::cdga_json(M.cdga);
    j["algebra"]["base"]["p"] = 4;
    CHECK(where_of([&] { io::peek_field(j); }) == "$.algebra.base.p");
    j = io::cdga_json(M.cdga);
    j["mult"][0][2] = 99;
    CHECK(where_of([&] { io::cdga_from<Fp>(j); }) == "$.mult[0]");
    CHECK(io::peek_field(io::cdga_json(M.cdga)) == FieldDesc::prime(3));
}

TEST_CASE("reports: anchors, exit codes, deterministic JSON")
{
    Report r;
    r.command = "test";
    r.add("C1", true);
    CHECK(r.exit_code() == 0);
    r.add("gate", Status::Refused, "clause m!");
    CHECK(r.exit_code() == 2);
    r.add("C2", false, "witness");
    CHECK(r.exit_code() == 1);
    CHECK(r.checks[0].anchor == anchor_of("C1"));
    CHECK_THROWS(r.add("no-such-check", true));
    CHECK_FALSE(r.to_json(false)["checks"][0].contains("elapsed"));
    CHECK(r.to_json(true)["checks"][0].contains("elapsed"));
    for (const auto& [name, anchor] : anchor_table())
        CHECK_FALSE(anchor.empty());
}

TEST_CASE("selftest is reproducible and finds exactly the planted failures")
{
    auto a = io::dump(selftest(11, Profile::Quick).to_json());
    auto b = io::dump(selftest(11, Profile::Quick).to_json());
    CHECK(a == b);
    CHECK(selftest(11, Profile::Quick).exit_code() == 0);
    auto c = selftest(11, Profile::Corrupted);
    int failed = 0;
    for (const auto& ch : c.checks)
        if (ch.status == Status::Failed) {
            ++failed;
            CHECK(ch.witness.rfind("planted: ", 0) == 0);
        }
    CHECK(failed == 3);
    CHECK(c.checks.back().name == "planted");
    CHECK(c.checks.back().status == Status::Verified);
}
