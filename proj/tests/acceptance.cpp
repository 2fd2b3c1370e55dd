// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "akc/derham.hpp"
#include "akc/generators.hpp"
#include "akc/io.hpp"
#include "akc/oracles.hpp"
#include "akc/reconstruct.hpp"
#include "akc/selftest.hpp"

using namespace akc;

namespace {

constexpr Count spec_limit = 20000;
constexpr std::uint64_t seed = 20240917;

struct Line {
    bool pass;
    std::string summary;
};

std::string frac(long good, long total) { return std::to_string(good) + "/" + std::to_string(total); }

std::string qm(const DeRhamSpec& s, int q, int m)
{
    return s.name() + " (q,m)=(" + std::to_string(q) + "," + std::to_string(m) + ")";
}

std::vector<DeRhamSpec> all_specs()
{
    std::vector<DeRhamSpec> out;
    for (std::uint32_t p : {2u, 3u, 5u})
        for (int N : {1, 2})
            for (int n = 1;; ++n) {
                DeRhamSpec s{p, n, N, Flavor::Affine};
                if (s.total_dim() > spec_limit)
                    break;
                out.push_back(s);
            }
    return out;
}

Line criterion1()
{
    auto specs = all_specs();
    int good = 0;
    std::string bad;
    for (const auto& s : specs) {
        FpContext ctx(s.p);
        auto M = derham(s);
        auto r = verify_akc(M.cdga);
        auto h = cohomology_dims(coordinatize(M.cdga.complex).k);
        bool dims = int(h.size()) == s.n + 1;
        for (int q = 0; dims && q <= s.n; ++q)
            dims = h[std::size_t(q)] == binomial(s.n, q) * s.algebra_dim();
        bool ok = r.ok() && dims;
        good += ok;
        if (!ok && bad.empty())
            bad = "; first failure " + s.name() + (dims ? "" : " (cohomology dims)");
    }
    return {good == int(specs.size()),
            frac(good, int(specs.size())) + " de Rham models pass validation, C1-C3 and dim H^q = C(n,q)·dim R" + bad};
}

Line criterion2()
{
    int verified = 0, total = 0, refused_ok = 0;
    std::vector<std::string> guarded, failed;
    double largest = 0;
    for (const auto& s : all_specs()) {
        FpContext ctx(s.p);
        auto M = derham(s);
        for (int q = 1; q <= s.n; ++q)
            for (int m = 1; m <= q; ++m) {
                if (theorem_gate(M.R(), q, m))
                    continue;
                ++total;
                auto t0 = std::chrono::steady_clock::now();
                try {
                    auto r = theorem_map(M.cdga, q, m, {false});
                    if (r.status == Status::Verified)
                        ++verified;
                    else
                        failed.push_back(qm(s, q, m) + ": " + r.reason);
                } catch (const std::length_error&) {
                    guarded.push_back(qm(s, q, m));
                }
                if (s.p == 5 && s.n == 3 && s.N == 1)
                    largest = std::max(largest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            }
    }
    {
        FpContext ctx(3);
        auto M = derham(DeRhamSpec{3, 3, 1, Flavor::Affine});
        auto r32 = theorem_map(M.cdga, 3, 2, {false});
        auto r33 = theorem_map(M.cdga, 3, 3, {false});
        refused_ok = r32.status == Status::Refused && r32.clause == "m+1" && r33.status == Status::Refused &&
                     r33.clause == "m!";
    }
    std::string w = frac(verified, total) + " admissible (q,m) verified";
    char buf[64];
    std::snprintf(buf, sizeof buf, "; slowest p=5 n=3 N=1 case %.1fs", largest);
    w += buf;
    w += refused_ok ? "; p=3 n=3 (3,2) and (3,3) refused by the expected clauses" : "; expected refusals missing";
    if (!guarded.empty()) {
        w += "; " + std::to_string(guarded.size()) + " above the size guard:";
        for (const auto& g : guarded)
            w += " [" + g + "]";
    }
    for (const auto& f : failed)
        w += "; FAILED " + f;
    return {verified == total && refused_ok && largest < 120, w};
}

Line criterion3()
{
    int good = 0, total = 0;
    bool jet = false;
    std::string bad;
    for (const auto& s : all_specs()) {
        FpContext ctx(s.p);
        auto M = derham(s);
        auto sp = canonical_splitting(M).s;
        for (int a = 0; a <= s.n; ++a)
            for (int b = a; b <= s.n && b - a < int(s.p) - 1; ++b) {
                ++total;
                try {
                    auto r = decompose_range(M.cdga, a, b, sp, {false});
                    if (r.status == Status::Verified) {
                        ++good;
                        jet = jet || (s.p == 3 && s.n == 2 && s.N == 2);
                        continue;
                    }
                    if (bad.empty())
                        bad = "; first failure " + s.name() + " [" + std::to_string(a) + "," + std::to_string(b) +
                              "]: " + r.reason;
                } catch (const std::length_error& e) {
                    if (bad.empty())
                        bad = "; " + s.name() + ": " + e.what();
                }
            }
    }
    return {good == total && jet,
            frac(good, total) + " ranges [a,b] with b-a < p-1 decomposed" + (jet ? ", p=3 n=2 N=2 included" : "") + bad};
}

Line criterion4()
{
    FpContext ctx(3);
    gen::Rng rng(seed ^ 4);
    int good = 0, n = 60;
    for (int t = 0; t < n; ++t) {
        auto R = truncated_polynomial_algebra<Fp>(t % 2, t % 2 ? 2 : 1);
        Index s = std::uniform_int_distribution<Index>(1, 3)(rng), r = std::uniform_int_distribution<Index>(1, 3)(rng);
        Index rk = std::uniform_int_distribution<Index>(0, std::min(s, r))(rng);
        int q = std::uniform_int_distribution<int>(1, 3)(rng);
        auto a = alpha_maps(q, gen::two_term(R, gen::split_map(*R, rng, r, s, rk)));
        good += a.hypotheses && a.all_iso();
    }
    return {good == n, frac(good, n) + " split maps over F_3 and F_3[y]/y^2: every alpha^i an isomorphism"};
}

Line criterion5()
{
    FpContext ctx(3);
    gen::Rng rng(seed ^ 5);
    int good = 0, n = 30;
    for (int t = 0; t < n; ++t) {
        auto R = truncated_polynomial_algebra<Fp>(t % 2, t % 2 ? 2 : 1);
        Index s = std::uniform_int_distribution<Index>(1, 2)(rng), r = std::uniform_int_distribution<Index>(1, 2)(rng);
        Index extra = std::uniform_int_distribution<Index>(0, 1)(rng);
        int q = std::uniform_int_distribution<int>(1, 3)(rng);
        auto m = kos_map(q, gen::quasi_iso(R, rng, r, s, extra));
        good += validate_chain_map(m).ok && is_quasi_iso(m).verdict;
    }
    return {good == n, frac(good, n) + " Kos^q of quasi-isomorphisms are quasi-isomorphisms (field and jet bases)"};
}

Line criterion6()
{
    FpContext ctx(5);
    gen::Rng rng(seed ^ 6);
    auto R = field_algebra<Fp>();
    int good = 0, n = 0;
    for (Index r1 = 1; r1 <= 2; ++r1)
        for (Index s1 = 1; s1 <= 2; ++s1)
            for (Index r2 = 1; r2 <= 2; ++r2)
                for (Index s2 = 1; s2 <= 2; ++s2)
                    for (int q = 1; q <= 3; ++q) {
                        auto u1 = gen::two_term(R, gen::map(*R, rng, r1, s1));
                        auto u2 = gen::two_term(R, gen::map(*R, rng, r2, s2));
                        auto S = kos_tensor_split(q, u1, u2);
                        ++n;
                        good += S.chain.ok && S.bijective;
                    }
    return {good == n, frac(good, n) + " tensor splittings over F_5, ranks <= 2, q <= 3"};
}

Line criterion7()
{
    gen::Rng rng(seed ^ 7);
    int good = 0, with_d2 = 0, n = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        FpContext ctx(p);
        for (int t = 0; t < 10; ++t, ++n) {
            auto f = gen::filtered_complex<Fp>(rng, 4, 4, 40);
            auto ps = pages(f, stabilization_page(f) + 1);
            bool ok = true;
            for (std::size_t r = 0; r + 1 < ps.size(); ++r) {
                auto c = check_transition(ps[r], ps[r + 1]);
                ok = ok && c.squares_zero && c.transition;
            }
            good += ok && oracle::page_dims(ps.back()) == oracle::graded_cohomology(f);
            with_d2 += ps.size() > 1 && !ps[1].differential_zero();
        }
    }
    FpContext f5(5);
    auto zz = total_complex(gen::zigzag<Fp>());
    bool d2 = page(zz, 2).d.count({0, 1}) == 1 && oracle::page_dims(e_infinity(zz)) == oracle::graded_cohomology(zz);
    return {good == n && d2, frac(good, n) + " filtered complexes match the dense oracle (" + std::to_string(with_d2) +
                                 " with d_2 != 0); zigzag d_2 " + (d2 ? "detected" : "missed")};
}

Line criterion8()
{
    gen::Rng rng(seed ^ 8);
    int agree = 0, n = 150;
    for (int t = 0; t < n; ++t) {
        std::uint32_t p = std::array<std::uint32_t, 3>{2, 3, 5}[std::size_t(t % 3)];
        auto h = gen::hodge_table(rng, 7);
        agree += degeneration_gate(h, p).witness == oracle::degeneration_candidates(h, p);
    }
    // every support pattern on a 4x4 grid inside the band |i-j| < p
    long gap_ok = 0, gaps = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        std::vector<std::pair<int, int>> band;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (std::abs(i - j) < int(p))
                    band.push_back({i, j});
        for (unsigned mask = 0; mask < (1u << band.size()); ++mask) {
            HodgeTable h;
            for (std::size_t k = 0; k < band.size(); ++k)
                if (mask >> k & 1)
                    h[band[k]] = 1;
            ++gaps;
            gap_ok += degeneration_gate(h, p).degenerates;
        }
    }
    return {agree == n && gap_ok == gaps, frac(agree, n) + " random tables agree with brute force; " + frac(gap_ok, gaps) +
                                              " band-supported tables degenerate"};
}

Line criterion9()
{
    FpContext ctx(3);
    gen::Rng rng(seed ^ 9);
    auto M = derham(DeRhamSpec{3, 2, 1, Flavor::Affine});
    auto base = to_table(M.cdga);
    int caught = 0, certified = 0, n = 100;
    for (int t = 0; t < n; ++t) {
        gen::Mutation where{};
        auto K = M.cdga;
        K.mult = gen::mutate(K, *base, rng, where);
        if (!validate_cdga(K).ok || theorem_map(K, 2, 1).status != Status::Verified) {
            ++caught;
            continue;
        }
        auto E = K;
        E.generators.clear();
        bool valid = validate_cdga(E).ok && verify_akc(E).ok();
        for (int q = 1; valid && q <= 2; ++q)
            for (int m = 1; valid && m <= q; ++m)
                valid = theorem_map(E, q, m).status == Status::Verified;
        certified += valid;
    }
    return {caught + certified == n && caught * 100 >= 95 * n,
            "caught " + frac(caught, n) + " mutations, remaining " + std::to_string(certified) + " certified valid"};
}

Line criterion10()
{
    auto a = io::dump(selftest(seed, Profile::Default).to_json());
    auto b = io::dump(selftest(seed, Profile::Default).to_json());
    return {a == b, std::string("two selftest reports ") + (a == b ? "byte-identical" : "differ") + " (" +
                        std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv)
{
    std::vector<std::function<Line()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                criterion6, criterion7, criterion8, criterion9, criterion10};
    std::set<int> pick;
    for (int i = 1; i < argc; ++i)
        pick.insert(std::atoi(argv[i]));
    int failures = 0;
    for (int c = 1; c <= int(criteria.size()); ++c) {
        if (!pick.empty() && !pick.count(c))
            continue;
        auto t0 = std::chrono::steady_clock::now();
        Line l{false, ""};
        try {
            l = criteria[std::size_t(c - 1)]();
        } catch (const std::exception& e) {
            l = {false, std::string("exception: ") + e.what()};
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !l.pass;
        std::printf("criterion %2d: %s  %s  (%.1fs)\n", c, l.pass ? "PASS" : "FAIL", l.summary.c_str(), dt);
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
