#include "akc/selftest.hpp"

#include <chrono>
#include <functional>
#include <set>
#include <stdexcept>

#include "akc/derham.hpp"
#include "akc/generators.hpp"
#include "akc/io.hpp"
#include "akc/oracles.hpp"
#include "akc/reconstruct.hpp"

namespace akc {

Profile profile_from(const std::string& name)
{
    if (name == "quick")
        return Profile::Quick;
    if (name == "default")
        return Profile::Default;
    if (name == "corrupted")
        return Profile::Corrupted;
    throw std::invalid_argument("unknown profile " + name + " (quick, default, corrupted)");
}

const char* profile_name(Profile p)
{
    switch (p) {
    case Profile::Quick:
        return "quick";
    case Profile::Default:
        return "default";
    default:
        return "corrupted";
    }
}

namespace {

struct Sizes {
    int trials;     // per random property
    int tables;     // Hodge tables
    int mutations;  // table mutations
    Count derham_limit;
};

Sizes sizes_for(Profile p)
{
    if (p == Profile::Default)
        return {50, 100, 100, 2000};
    return {5, 20, 10, 300};
}

struct Outcome {
    Status status;
    std::string witness;
};

Outcome ok_if(bool ok, std::string witness) { return {ok ? Status::Verified : Status::Failed, std::move(witness)}; }

std::string count_text(int good, int total) { return std::to_string(good) + "/" + std::to_string(total); }

class Runner {
public:
    Runner(Report& r, std::uint64_t seed) : rep_(r), seed_(seed) {}

    // Each check gets its own stream so that adding checks never shifts others.
    gen::Rng rng(const std::string& name) const { return gen::Rng(seed_ ^ io::fnv1a(name)); }

    void run(const std::string& name, const std::function<Outcome()>& fn, bool planted = false)
    {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o{Status::Failed, ""};
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {Status::Failed, std::string("exception: ") + e.what()};
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (planted) {
            planted_.insert(rep_.checks.size());
            o.witness = "planted: " + o.witness;
        }
        rep_.add(name, o.status, o.witness, dt);
    }

    const std::set<std::size_t>& planted() const { return planted_; }

private:
    Report& rep_;
    std::uint64_t seed_;
    std::set<std::size_t> planted_;
};

std::vector<DeRhamSpec> derham_specs(Count limit)
{
    std::vector<DeRhamSpec> out;
    for (std::uint32_t p : {2u, 3u, 5u})
        for (int N : {1, 2})
            for (int n = 1;; ++n) {
                DeRhamSpec s{p, n, N, Flavor::Affine};
                if (s.total_dim() > limit)
                    break;
                out.push_back(s);
            }
    return out;
}

template <class F>
AlgebraPtr<F> small_algebra(gen::Rng& rng)
{
    int vars = std::uniform_int_distribution<int>(0, 1)(rng);
    return truncated_polynomial_algebra<F>(vars, vars ? 2 : 1);
}

// Perturbs one entry of the first differential.
template <class F>
void corrupt(Complex<F>& K)
{
    auto& d = K.d.front();
    d.coeffRef(0, 0) += F(1);
    d.prune([](Index, Index, const F& x) { return !is_zero(x); });
}

template <class F>
bool same_text(const io::Json& j, const std::function<io::Json(const io::Json&)>& reread)
{
    std::string a = io::dump(j);
    return io::dump(reread(io::parse(a))) == a;
}

void linear_checks(Runner& run, const Sizes& z, Profile profile)
{
    run.run("algebra", [&] {
        FpContext ctx(3);
        auto rng = run.rng("algebra");
        int good = 0;
        for (int t = 0; t < z.trials; ++t) {
            int vars = std::uniform_int_distribution<int>(0, 2)(rng);
            int order = std::uniform_int_distribution<int>(1, 3)(rng);
            good += verify_algebra(*truncated_polynomial_algebra<Fp>(vars, order)).ok;
        }
        return ok_if(good == z.trials, count_text(good, z.trials) + " truncated polynomial algebras");
    });
    run.run("linalg", [&] {
        FpContext ctx(5);
        auto rng = run.rng("linalg");
        int good = 0;
        for (int t = 0; t < z.trials; ++t) {
            Index r = std::uniform_int_distribution<Index>(1, 6)(rng), c = std::uniform_int_distribution<Index>(1, 6)(rng);
            Matrix<Fp> a(r, c);
            for (Index i = 0; i < r; ++i)
                for (Index j = 0; j < c; ++j)
                    a(i, j) = std::uniform_int_distribution<int>(0, 2)(rng) ? Fp(0) : gen::scalar<Fp>(rng);
            Matrix<Fp> k = kernel_basis<Fp>(a);
            bool ok = rank<Fp>(a) + k.cols() == c && is_zero_matrix<Fp>(Matrix<Fp>(a * k)) &&
                      rank<Fp>(to_sparse<Fp>(a)) == rank<Fp>(a);
            good += ok;
        }
        return ok_if(good == z.trials, count_text(good, z.trials) + " matrices: rank-nullity, kernel, sparse rank");
    });
    run.run("kos", [&] {
        FpContext ctx(3);
        auto rng = run.rng("kos");
        int good = 0;
        for (int t = 0; t < z.trials; ++t) {
            auto R = small_algebra<Fp>(rng);
            Index s = std::uniform_int_distribution<Index>(1, 3)(rng), r = std::uniform_int_distribution<Index>(1, 3)(rng);
            int q = std::uniform_int_distribution<int>(1, 3)(rng);
            good += validate_complex(kos(q, gen::two_term(R, gen::map(*R, rng, r, s))).complex).ok;
        }
        return ok_if(good == z.trials, count_text(good, z.trials) + " Koszul complexes with d∘d = 0");
    });
    if (profile == Profile::Corrupted)
        run.run("kos", [&] {
            FpContext ctx(3);
            auto rng = run.rng("kos/planted");
            auto R = truncated_polynomial_algebra<Fp>(1, 2);
            auto K = kos(2, gen::two_term(R, gen::map(*R, rng, 2, 2))).complex;
            corrupt(K);
            auto c = validate_complex(K);
            return ok_if(c.ok, "perturbed Kos^2 differential: " + (c.ok ? std::string("accepted") : c.message));
        }, true);
    run.run("alpha", [&] {
        FpContext ctx(3);
        auto rng = run.rng("alpha");
        int good = 0;
        for (int t = 0; t < z.trials; ++t) {
            auto R = truncated_polynomial_algebra<Fp>(t % 2, t % 2 ? 2 : 1);
            Index s = std::uniform_int_distribution<Index>(1, 3)(rng), r = std::uniform_int_distribution<Index>(1, 3)(rng);
            Index rk = std::uniform_int_distribution<Index>(0, std::min(s, r))(rng);
            int q = std::uniform_int_distribution<int>(1, 3)(rng);
            auto a = alpha_maps(q, gen::two_term(R, gen::split_map(*R, rng, r, s, rk)));
            good += a.hypotheses && a.all_iso();
        }
        return ok_if(good == z.trials, count_text(good, z.trials) + " split maps: every α^i an isomorphism");
    });
    run.run("kos-qi", [&] {
        FpContext ctx(3);
        auto rng = run.rng("kos-qi");
        int good = 0, n = std::max(5, z.trials / 2);
        for (int t = 0; t < n; ++t) {
            auto R = truncated_polynomial_algebra<Fp>(t % 2, t % 2 ? 2 : 1);
            Index s = std::uniform_int_distribution<Index>(1, 2)(rng), r = std::uniform_int_distribution<Index>(1, 2)(rng);
            Index extra = std::uniform_int_distribution<Index>(0, 1)(rng);
            int q = std::uniform_int_distribution<int>(1, 3)(rng);
            auto m = kos_map(q, gen::quasi_iso(R, rng, r, s, extra));
            good += validate_chain_map(m).ok && is_quasi_iso(m).verdict;
        }
        return ok_if(good == n, count_text(good, n) + " quasi-isomorphisms of two-term complexes");
    });
    run.run("kos-tensor", [&] {
        FpContext ctx(5);
        auto rng = run.rng("kos-tensor");
        auto R = field_algebra<Fp>();
        int good = 0, n = std::max(3, z.trials / 5);
        for (int t = 0; t < n; ++t) {
            auto u1 = gen::two_term(R, gen::map(*R, rng, 1 + t % 2, 1 + (t / 2) % 2));
            auto u2 = gen::two_term(R, gen::map(*R, rng, 1 + (t / 3) % 2, 1 + t % 2));
            auto S = kos_tensor_split(1 + t % 3, u1, u2);
            good += S.chain.ok && S.bijective;
        }
        return ok_if(good == n, count_text(good, n) + " tensor splittings over F_5");
    });
}

void derham_checks(Runner& run, const Sizes& z, Profile profile)
{
    auto specs = derham_specs(z.derham_limit);
    struct Tally {
        int cdga = 0, c1 = 0, c2 = 0, c3 = 0, dims = 0;
        std::string first_failure;
    } tally;
    for (const auto& s : specs) {
        FpContext ctx(s.p);
        auto M = derham(s);
        auto r = verify_akc(M.cdga);
        tally.cdga += r.cdga.ok;
        tally.c1 += r.c1.ok;
        tally.c2 += r.c2.ok;
        tally.c3 += r.c3.ok;
        auto h = cohomology_dims(coordinatize(M.cdga.complex).k);
        bool dims = int(h.size()) == s.n + 1;
        for (int q = 0; dims && q <= s.n; ++q)
            dims = h[std::size_t(q)] == binomial(s.n, q) * s.algebra_dim();
        tally.dims += dims;
        if (!r.ok() && tally.first_failure.empty())
            tally.first_failure = s.name() + ": " + (r.cdga.ok ? r.c1.detail + "; " + r.c2.detail : r.cdga.witness);
    }
    int n = int(specs.size());
    auto line = [&](int good, const char* what) {
        std::string w = count_text(good, n) + " de Rham models " + what;
        if (good != n && !tally.first_failure.empty())
            w += "; " + tally.first_failure;
        return ok_if(good == n, w);
    };
    run.run("cdga", [&] { return line(tally.cdga, "pass validate_cdga"); });
    run.run("C1", [&] { return line(tally.c1, "satisfy C1"); });
    run.run("C2", [&] { return line(tally.c2, "satisfy C2"); });
    run.run("C3", [&] { return line(tally.c3, "satisfy C3"); });
    run.run("dims", [&] { return line(tally.dims, "have dim H^q = C(n,q)·dim R"); });
    if (profile == Profile::Corrupted)
        run.run("cdga", [&] {
            FpContext ctx(3);
            auto M = derham(DeRhamSpec{3, 2, 1, Flavor::Affine});
            auto t = to_table(M.cdga);
            auto x1 = M.form({1, 0}, {})[0].first;
            auto dx1 = M.form({0, 0}, {0})[0].first;
            auto x1dx1 = M.form({1, 0}, {0})[0].first;
            t->set(0, x1, 1, dx1, {{x1dx1, Fp(2)}});
            auto K = M.cdga;
            K.mult = t;
            auto r = validate_cdga(K);
            return ok_if(r.ok, "x1·dx1 := 2 x1dx1 in p=3 n=2: " + (r.ok ? std::string("accepted") : r.law + " at " + r.witness));
        }, true);
}

void reconstruction_checks(Runner& run, Profile profile)
{
    run.run("gate", [&] {
        FpContext ctx(3);
        auto M = derham(DeRhamSpec{3, 3, 1, Flavor::Affine});
        auto r32 = theorem_map(M.cdga, 3, 2, {false});
        auto r33 = theorem_map(M.cdga, 3, 3, {false});
        auto r12 = theorem_map(M.cdga, 1, 2, {false});
        bool ok = r32.status == Status::Refused && r32.clause == "m+1" && r33.status == Status::Refused &&
                  r33.clause == "m!" && r12.status == Status::Refused && r12.clause == "range";
        return ok_if(ok, "p=3 n=3: (3,2) " + r32.clause + ", (3,3) " + r33.clause + ", (1,2) " + r12.clause);
    });
    std::vector<DeRhamSpec> specs{{3, 2, 1, Flavor::Affine}, {2, 2, 1, Flavor::Affine}};
    if (profile == Profile::Default) {
        specs.push_back({3, 2, 2, Flavor::Affine});
        specs.push_back({5, 2, 1, Flavor::Affine});
        specs.push_back({3, 3, 1, Flavor::Affine});
    }
    run.run("reconstruct", [&] {
        int good = 0, total = 0;
        std::string bad;
        for (const auto& s : specs) {
            FpContext ctx(s.p);
            auto M = derham(s);
            for (int q = 1; q <= s.n; ++q)
                for (int m = 1; m <= q; ++m) {
                    if (theorem_gate(M.R(), q, m))
                        continue;
                    ++total;
                    auto r = theorem_map(M.cdga, q, m, {false});
                    if (r.status == Status::Verified)
                        ++good;
                    else if (bad.empty())
                        bad = "; " + s.name() + " (q,m)=(" + std::to_string(q) + "," + std::to_string(m) + "): " + r.reason;
                }
        }
        return ok_if(good == total, count_text(good, total) + " admissible (q,m) verified" + bad);
    });
    run.run("splitting", [&] {
        int good = 0;
        for (const auto& s : specs) {
            FpContext ctx(s.p);
            good += canonical_splitting(derham(s)).check.verdict;
        }
        return ok_if(good == int(specs.size()), count_text(good, int(specs.size())) + " canonical splittings");
    });
    run.run("decompose", [&] {
        int good = 0, total = 0;
        std::string bad;
        for (const auto& s : specs) {
            FpContext ctx(s.p);
            auto M = derham(s);
            auto sp = canonical_splitting(M).s;
            for (int a = 0; a <= s.n; ++a)
                for (int b = a; b <= s.n && b - a < int(s.p) - 1; ++b) {
                    ++total;
                    auto r = decompose_range(M.cdga, a, b, sp, {false});
                    if (r.status == Status::Verified)
                        ++good;
                    else if (bad.empty())
                        bad = "; " + s.name() + " [" + std::to_string(a) + "," + std::to_string(b) + "]: " + r.reason;
                }
        }
        return ok_if(good == total, count_text(good, total) + " ranges decomposed" + bad);
    });
}

void spectral_checks(Runner& run, const Sizes& z, Profile profile)
{
    run.run("specseq", [&] {
        FpContext ctx(3);
        auto rng = run.rng("specseq");
        int good = 0, with_d2 = 0, n = std::max(5, z.trials / 2);
        for (int t = 0; t < n; ++t) {
            auto f = gen::filtered_complex<Fp>(rng, 4, 4, 30);
            auto ps = pages(f, stabilization_page(f) + 1);
            bool ok = true;
            for (std::size_t r = 0; r + 1 < ps.size(); ++r) {
                auto c = check_transition(ps[r], ps[r + 1]);
                ok = ok && c.squares_zero && c.transition;
            }
            ok = ok && oracle::page_dims(ps.back()) == oracle::graded_cohomology(f);
            good += ok;
            with_d2 += ps.size() > 1 && !ps[1].differential_zero();
        }
        bool d2 = [] {
            FpContext f5(5);
            auto zz = total_complex(gen::zigzag<Fp>());
            return page(zz, 2).d.count({0, 1}) == 1 &&
                   oracle::page_dims(e_infinity(zz)) == oracle::graded_cohomology(zz);
        }();
        return ok_if(good == n && d2, count_text(good, n) + " filtered complexes with E_inf = gr H, " +
                                          std::to_string(with_d2) + " with d_2 ≠ 0; zigzag d_2 " +
                                          (d2 ? "detected" : "missed"));
    });
    if (profile == Profile::Corrupted)
        run.run("specseq", [&] {
            FpContext ctx(5);
            KComplex<Fp> k;
            k.lo = 0;
            k.dims = {1, 1};
            k.d = {to_sparse<Fp>(Matrix<Fp>::Constant(1, 1, Fp(1)))};
            try {
                make_filtered(k, {{1}, {0}});
            } catch (const std::invalid_argument& e) {
                return ok_if(false, std::string("filtration not respected by d: ") + e.what());
            }
            return ok_if(true, "filtration not respected by d: accepted");
        }, true);
    run.run("degeneration", [&] {
        auto rng = run.rng("degeneration");
        int good = 0;
        for (int t = 0; t < z.tables; ++t) {
            std::uint32_t p = std::array<std::uint32_t, 3>{2, 3, 5}[std::size_t(t % 3)];
            auto h = gen::hodge_table(rng, 7);
            HodgeTable gap;
            for (const auto& [ij, x] : h)
                if (std::abs(ij.first - ij.second) < int(p))
                    gap[ij] = x;
            good += degeneration_gate(h, p).witness == oracle::degeneration_candidates(h, p) &&
                    degeneration_gate(gap, p).degenerates;
        }
        return ok_if(good == z.tables, count_text(good, z.tables) + " Hodge tables agree with brute force");
    });
}

void mutation_check(Runner& run, const Sizes& z)
{
    run.run("mutations", [&] {
        FpContext ctx(3);
        auto rng = run.rng("mutations");
        auto M = derham(DeRhamSpec{3, 2, 1, Flavor::Affine});
        auto base = to_table(M.cdga);
        int caught = 0, certified = 0;
        for (int t = 0; t < z.mutations; ++t) {
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
        bool ok = caught + certified == z.mutations && caught * 100 >= 95 * z.mutations;
        return ok_if(ok, "caught " + count_text(caught, z.mutations) + ", certified valid " + std::to_string(certified));
    });
}

void round_trip_check(Runner& run)
{
    run.run("round-trip", [&] {
        std::vector<std::string> bad;
        auto rng = run.rng("round-trip");
        FpContext ctx(3);
        auto M = derham(DeRhamSpec{3, 1, 2, Flavor::Affine});
        const auto& K = M.cdga;
        if (!same_text<Fp>(io::algebra_json(M.R()), [](const io::Json& j) { return io::algebra_json(*io::algebra_from<Fp>(j)); }))
            bad.push_back("algebra");
        auto C = tau_range(K.complex, 0, 1);
        if (!same_text<Fp>(io::complex_json(C), [](const io::Json& j) { return io::complex_json(io::complex_from<Fp>(j)); }))
            bad.push_back("complex");
        if (!same_text<Fp>(io::cdga_json(K), [](const io::Json& j) { return io::cdga_json(io::cdga_from<Fp>(j)); }))
            bad.push_back("cdga");
        auto T = gen::two_term(M.cdga.complex.R, gen::map(M.R(), rng, 2, 3));
        if (!same_text<Fp>(io::two_term_json(T), [](const io::Json& j) { return io::two_term_json(io::two_term_from<Fp>(j)); }))
            bad.push_back("two-term");
        auto s = canonical_splitting(M).s;
        if (!same_text<Fp>(io::chain_map_json(s), [](const io::Json& j) { return io::chain_map_json(io::chain_map_from<Fp>(j)); }))
            bad.push_back("chain map");
        auto f = gen::filtered_complex<Fp>(rng, 3, 3, 12);
        if (!same_text<Fp>(io::filtered_json(f), [](const io::Json& j) { return io::filtered_json(io::filtered_from<Fp>(j)); }))
            bad.push_back("filtered complex");
        auto h = gen::hodge_table(rng, 5);
        if (!same_text<Fp>(io::hodge_json(h), [](const io::Json& j) { return io::hodge_json(io::hodge_from(j)); }))
            bad.push_back("hodge table");
        auto Q = truncated_polynomial_algebra<Rational>(1, 3);
        if (!same_text<Rational>(io::algebra_json(*Q), [](const io::Json& j) { return io::algebra_json(*io::algebra_from<Rational>(j)); }))
            bad.push_back("rational algebra");
        std::string w = "algebra, complex, cdga, two-term, chain map, filtered complex, hodge table over F_3; algebra over Q";
        for (const auto& b : bad)
            w += "; mismatch: " + b;
        return ok_if(bad.empty(), w);
    });
}

}  // namespace

Report selftest(std::uint64_t seed, Profile profile)
{
    Report rep;
    rep.command = "selftest";
    rep.seed = seed;
    rep.params["profile"] = profile_name(profile);
    rep.params["seed"] = seed;
    rep.digest = digest_of(rep.params);
    Sizes z = sizes_for(profile);
    Runner run(rep, seed);
    linear_checks(run, z, profile);
    derham_checks(run, z, profile);
    reconstruction_checks(run, profile);
    spectral_checks(run, z, profile);
    mutation_check(run, z);
    round_trip_check(run);
    if (profile == Profile::Corrupted) {
        std::set<std::size_t> failed;
        for (std::size_t i = 0; i < rep.checks.size(); ++i)
            if (rep.checks[i].status == Status::Failed)
                failed.insert(i);
        auto planted = run.planted();
        rep.add("planted", failed == planted,
                "failing checks " + std::to_string(failed.size()) + ", planted " + std::to_string(planted.size()) +
                    (failed == planted ? ", identical" : ", different"));
    }
    return rep;
}

}  // namespace akc
