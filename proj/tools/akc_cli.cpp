// akc: generators, checkers and reports for abstract Koszul complexes.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 a hypothesis was
// refused, 3 invalid input.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "akc/derham.hpp"
#include "akc/io.hpp"
#include "akc/oracles.hpp"
#include "akc/reconstruct.hpp"
#include "akc/report.hpp"
#include "akc/selftest.hpp"

using namespace akc;
using io::Json;

namespace {

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string json_out;
    bool timings = false;
};

std::string read_all(const std::string& path)
{
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json read_json(const std::string& path)
{
    try {
        return io::parse(read_all(path));
    } catch (const io::ParseError& e) {
        throw io::ParseError(path.empty() || path == "-" ? std::string("<stdin>") : path, e.what());
    }
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot write " + path);
    out << text;
}

double since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Human text goes to stdout unless stdout carries an artifact.
int finish(const Report& rep, const Common& c, bool artifact_on_stdout)
{
    std::ostream& os = artifact_on_stdout ? std::cerr : std::cout;
    os << "akc " << rep.command << "  input " << rep.digest << "\n" << rep.text(c.timings);
    os << "exit " << rep.exit_code() << "\n";
    if (!c.json_out.empty())
        write_text(c.json_out, io::dump(rep.to_json(c.timings)));
    return rep.exit_code();
}

template <class F>
CDGA<F> read_cdga(const Json& j)
{
    return io::cdga_from<F>(j);
}

// ---------------------------------------------------------------------------

int cmd_derham(const Common& c, std::uint32_t p, int n, int N, const std::string& flavor, const std::string& out)
{
    if (flavor != "affine" && flavor != "torus")
        throw InvalidInput("--flavor must be affine or torus");
    DeRhamSpec s{p, n, N, flavor == "torus" ? Flavor::Torus : Flavor::Affine};
    check_spec(s);
    FpContext ctx(p);
    auto M = derham(s);
    Report rep;
    rep.command = "derham";
    rep.params = {{"p", p}, {"n", n}, {"jets", N}, {"flavor", flavor}};
    rep.digest = digest_of(rep.params);
    write_text(out, io::dump(io::cdga_json(M.cdga)));
    return finish(rep, c, out.empty() || out == "-");
}

int cmd_verify(const Common& c, const std::string& file)
{
    Json in = read_json(file);
    Report rep;
    rep.command = "verify-akc";
    rep.digest = digest_of(in);
    with_field(io::peek_field(in), [&]<class F>() {
        auto K = read_cdga<F>(in);
        auto t0 = std::chrono::steady_clock::now();
        auto r = verify_akc(K);
        double dt = since(t0);
        rep.add("cdga", r.cdga.ok, r.cdga.ok ? "method " + r.cdga.method : r.cdga.law + ": " + r.cdga.witness, dt);
        if (!r.cdga.ok)
            return;
        rep.add("C1", r.c1.ok, r.c1.detail);
        rep.add("C2", r.c2.ok, r.c2.detail);
        rep.add("C3", r.c3.ok, r.c3.detail);
        if (r.c2.ok) {
            rep.params["h1_rank"] = r.c2_detail.h1_rank;
            rep.params["cohomology_dims"] = r.c2_detail.h_dims;
        }
    });
    return finish(rep, c, false);
}

int cmd_kos(const Common& c, const std::string& file, int q, const std::string& out)
{
    if (q < 0)
        throw InvalidInput("--q must be nonnegative");
    Json in = read_json(file);
    Report rep;
    rep.command = "kos";
    rep.params = {{"q", q}};
    rep.digest = digest_of(Json::array({in, rep.params}));
    with_field(io::peek_field(in), [&]<class F>() {
        auto T = io::two_term_from<F>(in);
        if (kos_dimension(q, T.rankP, T.rankQ, T.R->dim()) > size_guard())
            throw std::length_error("Kos^q exceeds the size guard");
        auto t0 = std::chrono::steady_clock::now();
        auto K = kos(q, T);
        auto v = validate_complex(K.complex);
        rep.add("kos", v.ok, v.ok ? "d∘d = 0, R-linear" : v.message, since(t0));
        write_text(out, io::dump(io::complex_json(K.complex)));
    });
    return finish(rep, c, out.empty() || out == "-");
}

int cmd_reconstruct(const Common& c, const std::string& file, int q, int m, const std::string& emit, bool axioms)
{
    Json in = read_json(file);
    Report rep;
    rep.command = "reconstruct";
    rep.params = {{"q", q}, {"m", m}};
    rep.digest = digest_of(Json::array({in, rep.params}));
    with_field(io::peek_field(in), [&]<class F>() {
        auto K = read_cdga<F>(in);
        auto r = theorem_map(K, q, m, {axioms});
        if (r.status == Status::Refused) {
            rep.add("gate", Status::Refused, "clause " + r.clause + ": " + r.reason, r.elapsed);
            return;
        }
        rep.add("gate", Status::Verified, "q=" + std::to_string(q) + " m=" + std::to_string(m) + " admissible");
        std::string w = r.reason;
        if (r.bottom.ran)
            w += "; bottom degree " + std::string(r.bottom.ok ? "solved" : "unsolved");
        if (r.qi.induced_iso)
            w += "; induced maps " + std::string(*r.qi.induced_iso ? "bijective" : "not bijective");
        rep.add("reconstruct", r.status, w, r.elapsed);
        if (!emit.empty() && r.mu.source)
            write_text(emit, io::dump(io::chain_map_json(r.mu)));
    });
    return finish(rep, c, false);
}

int cmd_decompose(const Common& c, const std::string& file, int a, int b, const std::string& splitting, bool axioms)
{
    Json in = read_json(file);
    Json sj = splitting.empty() ? Json(nullptr) : read_json(splitting);
    Report rep;
    rep.command = "decompose";
    rep.params = {{"a", a}, {"b", b}, {"splitting", splitting.empty() ? "cohomology" : "file"}};
    rep.digest = digest_of(Json::array({in, sj, rep.params}));
    with_field(io::peek_field(in), [&]<class F>() {
        auto K = read_cdga<F>(in);
        ChainMap<F> s;
        try {
            if (sj.is_null())
                s = cohomology_splitting(K);
            else {
                auto tgt = std::make_shared<Complex<F>>(tau_leq(K.complex, 1));
                s = io::chain_map_from<F>(sj, "$", tgt);
                // A target in the file only documents the shape; the map lands in τ≤1 K.
                for (int i = s.lo; i < s.lo + int(s.f.size()); ++i)
                    if (s.f[std::size_t(i - s.lo)].rows() != tgt->ambient(i))
                        throw io::ParseError("$.components", "rows do not match τ≤1 K");
                s.target = tgt;
            }
        } catch (const Refusal& r) {
            rep.add("gate", Status::Refused, "clause " + r.clause + ": " + r.what());
            return;
        }
        auto r = decompose_range(K, a, b, s, {axioms});
        if (r.status == Status::Refused) {
            rep.add("gate", Status::Refused, "clause " + r.clause + ": " + r.reason, r.elapsed);
            return;
        }
        rep.add("gate", Status::Verified, "[" + std::to_string(a) + "," + std::to_string(b) + "] admissible");
        rep.add("splitting", r.splitting_check.verdict, "s: (R, R^h; 0) → τ≤1 K");
        std::string w = r.reason;
        if (r.factors)
            w += *r.factors ? "; factors through μ ∘ Kos(s)" : "; does not factor through μ ∘ Kos(s)";
        rep.add("decompose", r.status, w, r.elapsed);
    });
    return finish(rep, c, false);
}

int cmd_specseq(const Common& c, const std::string& file, int rmax)
{
    if (rmax < 1)
        throw InvalidInput("--rmax must be at least 1");
    Json in = read_json(file);
    Report rep;
    rep.command = "specseq";
    rep.params = {{"rmax", rmax}};
    rep.digest = digest_of(Json::array({in, rep.params}));
    std::ostringstream tables;
    with_field(io::peek_field(in), [&]<class F>() {
        auto f = io::filtered_from<F>(in);
        auto t0 = std::chrono::steady_clock::now();
        int rinf = stabilization_page(f);
        auto ps = pages(f, std::max(rmax, rinf));
        Json pj = Json::array();
        bool ok = true;
        std::string why;
        for (std::size_t r = 0; r < ps.size(); ++r) {
            if (ps[r].r <= rmax) {
                pj.push_back(io::page_json(ps[r]));
                tables << "E_" << ps[r].r << ":";
                for (const auto& [pq, cell] : ps[r].cells)
                    tables << "  (" << pq.first << "," << pq.second << ")=" << cell.dim;
                tables << (ps[r].differential_zero() ? "" : "   d_" + std::to_string(ps[r].r) + " ≠ 0") << "\n";
            }
            if (r + 1 < ps.size()) {
                auto chk = check_transition(ps[r], ps[r + 1]);
                if (!(chk.squares_zero && chk.transition)) {
                    ok = false;
                    why = chk.detail;
                }
            }
        }
        bool inf = oracle::page_dims(ps.back()) == oracle::graded_cohomology(f);
        rep.add("specseq", ok && inf,
                ok && inf ? "pages consistent; E_" + std::to_string(ps.back().r) + " = gr H"
                          : (ok ? "E_inf differs from gr H" : why),
                since(t0));
        rep.params["pages"] = std::move(pj);
        rep.params["stabilizes_by"] = rinf;
    });
    std::cout << tables.str();
    return finish(rep, c, false);
}

int cmd_degeneration(const Common& c, const std::string& file, std::uint32_t p)
{
    if (p < 2)
        throw InvalidInput("--p must be at least 2");
    Json in = file.empty() ? Json::parse(R"({"entries": []})") : read_json(file);
    auto h = io::hodge_from(in);
    Report rep;
    rep.command = "degeneration";
    rep.params = {{"p", p}};
    rep.digest = digest_of(Json::array({in, rep.params}));
    auto v = degeneration_gate(h, p);
    std::string w;
    for (const auto& d : v.witness)
        w += (w.empty() ? "possible d_r: " : ", ") + std::string("(") + std::to_string(d.i) + "," +
             std::to_string(d.j) + ",r=" + std::to_string(d.r) + ")";
    rep.add("degeneration", v.degenerates, v.degenerates ? "degenerates by gap" : w);
    return finish(rep, c, false);
}

int cmd_selftest(const Common& c, std::uint64_t seed, const std::string& profile)
{
    return finish(selftest(seed, profile_from(profile)), c, false);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"akc: abstract Koszul complexes, exact checks"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--json", common.json_out, "write the machine report to this file");
        s->add_flag("--timings", common.timings, "include elapsed times in reports");
    };

    std::uint32_t p = 3;
    int n = 1, N = 1, q = 1, m = 1, a = 0, b = 0, rmax = 3;
    std::string flavor = "affine", out, file, emit, splitting, hodge, profile = "default";
    std::uint64_t seed = 1;
    bool no_axioms = false;

    auto* derham_cmd = app.add_subcommand("derham", "generate the truncated de Rham cdga");
    derham_cmd->add_option("--p", p, "prime")->required();
    derham_cmd->add_option("--n", n, "number of variables")->required();
    derham_cmd->add_option("--jets", N, "order N of k[y]/(y)^N as base");
    derham_cmd->add_option("--flavor", flavor, "affine or torus");
    derham_cmd->add_option("--out", out, "output file (default stdout)");
    add_common(derham_cmd);

    auto* verify_cmd = app.add_subcommand("verify-akc", "check the cdga laws and C1-C3");
    verify_cmd->add_option("file", file, "cdga JSON (default stdin)");
    add_common(verify_cmd);

    auto* kos_cmd = app.add_subcommand("kos", "Koszul complex of a two-term complex");
    kos_cmd->add_option("file", file, "two-term complex JSON (default stdin)");
    kos_cmd->add_option("--q", q, "degree")->required();
    kos_cmd->add_option("--out", out, "output file (default stdout)");
    add_common(kos_cmd);

    auto* rec_cmd = app.add_subcommand("reconstruct", "build and verify the reconstruction map");
    rec_cmd->add_option("file", file, "cdga JSON (default stdin)");
    rec_cmd->add_option("--q", q)->required();
    rec_cmd->add_option("--m", m)->required();
    rec_cmd->add_option("--emit-map", emit, "write the chain map JSON here");
    rec_cmd->add_flag("--no-axioms", no_axioms, "skip re-checking the cdga laws and C1-C3");
    add_common(rec_cmd);

    auto* dec_cmd = app.add_subcommand("decompose", "decomposition witness for τ[a,b]");
    dec_cmd->add_option("file", file, "cdga JSON (default stdin)");
    dec_cmd->add_option("--a", a)->required();
    dec_cmd->add_option("--b", b)->required();
    dec_cmd->add_option("--splitting", splitting, "chain map JSON (R, R^h; 0) → τ≤1 K");
    dec_cmd->add_flag("--no-axioms", no_axioms, "skip re-checking the cdga laws and C1-C3");
    add_common(dec_cmd);

    auto* ss_cmd = app.add_subcommand("specseq", "pages of a filtered complex");
    ss_cmd->add_option("file", file, "filtered complex or complex JSON")->required();
    ss_cmd->add_option("--rmax", rmax, "last page to print");
    add_common(ss_cmd);

    auto* deg_cmd = app.add_subcommand("degeneration", "degeneration by gap of a Hodge table");
    deg_cmd->add_option("--hodge", hodge, "Hodge table JSON (default: empty table)");
    deg_cmd->add_option("--p", p)->required();
    add_common(deg_cmd);

    auto* self_cmd = app.add_subcommand("selftest", "run the property suite");
    self_cmd->add_option("--seed", seed);
    self_cmd->add_option("--profile", profile, "quick, default or corrupted");
    add_common(self_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (*derham_cmd)
            return cmd_derham(common, p, n, N, flavor, out);
        if (*verify_cmd)
            return cmd_verify(common, file);
        if (*kos_cmd)
            return cmd_kos(common, file, q, out);
        if (*rec_cmd)
            return cmd_reconstruct(common, file, q, m, emit, !no_axioms);
        if (*dec_cmd)
            return cmd_decompose(common, file, a, b, splitting, !no_axioms);
        if (*ss_cmd)
            return cmd_specseq(common, file, rmax);
        if (*deg_cmd)
            return cmd_degeneration(common, hodge, p);
        if (*self_cmd)
            return cmd_selftest(common, seed, profile);
    } catch (const io::ParseError& e) {
        std::cerr << "akc: invalid input at " << e.what() << "\n";
        return 3;
    } catch (const std::length_error& e) {
        std::cerr << "akc: too large: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "akc: invalid input: " << e.what() << "\n";
        return 3;
    } catch (const InvalidInput& e) {
        std::cerr << "akc: " << e.what() << "\n";
        return 3;
    } catch (const StructuralError& e) {
        std::cerr << "akc: invalid input: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
