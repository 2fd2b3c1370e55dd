#pragma once

// JSON encodings of the artifact types. Scalars are strings in the text
// encoding of scalar.hpp, matrices are {"rows", "cols", "entries"} with
// [row, col, scalar] triples in column-major order, and vectors are lists of
// [index, scalar] pairs. Readers also take dense forms: a vector as a list of
// scalars, a matrix as a list of rows.
//
// Every writer emits keys in a fixed order so that write ∘ read ∘ write is
// byte-identical.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "akc/cdga.hpp"
#include "akc/config.hpp"
#include "akc/koszul.hpp"
#include "akc/specseq.hpp"

namespace akc::io {

using Json = nlohmann::ordered_json;

// `where` is a JSON path ("$.terms[1].Z") or, for syntax errors, a byte offset.
struct ParseError : std::runtime_error {
    std::string where;
    ParseError(std::string at, const std::string& msg) : std::runtime_error(at + ": " + msg), where(std::move(at)) {}
};

Json parse(const std::string& text);
std::string dump(const Json& j);
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

Json field_json(const FieldDesc& f);
FieldDesc field_from(const Json& j, const std::string& at);

// The base field of any artifact: "base", "algebra.base" or "source.algebra.base".
FieldDesc peek_field(const Json& j);

namespace detail {

const Json& need(const Json& j, const char* key, const std::string& at);
std::int64_t integer(const Json& j, const std::string& at);
inline std::string sub(const std::string& at, const char* key) { return at + "." + key; }
inline std::string sub(const std::string& at, std::size_t i) { return at + "[" + std::to_string(i) + "]"; }
void expect_array(const Json& j, const std::string& at);

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalars, vectors, matrices

template <class F>
Json scalar_json(const F& c)
{
    return to_text(c);
}

template <class F>
F scalar_from(const Json& j, const std::string& at)
{
    if (j.is_number_integer())
        return from_integer<F>(BigInt(j.get<std::int64_t>()));
    if (!j.is_string())
        throw ParseError(at, "expected a scalar string");
    try {
        return parse_scalar<F>(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ParseError(at, e.what());
    }
}

template <class F>
Json vector_json(const SparseVec<F>& v)
{
    Json out = Json::array();
    for (const auto& [i, c] : v)
        out.push_back(Json::array({i, scalar_json(c)}));
    return out;
}

template <class F>
SparseVec<F> vector_from(const Json& j, Index dim, const std::string& at)
{
    detail::expect_array(j, at);
    SparseVec<F> out;
    bool dense = !j.empty() && !j.front().is_array();
    if (dense && Index(j.size()) != dim)
        throw ParseError(at, "dense vector of length " + std::to_string(j.size()) + ", expected " +
                                 std::to_string(dim));
    for (std::size_t k = 0; k < j.size(); ++k) {
        auto here = detail::sub(at, k);
        if (dense) {
            out.emplace_back(Index(k), scalar_from<F>(j[k], here));
            continue;
        }
        if (!j[k].is_array() || j[k].size() != 2)
            throw ParseError(here, "expected [index, scalar]");
        Index i = detail::integer(j[k][0], here);
        if (i < 0 || i >= dim)
            throw ParseError(here, "index " + std::to_string(i) + " out of range [0, " + std::to_string(dim) + ")");
        out.emplace_back(i, scalar_from<F>(j[k][1], here));
    }
    return canonicalize(std::move(out));
}

template <class F>
Json vector_list_json(const std::vector<SparseVec<F>>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs)
        out.push_back(vector_json(v));
    return out;
}

template <class F>
std::vector<SparseVec<F>> vector_list_from(const Json& j, Index dim, const std::string& at)
{
    detail::expect_array(j, at);
    std::vector<SparseVec<F>> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(vector_from<F>(j[k], dim, detail::sub(at, k)));
    return out;
}

template <class F>
Json matrix_json(const SpMat<F>& m)
{
    Json e = Json::array();
    for (Index c = 0; c < m.outerSize(); ++c)
        for (typename SpMat<F>::InnerIterator it(m, c); it; ++it)
            if (!is_zero(it.value()))
                e.push_back(Json::array({it.row(), it.col(), scalar_json(it.value())}));
    Json out = Json::object();
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["entries"] = std::move(e);
    return out;
}

// rows/cols < 0 means unchecked.
template <class F>
SpMat<F> matrix_from(const Json& j, Index rows, Index cols, const std::string& at)
{
    std::vector<Eigen::Triplet<F, Index>> t;
    Index r = 0, c = 0;
    if (j.is_array()) {
        r = Index(j.size());
        c = r ? Index(j[0].size()) : (cols < 0 ? 0 : cols);
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto here = detail::sub(at, i);
            detail::expect_array(j[i], here);
            if (Index(j[i].size()) != c)
                throw ParseError(here, "ragged matrix row");
            for (std::size_t k = 0; k < j[i].size(); ++k) {
                F x = scalar_from<F>(j[i][k], detail::sub(here, k));
                if (!is_zero(x))
                    t.emplace_back(Index(i), Index(k), x);
            }
        }
    } else if (j.is_object()) {
        r = detail::integer(detail::need(j, "rows", at), detail::sub(at, "rows"));
        c = detail::integer(detail::need(j, "cols", at), detail::sub(at, "cols"));
        if (r < 0 || c < 0)
            throw ParseError(at, "negative matrix shape");
        const auto& e = detail::need(j, "entries", at);
        auto eat = detail::sub(at, "entries");
        detail::expect_array(e, eat);
        for (std::size_t k = 0; k < e.size(); ++k) {
            auto here = detail::sub(eat, k);
            if (!e[k].is_array() || e[k].size() != 3)
                throw ParseError(here, "expected [row, col, scalar]");
            Index i = detail::integer(e[k][0], here), l = detail::integer(e[k][1], here);
            if (i < 0 || i >= r || l < 0 || l >= c)
                throw ParseError(here, "entry outside the matrix");
            t.emplace_back(i, l, scalar_from<F>(e[k][2], here));
        }
    } else {
        throw ParseError(at, "expected a matrix");
    }
    if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols))
        throw ParseError(at, "matrix is " + std::to_string(r) + "×" + std::to_string(c) + ", expected " +
                                 std::to_string(rows) + "×" + std::to_string(cols));
    SpMat<F> m(r, c);
    m.setFromTriplets(t.begin(), t.end());
    m.prune([](Index, Index, const F& x) { return !is_zero(x); });
    m.makeCompressed();
    return m;
}

// ---------------------------------------------------------------------------
// LocalAlgebra

template <class F>
Json algebra_json(const LocalAlgebra<F>& R)
{
    Index d = R.dim();
    Json st = Json::array();
    for (Index i = 0; i < d; ++i) {
        Json row = Json::array();
        for (Index j = 0; j < d; ++j) {
            Json v = Json::array();
            Vector<F> s = R.structure(i, j);
            for (Index l = 0; l < d; ++l)
                v.push_back(scalar_json(s(l)));
            row.push_back(std::move(v));
        }
        st.push_back(std::move(row));
    }
    Json unit = Json::array();
    for (Index l = 0; l < d; ++l)
        unit.push_back(scalar_json(R.unit()(l)));
    Json out = Json::object();
    out["base"] = field_json(R.base());
    out["dim"] = d;
    out["labels"] = R.labels();
    out["structure"] = std::move(st);
    out["unit"] = std::move(unit);
    return out;
}

template <class F>
AlgebraPtr<F> algebra_from(const Json& j, const std::string& at = "$")
{
    if (!j.is_object())
        throw ParseError(at, "expected an algebra object");
    auto base = field_from(detail::need(j, "base", at), detail::sub(at, "base"));
    if (base != ScalarTraits<F>::desc())
        throw ParseError(detail::sub(at, "base"), "base field differs from " + ScalarTraits<F>::desc().name());
    Index d = detail::integer(detail::need(j, "dim", at), detail::sub(at, "dim"));
    if (d < 1)
        throw ParseError(detail::sub(at, "dim"), "dimension must be at least 1");
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        const auto& l = j["labels"];
        detail::expect_array(l, detail::sub(at, "labels"));
        for (std::size_t k = 0; k < l.size(); ++k) {
            if (!l[k].is_string())
                throw ParseError(detail::sub(detail::sub(at, "labels"), k), "expected a string");
            labels.push_back(l[k].get<std::string>());
        }
        if (Index(labels.size()) != d)
            throw ParseError(detail::sub(at, "labels"), "wrong number of labels");
    } else {
        for (Index k = 0; k < d; ++k)
            labels.push_back("b" + std::to_string(k));
    }
    auto dense = [&](const Json& v, const std::string& here) {
        detail::expect_array(v, here);
        if (Index(v.size()) != d)
            throw ParseError(here, "expected " + std::to_string(d) + " coordinates");
        Vector<F> out(d);
        for (Index l = 0; l < d; ++l)
            out(l) = scalar_from<F>(v[std::size_t(l)], detail::sub(here, std::size_t(l)));
        return out;
    };
    auto sat = detail::sub(at, "structure");
    const auto& st = detail::need(j, "structure", at);
    detail::expect_array(st, sat);
    if (Index(st.size()) != d)
        throw ParseError(sat, "expected " + std::to_string(d) + " rows");
    std::vector<std::vector<Vector<F>>> s(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < st.size(); ++i) {
        auto rat = detail::sub(sat, i);
        detail::expect_array(st[i], rat);
        if (Index(st[i].size()) != d)
            throw ParseError(rat, "expected " + std::to_string(d) + " entries");
        for (std::size_t k = 0; k < st[i].size(); ++k)
            s[i].push_back(dense(st[i][k], detail::sub(rat, k)));
    }
    Vector<F> unit = dense(detail::need(j, "unit", at), detail::sub(at, "unit"));
    return std::make_shared<LocalAlgebra<F>>(base, labels, s, unit);
}

// ---------------------------------------------------------------------------
// Complexes

template <class F>
Json complex_json(const Complex<F>& K)
{
    Json terms = Json::array();
    for (const auto& t : K.terms) {
        Json o = Json::object();
        o["ambient_rank"] = t.rank;
        o["Z"] = t.Z ? vector_list_json(*t.Z) : Json(nullptr);
        o["B"] = vector_list_json(t.B);
        terms.push_back(std::move(o));
    }
    Json ds = Json::array();
    for (const auto& d : K.d)
        ds.push_back(matrix_json(d));
    Json out = Json::object();
    out["algebra"] = algebra_json(*K.R);
    out["lo"] = K.lo;
    out["hi"] = K.hi();
    out["terms"] = std::move(terms);
    out["differentials"] = std::move(ds);
    return out;
}

// Shape only; validate_complex checks the algebra.
template <class F>
Complex<F> complex_from(const Json& j, const std::string& at = "$", AlgebraPtr<F> R = nullptr)
{
    if (!j.is_object())
        throw ParseError(at, "expected a complex object");
    Complex<F> K;
    K.R = R ? R : algebra_from<F>(detail::need(j, "algebra", at), detail::sub(at, "algebra"));
    Index d = K.R->dim();
    K.lo = int(detail::integer(detail::need(j, "lo", at), detail::sub(at, "lo")));
    auto tat = detail::sub(at, "terms");
    const auto& ts = detail::need(j, "terms", at);
    detail::expect_array(ts, tat);
    if (ts.empty())
        throw ParseError(tat, "need at least one term");
    for (std::size_t k = 0; k < ts.size(); ++k) {
        auto here = detail::sub(tat, k);
        if (!ts[k].is_object())
            throw ParseError(here, "expected a term object");
        Index r = detail::integer(detail::need(ts[k], "ambient_rank", here), detail::sub(here, "ambient_rank"));
        if (r < 0)
            throw ParseError(detail::sub(here, "ambient_rank"), "negative rank");
        PresentedModule<F> M = PresentedModule<F>::free(r, d);
        if (ts[k].contains("Z") && !ts[k]["Z"].is_null())
            M.Z = vector_list_from<F>(ts[k]["Z"], r * d, detail::sub(here, "Z"));
        if (ts[k].contains("B"))
            M.B = vector_list_from<F>(ts[k]["B"], r * d, detail::sub(here, "B"));
        K.terms.push_back(std::move(M));
    }
    if (j.contains("hi") && detail::integer(j["hi"], detail::sub(at, "hi")) != K.hi())
        throw ParseError(detail::sub(at, "hi"), "hi disagrees with lo and the number of terms");
    auto dat = detail::sub(at, "differentials");
    const auto& ds = detail::need(j, "differentials", at);
    detail::expect_array(ds, dat);
    if (ds.size() + 1 != ts.size())
        throw ParseError(dat, "expected " + std::to_string(ts.size() - 1) + " differentials");
    for (std::size_t k = 0; k < ds.size(); ++k)
        K.d.push_back(matrix_from<F>(ds[k], K.terms[k + 1].dim, K.terms[k].dim, detail::sub(dat, k)));
    return K;
}

// ---------------------------------------------------------------------------
// CDGA

template <class F>
Json cdga_json(const CDGA<F>& K)
{
    Count pairs = 0;
    for (int i = 0; i <= K.top(); ++i)
        for (int j = 0; i + j <= K.top(); ++j)
            pairs += K.complex.ambient(i) * K.complex.ambient(j);
    if (pairs > export_limit())
        throw std::length_error("cdga_json: " + std::to_string(pairs) + " basis pairs exceed the export limit " +
                                std::to_string(export_limit()));
    Json out = complex_json(K.complex);
    Json mult = Json::array();
    auto table = to_table(K);
    for (const auto& [key, v] : table->entries()) {
        auto [i, a, j, b] = key;
        mult.push_back(Json::array({i, j, a, b, vector_json(v)}));
    }
    out["mult"] = std::move(mult);
    out["unit"] = vector_json(K.unit);
    if (!K.generators.empty()) {
        Json g = Json::array();
        for (auto [i, a] : K.generators)
            g.push_back(Json::array({i, a}));
        out["generators"] = std::move(g);
    }
    if (!K.labels.empty())
        out["labels"] = K.labels;
    return out;
}

template <class F>
CDGA<F> cdga_from(const Json& j, const std::string& at = "$")
{
    CDGA<F> K;
    K.complex = complex_from<F>(j, at);
    const auto& C = K.complex;
    auto tab = std::make_shared<TableMult<F>>();
    auto mat = detail::sub(at, "mult");
    const auto& m = detail::need(j, "mult", at);
    detail::expect_array(m, mat);
    for (std::size_t k = 0; k < m.size(); ++k) {
        auto here = detail::sub(mat, k);
        if (!m[k].is_array() || m[k].size() != 5)
            throw ParseError(here, "expected [i, j, a, b, vector]");
        int i = int(detail::integer(m[k][0], here)), jj = int(detail::integer(m[k][1], here));
        Index a = detail::integer(m[k][2], here), b = detail::integer(m[k][3], here);
        if (!C.has(i) || !C.has(jj) || a < 0 || a >= C.ambient(i) || b < 0 || b >= C.ambient(jj))
            throw ParseError(here, "factor outside the complex");
        if (!C.has(i + jj))
            throw ParseError(here, "product lands in a zero degree");
        tab->set(i, a, jj, b, vector_from<F>(m[k][4], C.ambient(i + jj), detail::sub(here, std::size_t(4))));
    }
    K.mult = tab;
    if (!C.has(0))
        throw ParseError(at, "a cdga needs a degree-0 term");
    K.unit = vector_from<F>(detail::need(j, "unit", at), C.ambient(0), detail::sub(at, "unit"));
    if (j.contains("generators")) {
        auto gat = detail::sub(at, "generators");
        detail::expect_array(j["generators"], gat);
        for (std::size_t k = 0; k < j["generators"].size(); ++k) {
            const auto& g = j["generators"][k];
            auto here = detail::sub(gat, k);
            if (!g.is_array() || g.size() != 2)
                throw ParseError(here, "expected [degree, index]");
            int i = int(detail::integer(g[0], here));
            Index a = detail::integer(g[1], here);
            if (!C.has(i) || a < 0 || a >= C.ambient(i))
                throw ParseError(here, "generator outside the complex");
            K.generators.emplace_back(i, a);
        }
    }
    if (j.contains("labels")) {
        try {
            K.labels = j["labels"].get<std::vector<std::vector<std::string>>>();
        } catch (const nlohmann::json::exception&) {
            throw ParseError(detail::sub(at, "labels"), "expected lists of strings");
        }
    }
    return K;
}

// ---------------------------------------------------------------------------
// Two-term complexes, chain maps

template <class F>
Json two_term_json(const TwoTermComplex<F>& T)
{
    Json out = Json::object();
    out["algebra"] = algebra_json(*T.R);
    out["rankP"] = T.rankP;
    out["rankQ"] = T.rankQ;
    out["u"] = matrix_json(flatten_sparse(*T.R, T.u));
    return out;
}

template <class F>
TwoTermComplex<F> two_term_from(const Json& j, const std::string& at = "$")
{
    if (!j.is_object())
        throw ParseError(at, "expected a two-term complex object");
    TwoTermComplex<F> T;
    T.R = algebra_from<F>(detail::need(j, "algebra", at), detail::sub(at, "algebra"));
    T.rankP = detail::integer(detail::need(j, "rankP", at), detail::sub(at, "rankP"));
    T.rankQ = detail::integer(detail::need(j, "rankQ", at), detail::sub(at, "rankQ"));
    if (T.rankP < 0 || T.rankQ < 0)
        throw ParseError(at, "negative rank");
    Index d = T.R->dim();
    auto u = matrix_from<F>(detail::need(j, "u", at), T.rankQ * d, T.rankP * d, detail::sub(at, "u"));
    auto f = unflatten(*T.R, u, T.rankQ, T.rankP);
    if (!f)
        throw ParseError(detail::sub(at, "u"), "matrix is not R-linear");
    T.u = *f;
    return T;
}

template <class F>
Json chain_map_json(const ChainMap<F>& f)
{
    Json comps = Json::array();
    for (const auto& m : f.f)
        comps.push_back(matrix_json(m));
    Json out = Json::object();
    out["lo"] = f.lo;
    out["source"] = complex_json(*f.source);
    out["target"] = complex_json(*f.target);
    out["components"] = std::move(comps);
    return out;
}

// A present "target" is read; otherwise `target` must be given.
template <class F>
ChainMap<F> chain_map_from(const Json& j, const std::string& at = "$", ComplexPtr<F> target = nullptr)
{
    if (!j.is_object())
        throw ParseError(at, "expected a chain map object");
    ChainMap<F> f;
    f.source = std::make_shared<Complex<F>>(complex_from<F>(detail::need(j, "source", at), detail::sub(at, "source")));
    if (j.contains("target") && !j["target"].is_null())
        f.target = std::make_shared<Complex<F>>(
            complex_from<F>(j["target"], detail::sub(at, "target"), f.source->R));
    else if (target)
        f.target = target;
    else
        throw ParseError(at, "missing key \"target\"");
    if (f.target->R->dim() != f.source->R->dim())
        throw ParseError(at, "source and target algebras differ");
    f.lo = int(detail::integer(detail::need(j, "lo", at), detail::sub(at, "lo")));
    auto cat = detail::sub(at, "components");
    const auto& cs = detail::need(j, "components", at);
    detail::expect_array(cs, cat);
    for (std::size_t k = 0; k < cs.size(); ++k) {
        int i = f.lo + int(k);
        f.f.push_back(matrix_from<F>(cs[k], f.target->ambient(i), f.source->ambient(i), detail::sub(cat, k)));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Filtered complexes, spectral pages, Hodge tables

template <class F>
Json filtered_json(const FilteredComplex<F>& f)
{
    Json ds = Json::array();
    for (const auto& d : f.k.d)
        ds.push_back(matrix_json(d));
    Json out = Json::object();
    out["base"] = field_json(ScalarTraits<F>::desc());
    out["lo"] = f.k.lo;
    out["dims"] = f.k.dims;
    out["differentials"] = std::move(ds);
    out["levels"] = f.level;
    return out;
}

// Without "levels" the canonical filtration is used.
template <class F>
FilteredComplex<F> filtered_from(const Json& j, const std::string& at = "$")
{
    if (!j.is_object())
        throw ParseError(at, "expected a filtered complex object");
    if (j.contains("terms"))
        return canonical_filtration(complex_from<F>(j, at));
    auto base = field_from(detail::need(j, "base", at), detail::sub(at, "base"));
    if (base != ScalarTraits<F>::desc())
        throw ParseError(detail::sub(at, "base"), "base field mismatch");
    KComplex<F> k;
    k.lo = int(detail::integer(detail::need(j, "lo", at), detail::sub(at, "lo")));
    auto dat = detail::sub(at, "dims");
    const auto& dims = detail::need(j, "dims", at);
    detail::expect_array(dims, dat);
    if (dims.empty())
        throw ParseError(dat, "need at least one degree");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        Index n = detail::integer(dims[i], detail::sub(dat, i));
        if (n < 0)
            throw ParseError(detail::sub(dat, i), "negative dimension");
        k.dims.push_back(n);
    }
    auto fat = detail::sub(at, "differentials");
    const auto& ds = detail::need(j, "differentials", at);
    detail::expect_array(ds, fat);
    if (ds.size() + 1 != dims.size())
        throw ParseError(fat, "expected " + std::to_string(dims.size() - 1) + " differentials");
    for (std::size_t i = 0; i < ds.size(); ++i)
        k.d.push_back(matrix_from<F>(ds[i], k.dims[i + 1], k.dims[i], detail::sub(fat, i)));
    if (!j.contains("levels"))
        return canonical_filtration(k);
    std::vector<std::vector<int>> level;
    try {
        level = j["levels"].get<std::vector<std::vector<int>>>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(detail::sub(at, "levels"), "expected lists of integers");
    }
    try {
        return make_filtered(std::move(k), std::move(level));
    } catch (const std::invalid_argument& e) {
        throw ParseError(at, e.what());
    }
}

template <class F>
Json page_json(const SSPage<F>& e)
{
    Json cells = Json::array();
    for (const auto& [pq, c] : e.cells)
        if (c.dim)
            cells.push_back(Json::array({pq.first, pq.second, c.dim}));
    Json ds = Json::array();
    for (const auto& [pq, m] : e.d)
        ds.push_back(Json::array({pq.first, pq.second, m.rows(), m.cols(), rank<F>(m)}));
    Json out = Json::object();
    out["r"] = e.r;
    out["dims"] = std::move(cells);
    out["differentials"] = std::move(ds);  // [p, q, rows, cols, rank] of nonzero d_r
    return out;
}

Json hodge_json(const HodgeTable& h);
HodgeTable hodge_from(const Json& j, const std::string& at = "$");

}  // namespace akc::io
