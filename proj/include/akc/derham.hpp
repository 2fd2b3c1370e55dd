#pragma once

// Finite de Rham models in characteristic p over R = F_p[y_1..y_n]/(y)^N.
//
// K^i is free over R with basis x^a dx_S (0 ≤ a_j < p, |S| = i), indexed
// ((S · p^n + a) · dim R + ρ) with a read in base p, x_1 most significant.
// Multiplication carries x_j^p to y_j (affine) or to 1 (torus, N = 1 only).

#include <string>
#include <vector>

#include "akc/cdga.hpp"
#include "akc/config.hpp"

namespace akc {

enum class Flavor { Affine, Torus };

struct DeRhamSpec {
    std::uint32_t p = 3;
    int n = 1;
    int N = 1;
    Flavor flavor = Flavor::Affine;

    // (2p)^n · dim R, the flattened dimension of the whole complex.
    Count total_dim() const;
    Count algebra_dim() const;
    std::string name() const;
};

// Throws std::invalid_argument for malformed specs and std::length_error
// when the size guard is exceeded.
void check_spec(const DeRhamSpec& s);

class DeRhamMult : public Multiplication<Fp> {
public:
    DeRhamMult(const DeRhamSpec& s, const LocalAlgebra<Fp>& R);

    void product(int i, Index a, int j, Index b, SparseVec<Fp>& out) const override;

    Index monomials() const { return pn_; }
    Index index(int i, unsigned mask, Index a, Index rho) const;
    unsigned mask(int i, Index s) const { return masks_[std::size_t(i)][std::size_t(s)]; }
    const std::vector<int>& digits(Index a) const { return digits_[std::size_t(a)]; }
    Index monomial_index(const std::vector<int>& digits) const;

private:
    DeRhamSpec spec_;
    Index d_, pn_;
    std::vector<std::vector<unsigned>> masks_;  // [degree][S index] → bitmask
    std::vector<Index> s_index_;                // bitmask → index within its degree
    std::vector<std::vector<int>> digits_;      // [a] → exponents
    std::vector<Index> weight_;                 // p^{n−1−j}
    std::vector<Index> carry_;                  // carry mask → R basis index or −1
    std::vector<Index> rmul_;                   // [ρ·d + σ] → R basis index or −1
};

struct DeRhamModel {
    DeRhamSpec spec;
    CDGA<Fp> cdga;
    std::shared_ptr<const DeRhamMult> mult;

    const LocalAlgebra<Fp>& R() const { return *cdga.complex.R; }
    // Ambient vector x^a dx_S (times the unit of R).
    SparseVec<Fp> form(const std::vector<int>& a, const std::vector<int>& S) const;
};

// Requires an FpContext with modulus spec.p.
DeRhamModel derham(const DeRhamSpec& spec);

struct CartierReport {
    std::vector<SparseVec<Fp>> omega;  // x_j^{p−1} dx_j
    std::vector<Index> rank, expected;  // per q: rank of the products in H^q, C(n,q)·dim R
    std::vector<Index> h_dims;
    bool ok = false;
};

CartierReport cartier_basis(const DeRhamModel& M);

struct Splitting {
    ComplexPtr<Fp> source;  // R in degree 0, R^n in degree 1, zero differential
    ChainMap<Fp> s;         // into τ≤1 K
    QuasiIsoReport check;
};

Splitting canonical_splitting(const DeRhamModel& M);

}  // namespace akc
