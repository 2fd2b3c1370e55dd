#pragma once

// Exact scalars: prime fields with a runtime modulus and the rationals.
//
// Fp follows the NTL convention of a per-thread modulus context: a value is a
// reduced residue and the modulus in force is set with an FpContext guard.
// Everything downstream is templated on the scalar type.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

namespace akc {

using BigInt = boost::multiprecision::cpp_int;

// Wraps cpp_rational so that Eigen's expression traits never see the Boost
// number type directly (Boost 1.74 misdetects Eigen 3.4 matrices as byte
// containers).
class Rational {
public:
    using Value = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                                boost::multiprecision::et_off>;

    Rational() = default;
    Rational(long long v) : v_(v) {}  // NOLINT: implicit, as Eigen needs Scalar(0), Scalar(1)
    explicit Rational(const BigInt& n) : v_(n) {}
    Rational(const BigInt& num, const BigInt& den) : v_(num, den) {}

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }
    bool is_zero() const { return v_.is_zero(); }

    Rational& operator+=(const Rational& o)
    {
        v_ += o.v_;
        return *this;
    }
    Rational& operator-=(const Rational& o)
    {
        v_ -= o.v_;
        return *this;
    }
    Rational& operator*=(const Rational& o)
    {
        v_ *= o.v_;
        return *this;
    }
    Rational& operator/=(const Rational& o)
    {
        if (o.v_.is_zero())
            throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const
    {
        Rational r;
        r.v_ = -v_;
        return r;
    }
    Rational operator+() const { return *this; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

private:
    Value v_;
};

class Fp {
public:
    Fp() = default;
    Fp(long long v) : v_(reduce(v)) {}  // NOLINT: implicit, as Eigen needs Scalar(0), Scalar(1)

    static std::uint32_t modulus() { return p_; }

    std::uint32_t value() const { return v_; }

    Fp& operator+=(Fp o)
    {
        std::uint64_t s = std::uint64_t(v_) + o.v_;
        v_ = std::uint32_t(s >= p_ ? s - p_ : s);
        return *this;
    }
    Fp& operator-=(Fp o)
    {
        v_ = v_ >= o.v_ ? v_ - o.v_ : std::uint32_t(std::uint64_t(v_) + p_ - o.v_);
        return *this;
    }
    Fp& operator*=(Fp o)
    {
        v_ = std::uint32_t(std::uint64_t(v_) * o.v_ % p_);
        return *this;
    }
    Fp& operator/=(Fp o) { return *this *= o.inverse(); }

    friend Fp operator+(Fp a, Fp b) { return a += b; }
    friend Fp operator-(Fp a, Fp b) { return a -= b; }
    friend Fp operator*(Fp a, Fp b) { return a *= b; }
    friend Fp operator/(Fp a, Fp b) { return a /= b; }
    Fp operator-() const { return Fp() - *this; }
    Fp operator+() const { return *this; }
    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

    Fp inverse() const
    {
        if (v_ == 0)
            throw std::domain_error("Fp: inverse of zero");
        std::int64_t a = v_, b = p_, x0 = 1, x1 = 0;
        while (b != 0) {
            std::int64_t q = a / b;
            std::tie(a, b) = std::make_pair(b, a - q * b);
            std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
        }
        return Fp(x0);
    }

private:
    friend class FpContext;

    static std::uint32_t reduce(long long v)
    {
        if (p_ == 0)
            throw std::logic_error("Fp: no modulus in force (missing FpContext)");
        long long r = v % static_cast<long long>(p_);
        return std::uint32_t(r < 0 ? r + p_ : r);
    }

    std::uint32_t v_ = 0;
    static inline thread_local std::uint32_t p_ = 0;
};

// Sets the modulus for the current thread for the guard's lifetime.
class FpContext {
public:
    explicit FpContext(std::uint32_t p) : saved_(Fp::p_)
    {
        if (p < 2 || p > (1u << 31))
            throw std::invalid_argument("FpContext: modulus out of range");
        Fp::p_ = p;
    }
    ~FpContext() { Fp::p_ = saved_; }
    FpContext(const FpContext&) = delete;
    FpContext& operator=(const FpContext&) = delete;

private:
    std::uint32_t saved_;
};

bool is_prime(std::uint64_t n);

// Runtime description of the base field.
struct FieldDesc {
    enum class Kind { PrimeField, Rationals };
    Kind kind = Kind::PrimeField;
    std::uint32_t p = 2;

    static FieldDesc prime(std::uint32_t p);
    static FieldDesc rationals() { return {Kind::Rationals, 0}; }

    std::uint32_t characteristic() const { return kind == Kind::Rationals ? 0 : p; }
    std::string name() const;
    friend bool operator==(const FieldDesc&, const FieldDesc&) = default;
};

// ---- uniform scalar interface ------------------------------------------

inline bool is_zero(const Fp& a) { return a.value() == 0; }
inline bool is_zero(const Rational& a) { return a.is_zero(); }

inline Fp inverse(const Fp& a) { return a.inverse(); }
inline Rational inverse(const Rational& a)
{
    if (a.is_zero())
        throw std::domain_error("Rational: inverse of zero");
    return Rational(1) / a;
}

template <class F>
struct ScalarTraits;

template <>
struct ScalarTraits<Fp> {
    static std::uint32_t characteristic() { return Fp::modulus(); }
    static FieldDesc desc() { return FieldDesc::prime(Fp::modulus()); }
    static Fp from_integer(const BigInt& n)
    {
        BigInt r = n % Fp::modulus();
        return Fp(r.convert_to<long long>());
    }
};

template <>
struct ScalarTraits<Rational> {
    static std::uint32_t characteristic() { return 0; }
    static FieldDesc desc() { return FieldDesc::rationals(); }
    static Rational from_integer(const BigInt& n) { return Rational(n); }
};

template <class F>
F from_integer(const BigInt& n)
{
    return ScalarTraits<F>::from_integer(n);
}

// num/den as an element of F; throws when den is zero in F.
template <class F>
F from_fraction(const BigInt& num, const BigInt& den)
{
    BigInt g = boost::multiprecision::gcd(num, den);
    if (g == 0)
        throw std::domain_error("from_fraction: zero denominator");
    F d = from_integer<F>(den / g);
    if (is_zero(d))
        throw std::domain_error("from_fraction: denominator vanishes in the field");
    return from_integer<F>(num / g) / d;
}

BigInt factorial(unsigned n);

// Text encoding: residues as decimal integers in [0, p); rationals as "a/b"
// with b > 0 in lowest terms, or "a" when b = 1.
std::string to_text(const Fp& a);
std::string to_text(const Rational& a);

inline std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << to_text(a); }
inline std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << to_text(a); }

template <class F>
F parse_scalar(const std::string& s);
template <>
Fp parse_scalar<Fp>(const std::string& s);
template <>
Rational parse_scalar<Rational>(const std::string& s);

// Runs fn.template operator()<F>() with F chosen by the descriptor and, for
// prime fields, the modulus context installed.
template <class Fn>
decltype(auto) with_field(const FieldDesc& desc, Fn&& fn)
{
    if (desc.kind == FieldDesc::Kind::Rationals)
        return fn.template operator()<Rational>();
    FpContext ctx(desc.p);
    return fn.template operator()<Fp>();
}

}  // namespace akc

namespace Eigen {

template <>
struct NumTraits<akc::Fp> : GenericNumTraits<akc::Fp> {
    using Real = akc::Fp;
    using NonInteger = akc::Fp;
    using Nested = akc::Fp;
    using Literal = akc::Fp;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 4
    };
    static inline akc::Fp epsilon() { return akc::Fp(0); }
    static inline akc::Fp dummy_precision() { return akc::Fp(0); }
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<akc::Rational> : GenericNumTraits<akc::Rational> {
    using Real = akc::Rational;
    using NonInteger = akc::Rational;
    using Nested = akc::Rational;
    using Literal = akc::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 50,
        MulCost = 50
    };
    static inline akc::Rational epsilon() { return akc::Rational(0); }
    static inline akc::Rational dummy_precision() { return akc::Rational(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen
