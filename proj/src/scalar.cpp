#include "akc/scalar.hpp"

#include <charconv>

namespace akc {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

FieldDesc FieldDesc::prime(std::uint32_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument("FieldDesc: " + std::to_string(p) + " is not prime");
    return {Kind::PrimeField, p};
}

std::string FieldDesc::name() const
{
    return kind == Kind::Rationals ? "Q" : "F_" + std::to_string(p);
}

BigInt factorial(unsigned n)
{
    BigInt r = 1;
    for (unsigned k = 2; k <= n; ++k)
        r *= k;
    return r;
}

std::string to_text(const Fp& a) { return std::to_string(a.value()); }

std::string to_text(const Rational& a)
{
    BigInt num = a.numerator();
    BigInt den = a.denominator();
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

namespace {

BigInt parse_integer(const std::string& s)
{
    if (s.empty())
        throw std::invalid_argument("scalar: empty string");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size())
        throw std::invalid_argument("scalar: malformed integer '" + s + "'");
    for (std::size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("scalar: malformed integer '" + s + "'");
    return BigInt(s);
}

}  // namespace

template <>
Fp parse_scalar<Fp>(const std::string& s)
{
    BigInt v = parse_integer(s);
    if (v < 0 || v >= Fp::modulus())
        throw std::invalid_argument("scalar: '" + s + "' is not a residue in [0, " +
                                    std::to_string(Fp::modulus()) + ")");
    return Fp(v.convert_to<long long>());
}

template <>
Rational parse_scalar<Rational>(const std::string& s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return Rational(parse_integer(s));
    BigInt num = parse_integer(s.substr(0, slash));
    BigInt den = parse_integer(s.substr(slash + 1));
    if (den <= 0)
        throw std::invalid_argument("scalar: denominator must be positive in '" + s + "'");
    if (boost::multiprecision::gcd(num, den) != 1)
        throw std::invalid_argument("scalar: '" + s + "' is not in lowest terms");
    return Rational(num, den);
}

}  // namespace akc
