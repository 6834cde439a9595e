#include "jcm/precision.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "jcm/errors.hpp"

namespace jcm {

namespace {

BigInt pow10(unsigned long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

// num/den in [0,1) to the nearest double below, via a 64-bit scaled quotient.
double ratio_to_double(const BigInt& num, const BigInt& den) {
    BigInt scaled = num;
    scaled <<= 64;
    scaled /= den;
    return std::ldexp(scaled.get_d(), -64);
}

void require_surd_inputs(const BigInt& u_num, const BigInt& u_den, const BigInt& q) {
    if (sgn(u_num) < 0) throw DomainError("radicand numerator must be >= 0");
    if (sgn(u_den) <= 0) throw DomainError("radicand denominator must be > 0");
    if (sgn(q) < 0) throw DomainError("multiplier q must be >= 0");
}

}  // namespace

PrecisionBudget PrecisionBudget::for_multiplier(const BigInt& q) {
    return {jcm::decimal_digits(q) + 20};
}

long decimal_digits(const BigInt& n) {
    if (n == 0) return 1;
    // mpz_sizeinbase may overshoot by one for base 10
    long d = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 10));
    BigInt a = abs(n);
    if (a < pow10(static_cast<unsigned long>(d - 1))) --d;
    return d;
}

BigInt isqrt_floor(const BigInt& n) {
    if (sgn(n) < 0) throw DomainError("isqrt_floor of a negative number");
    if (n < 2) return n;
    // Start above the root; Newton's iterates then decrease monotonically to floor(sqrt(n)).
    const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    BigInt x = BigInt(1) << static_cast<mp_bitcnt_t>((bits + 1) / 2 + 1);
    while (true) {
        BigInt y = (x + n / x) >> 1;
        if (y >= x) return x;
        x = y;
    }
}

std::optional<Rational> rational_sqrt(const BigInt& u_num, const BigInt& u_den) {
    if (sgn(u_num) < 0 || sgn(u_den) <= 0) throw DomainError("rational_sqrt needs u_num >= 0, u_den > 0");
    BigInt g;
    mpz_gcd(g.get_mpz_t(), u_num.get_mpz_t(), u_den.get_mpz_t());
    const BigInt num = u_num / g;
    const BigInt den = u_den / g;
    const BigInt rn = isqrt_floor(num);
    const BigInt rd = isqrt_floor(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rational{rn, rd};
}

std::optional<Rational> exact_surd_fraction(const BigInt& u_num, const BigInt& u_den, const BigInt& q) {
    require_surd_inputs(u_num, u_den, q);
    auto root = rational_sqrt(u_num, u_den);
    if (!root) return std::nullopt;
    BigInt rem = (q * root->num) % root->den;
    BigInt g;
    mpz_gcd(g.get_mpz_t(), rem.get_mpz_t(), root->den.get_mpz_t());
    return Rational{rem / g, root->den / g};
}

double frac_of_surd_multiple(const BigInt& u_num, const BigInt& u_den, const BigInt& q,
                             PrecisionBudget budget) {
    require_surd_inputs(u_num, u_den, q);
    if (auto exact = exact_surd_fraction(u_num, u_den, q)) return ratio_to_double(exact->num, exact->den);

    const long required = decimal_digits(q) + 20;
    if (budget.decimal_digits < required) {
        throw PrecisionError("precision budget of " + std::to_string(budget.decimal_digits) +
                             " digits cannot certify 1e-10 for a " + std::to_string(decimal_digits(q)) +
                             "-digit multiplier (need " + std::to_string(required) + ")");
    }
    const BigInt scale = pow10(static_cast<unsigned long>(budget.decimal_digits));
    // s <= sqrt(u)*scale < s + 1, so q*sqrt(u) lies in [q*s, q*(s+1)) / scale.
    const BigInt s = isqrt_floor(u_num * scale * scale / u_den);
    const BigInt lo = q * s;
    // Half-width q/(2*scale) plus one double ulp must stay below 1e-10.
    if (q * pow10(11) >= scale) throw PrecisionError("interval too wide to certify 1e-10");
    const BigInt twice_scale = scale * 2;
    const BigInt mid2 = (lo * 2 + q) % twice_scale;
    return ratio_to_double(mid2, twice_scale);
}

double frac_of_surd_multiple(const BigInt& u_num, const BigInt& u_den, const BigInt& q) {
    return frac_of_surd_multiple(u_num, u_den, q, PrecisionBudget::for_multiplier(q));
}

double cos_two_pi_frac(double x) {
    if (!(x >= 0.0 && x < 1.0)) throw DomainError("cos_two_pi_frac expects x in [0,1)");
    // Reduce to the nearest quarter turn so that exact quarters give exact results.
    const double quarter = std::nearbyint(4.0 * x);
    const double r = 2.0 * std::numbers::pi * (x - 0.25 * quarter);
    switch (static_cast<int>(quarter) & 3) {
        case 0: return std::cos(r);
        case 1: return -std::sin(r);
        case 2: return -std::cos(r);
        default: return std::sin(r);
    }
}

}  // namespace jcm
