// precision.hpp: exact integer square roots and certified reduction of
// q*sqrt(u) modulo 1 for huge integers q.

#pragma once

#include <gmpxx.h>

#include <optional>

namespace jcm {

using BigInt = mpz_class;

struct PrecisionBudget {
    long decimal_digits{40};

    /// Smallest budget that certifies 1e-10 for multiplier q: digits10(q) + 20.
    static PrecisionBudget for_multiplier(const BigInt& q);
};

struct Rational {
    BigInt num;
    BigInt den;
    bool operator==(const Rational&) const = default;
};

/// Number of decimal digits of |n| (1 for zero).
long decimal_digits(const BigInt& n);

/// floor(sqrt(n)) by integer Newton iteration. Throws DomainError for n < 0.
BigInt isqrt_floor(const BigInt& n);

/// sqrt(u_num/u_den) as an exact reduced rational when it is one.
std::optional<Rational> rational_sqrt(const BigInt& u_num, const BigInt& u_den);

/// Exact frac(q*sqrt(u)) when u is the square of a rational, otherwise empty.
std::optional<Rational> exact_surd_fraction(const BigInt& u_num, const BigInt& u_den, const BigInt& q);

/// frac(q*sqrt(u_num/u_den)) in [0,1), absolute error below 1e-10 on the
/// circle R/Z. Near an integer the result may sit just below 1 or just above 0.
/// Throws DomainError on negative inputs or u_den <= 0 and PrecisionError when
/// the budget is below digits10(q) + 20.
double frac_of_surd_multiple(const BigInt& u_num, const BigInt& u_den, const BigInt& q,
                             PrecisionBudget budget);

/// Convenience overload using PrecisionBudget::for_multiplier(q).
double frac_of_surd_multiple(const BigInt& u_num, const BigInt& u_den, const BigInt& q);

/// cos(2*pi*x) for x in [0,1), exact at multiples of 1/4.
double cos_two_pi_frac(double x);

}  // namespace jcm
