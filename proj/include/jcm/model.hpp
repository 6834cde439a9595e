// model.hpp: closed-form thermal Bloch-vector dynamics of the l-photon
// Jaynes-Cummings model at zero detuning.
//
// The atom starts in an arbitrary state, the field in a Bose-Einstein thermal
// state. In the interaction picture the Bloch vector evolves as
//
//     S(t) = diag(L1, L1, L2) S(0) + (0, 0, L3)
//
// with L1 = A_{01,01}, L2 = A_{00,00} - A_{11,00}, L3 = A_{00,00} + A_{11,00} - 1.
// Every A element is a thermally weighted series over photon number n.

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace jcm {

struct ModelParams {
    int l{1};             // photon multiplicity
    double g{1.0};        // coupling; only g^2 enters
    double omega{1.0};    // photon angular frequency; atom sits at l*omega
    double beta{1.0};     // inverse temperature, +inf means zero temperature

    static constexpr double zero_temperature = std::numeric_limits<double>::infinity();

    bool is_zero_temperature() const { return beta == zero_temperature; }
    /// Boltzmann factor b = exp(-beta*omega); 0 at zero temperature.
    double boltzmann() const;
    /// Throws DomainError unless l >= 1, g != 0, omega > 0 and beta > 0.
    void validate() const;
};

struct BlochVector {
    double sx{0.0};
    double sy{0.0};
    double sz{0.0};

    double norm() const;
    bool operator==(const BlochVector&) const = default;
};

struct SeriesConfig {
    double tail_tolerance{1e-12};
    std::size_t max_terms{10000};
};

struct TrajectoryFrame {
    std::size_t n{0};
    double t{0.0};
    BlochVector bloch;
};

struct AElements {
    double a0000{0.0};
    double a1100{0.0};
    double a0101{0.0};
};

struct LCoefficients {
    double l1{0.0};
    double l2{0.0};
    double l3{0.0};
};

/// D_n = g^2 (n+1)(n+2)...(n+l).
double eigen_d(std::size_t n, const ModelParams& params);
/// D'_n = g^2 n(n-1)...(n-l+1) for n >= l, else 0.
double eigen_d_prime(std::size_t n, const ModelParams& params);

/// Highest photon number kept so that the geometric tail b^(n_max+1) stays
/// below cfg.tail_tolerance. Zero at zero temperature. Throws
/// TruncationOverflow when the count exceeds cfg.max_terms.
std::size_t series_cutoff(const ModelParams& params, const SeriesConfig& cfg);

/// Precomputed frequencies and weights for repeated evaluation at many times.
class ThermalSeries {
public:
    ThermalSeries(const ModelParams& params, const SeriesConfig& cfg);

    AElements a_elements(double t) const;
    LCoefficients l_coefficients(double t) const;
    /// L3 only, with one cosine per term (cos(2x) form). Same value as
    /// l_coefficients(t).l3 up to rounding.
    double l3(double t) const;
    BlochVector propagate(const BlochVector& s0, double t) const;

    const ModelParams& params() const { return params_; }
    std::size_t cutoff() const { return weights_.empty() ? 0 : weights_.size() - 1; }

private:
    ModelParams params_;
    double norm_{1.0};                 // 1 - b
    std::vector<double> weights_;      // b^n
    std::vector<double> excited_;      // g^2 prod(n+k) b^(n+l) / D_n
    std::vector<double> root_d_;       // sqrt(D_n)
    std::vector<double> root_d_prime_; // sqrt(D'_n)
};

AElements a_elements(double t, const ModelParams& params, const SeriesConfig& cfg = {});
LCoefficients l_coefficients(double t, const ModelParams& params, const SeriesConfig& cfg = {});

/// L3 via the single-cosine series
///   L3 = -(1/2)(1 - b^l) [1 - (1 - b) sum_n b^n cos(2 sqrt(D_n) t)].
/// Only valid for g = omega = 1; throws NormalizationError otherwise.
double l3_cosine_form(double t, const ModelParams& params, const SeriesConfig& cfg = {});

/// Throws DomainError if |s0| > 1.
BlochVector bloch_propagate(const BlochVector& s0, double t, const ModelParams& params,
                            const SeriesConfig& cfg = {});

}  // namespace jcm
