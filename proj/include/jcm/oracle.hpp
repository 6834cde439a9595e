// oracle.hpp: brute-force reference: numerical evolution of the atom-field
// state in a truncated Fock space. Shares no code with the closed-form series.

#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "jcm/model.hpp"

namespace jcm::oracle {

enum class BasisOrder {
    atom_major,    // index = i * (n_max + 1) + n
    photon_major,  // index = 2 * n + i
};

struct FockTruncation {
    std::size_t n_max{40};
    BasisOrder order{BasisOrder::atom_major};

    std::size_t dimension() const { return 2 * (n_max + 1); }
    std::size_t index(int atom, std::size_t photons) const;

    /// n_max = c + l, where c >= 2 is the smallest cutoff whose discarded
    /// thermal weight exp(-(c+1) beta omega) / (1 - exp(-beta omega)) is below
    /// tolerance. Every level up to c then keeps its partner |0, n + l>.
    static FockTruncation for_tolerance(const ModelParams& params, double tolerance,
                                        BasisOrder order = BasisOrder::atom_major);
};

/// C2 = g [sigma_+ a^l + sigma_- (a^dagger)^l] at zero detuning. Couplings that
/// would leave the truncated space are dropped.
Eigen::MatrixXd build_c2(const ModelParams& params, const FockTruncation& trunc);

/// Eigenvalues of C2^2 restricted to the atom |0> sector, ascending.
Eigen::VectorXd ground_sector_squared_spectrum(const ModelParams& params, const FockTruncation& trunc);

struct Evolution {
    BlochVector bloch;
    double trace{1.0};
    double min_eigenvalue{0.0};
    double max_eigenvalue{1.0};
};

/// rho_A(t) = Tr_P[U rho_A(0) (x) rho_P U^dagger] with U = exp(-i C2 t) from a
/// dense eigendecomposition; rho_A(0) from s0, rho_P thermal renormalized on
/// the truncated basis. Throws TruncationTooSmall if the thermal weight above
/// n_max - l (levels missing their coupling partner) exceeds `tolerance`.
Evolution evolve(const ModelParams& params, const FockTruncation& trunc, double t,
                 const BlochVector& s0 = {1.0, 0.0, 0.0}, double tolerance = 1e-12);

/// Bloch vector of evolve(...) for the default initial state (|0> + |1>)/sqrt(2).
BlochVector evolve_and_trace(const ModelParams& params, const FockTruncation& trunc, double t,
                             double tolerance = 1e-12);

}  // namespace jcm::oracle
