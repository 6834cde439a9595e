#include "jcm/oracle.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "jcm/errors.hpp"

namespace jcm::oracle {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

std::size_t FockTruncation::index(int atom, std::size_t photons) const {
    return order == BasisOrder::atom_major ? static_cast<std::size_t>(atom) * (n_max + 1) + photons
                                           : 2 * photons + static_cast<std::size_t>(atom);
}

namespace {

double discarded_weight(const ModelParams& params, std::size_t n_max) {
    if (params.is_zero_temperature()) return 0.0;
    const double x = params.beta * params.omega;
    return std::exp(-static_cast<double>(n_max + 1) * x) / (-std::expm1(-x));
}

// Annihilation operator on {|0>, ..., |n_max>}.
MatrixXd annihilation(std::size_t n_max) {
    MatrixXd a = MatrixXd::Zero(n_max + 1, n_max + 1);
    for (std::size_t n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

}  // namespace

FockTruncation FockTruncation::for_tolerance(const ModelParams& params, double tolerance, BasisOrder order) {
    params.validate();
    const auto l = static_cast<std::size_t>(params.l);
    // Levels above n_max - l lose their partner |0, n + l>, so the thermal
    // tail is measured from there.
    std::size_t coupled = 2;
    while (discarded_weight(params, coupled) >= tolerance) ++coupled;
    return {coupled + l, order};
}

MatrixXd build_c2(const ModelParams& params, const FockTruncation& trunc) {
    params.validate();
    const MatrixXd a = annihilation(trunc.n_max);
    MatrixXd a_l = MatrixXd::Identity(trunc.n_max + 1, trunc.n_max + 1);
    for (int k = 0; k < params.l; ++k) a_l = a_l * a;

    MatrixXd c2 = MatrixXd::Zero(trunc.dimension(), trunc.dimension());
    // sigma_+ = |0><1| raises the atom while a^l removes l photons.
    for (std::size_t row = 0; row <= trunc.n_max; ++row) {
        for (std::size_t col = 0; col <= trunc.n_max; ++col) {
            const double v = params.g * a_l(row, col);
            if (v == 0.0) continue;
            c2(trunc.index(0, row), trunc.index(1, col)) += v;
            c2(trunc.index(1, col), trunc.index(0, row)) += v;
        }
    }
    return c2;
}

Eigen::VectorXd ground_sector_squared_spectrum(const ModelParams& params, const FockTruncation& trunc) {
    const MatrixXd c2 = build_c2(params, trunc);
    const MatrixXd sq = c2 * c2;
    MatrixXd block(trunc.n_max + 1, trunc.n_max + 1);
    for (std::size_t i = 0; i <= trunc.n_max; ++i)
        for (std::size_t j = 0; j <= trunc.n_max; ++j) block(i, j) = sq(trunc.index(0, i), trunc.index(0, j));
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(block, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

Evolution evolve(const ModelParams& params, const FockTruncation& trunc, double t, const BlochVector& s0,
                 double tolerance) {
    params.validate();
    if (trunc.n_max < static_cast<std::size_t>(params.l) + 2)
        throw TruncationTooSmall("Fock truncation must keep at least l + 2 photons");
    if (const double w = discarded_weight(params, trunc.n_max - static_cast<std::size_t>(params.l));
        !(w < tolerance)) {
        throw TruncationTooSmall("discarded thermal weight " + std::to_string(w) + " exceeds tolerance " +
                                 std::to_string(tolerance) + " at n_max=" + std::to_string(trunc.n_max) + " (levels above n_max - l are uncoupled)");
    }
    const std::size_t dim = trunc.dimension();

    // Thermal photon populations, renormalized on the kept levels.
    Eigen::VectorXd pop(trunc.n_max + 1);
    {
        const double x = params.is_zero_temperature() ? 0.0 : params.beta * params.omega;
        for (std::size_t n = 0; n <= trunc.n_max; ++n)
            pop(n) = params.is_zero_temperature() ? (n == 0 ? 1.0 : 0.0) : std::exp(-x * static_cast<double>(n));
        pop /= pop.sum();
    }
    using cd = std::complex<double>;
    Eigen::Matrix2cd rho_atom;
    rho_atom << cd(0.5 * (1.0 + s0.sz), 0.0), cd(0.5 * s0.sx, -0.5 * s0.sy),
                cd(0.5 * s0.sx, 0.5 * s0.sy), cd(0.5 * (1.0 - s0.sz), 0.0);

    MatrixXcd rho = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (std::size_t n = 0; n <= trunc.n_max; ++n)
                rho(trunc.index(i, n), trunc.index(j, n)) = rho_atom(i, j) * pop(n);

    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(build_c2(params, trunc));
    const MatrixXd& vecs = solver.eigenvectors();
    Eigen::VectorXcd phases(dim);
    for (std::size_t k = 0; k < dim; ++k) phases(k) = std::exp(cd(0.0, -solver.eigenvalues()(k) * t));
    const MatrixXcd u = vecs.cast<cd>() * phases.asDiagonal() * vecs.transpose().cast<cd>();
    const MatrixXcd rho_t = u * rho * u.adjoint();

    Eigen::Matrix2cd reduced = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (std::size_t n = 0; n <= trunc.n_max; ++n) reduced(i, j) += rho_t(trunc.index(i, n), trunc.index(j, n));

    Evolution out;
    out.bloch = {2.0 * reduced(0, 1).real(), -2.0 * reduced(0, 1).imag(), (reduced(0, 0) - reduced(1, 1)).real()};
    out.trace = (reduced(0, 0) + reduced(1, 1)).real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> reduced_spectrum(reduced, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = reduced_spectrum.eigenvalues()(0);
    out.max_eigenvalue = reduced_spectrum.eigenvalues()(1);
    return out;
}

BlochVector evolve_and_trace(const ModelParams& params, const FockTruncation& trunc, double t, double tolerance) {
    return evolve(params, trunc, t, {1.0, 0.0, 0.0}, tolerance).bloch;
}

}  // namespace jcm::oracle
