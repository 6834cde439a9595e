#include "jcm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jcm/errors.hpp"
#include "jcm/parallel.hpp"

namespace jcm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// exp(i * k * dt) for an integer k small enough to be exact in a double. The
// rounding error of the product k*dt is carried separately so that libm's
// exact argument reduction sees the true phase.
std::complex<double> unit_phase(double k, double dt) {
    const double p = k * dt;
    const double e = std::fma(k, dt, -p);
    return std::complex<double>(std::cos(p), std::sin(p)) * std::complex<double>(1.0, e);
}

double sin_of_product(double k, double dt) {
    const double p = k * dt;
    const double e = std::fma(k, dt, -p);
    return std::sin(p) + e * std::cos(p);
}

}  // namespace

double reduce_two_pi(double dt) {
    double r = std::fmod(dt, two_pi);
    if (r < 0.0) r += two_pi;
    return r;
}

std::pair<double, double> scale_window(double dt) {
    const double r = reduce_two_pi(dt);
    return {std::numbers::pi / r, two_pi / r};
}

std::vector<std::string> SamplingPlan::warnings() const {
    std::vector<std::string> out;
    if (!(reduce_two_pi(dt) > std::numbers::pi)) {
        std::ostringstream msg;
        msg << "dt mod 2pi = " << reduce_two_pi(dt) << " is not above pi";
        out.push_back(msg.str());
    }
    if (s && !(reduce_two_pi(step()) > std::numbers::pi)) {
        std::ostringstream msg;
        msg << "s*dt mod 2pi = " << reduce_two_pi(step()) << " is not above pi";
        out.push_back(msg.str());
    }
    return out;
}

double EpsilonSchedule::epsilon(double beta) const {
    if (!(beta >= 0.5 && beta <= 5.0)) throw DomainError("epsilon schedule covers beta in [0.5, 5] only");
    if (beta >= 2.0) return eps0;
    return eps0 * std::exp(c0 * (2.0 - beta));
}

std::size_t EpsilonSchedule::samples(double beta) const {
    if (!(beta >= 0.5 && beta <= 5.0)) throw DomainError("sample schedule covers beta in [0.5, 5] only");
    if (beta < 1.0) return n0;
    if (beta < 2.0) return n0 / 2;
    if (beta < 3.0) return n0 / 5;
    return n0 / 10;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi >= lo)) throw DomainError("log_grid needs 0 < lo <= hi");
    std::vector<double> out;
    if (n == 0) return out;
    if (n == 1) return {lo};
    out.reserve(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) out.push_back(lo);
        else if (i + 1 == n) out.push_back(hi);
        else out.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    return out;
}

std::vector<TrajectoryFrame> sample_trajectory(const ModelParams& params, const SamplingPlan& plan,
                                               const SeriesConfig& cfg, const BlochVector& s0, unsigned threads) {
    if (!(plan.dt > 0.0) || !std::isfinite(plan.dt)) throw DomainError("sampling step dt must be > 0");
    if (s0.norm() > 1.0 + 1e-12) throw DomainError("initial Bloch vector must satisfy |s0| <= 1");
    const ThermalSeries series(params, cfg);
    const double step = plan.step();
    std::vector<TrajectoryFrame> frames(plan.n_points + 1);
    parallel_for(
        frames.size(),
        [&](std::size_t n) {
            const double t = static_cast<double>(n) * step;
            frames[n] = {n, t, series.propagate(s0, t)};
        },
        threads);
    return frames;
}

PointCloud to_cloud(const std::vector<TrajectoryFrame>& frames) {
    PointCloud cloud;
    cloud.reserve(frames.size());
    for (const auto& f : frames) cloud.push_back({f.bloch.sx, f.bloch.sz});
    return cloud;
}

std::vector<WeylTerm> weyl_sums(const SamplingPlan& plan, int m_max) {
    if (m_max < 1) throw DomainError("m_max must be >= 1");
    const double dt = plan.step();
    const double count = static_cast<double>(plan.n_points) + 1.0;
    for (int m = 1; m <= m_max; ++m) {
        if (std::abs(sin_of_product(m, dt / 2.0)) < 1e-12) {
            std::ostringstream msg;
            msg << "m*dt is a multiple of 2pi for m=" << m << " (dt=" << dt << ")";
            throw DegenerateStep(msg.str());
        }
    }
    std::vector<WeylTerm> out;
    for (int sign : {-1, 1}) {
        for (int a = 1; a <= m_max; ++a) {
            const int m = sign < 0 ? -(m_max + 1 - a) : a;
            std::complex<double> sum{0.0, 0.0};
            for (std::size_t n = 0; n <= plan.n_points; ++n)
                sum += unit_phase(static_cast<double>(m) * static_cast<double>(n), dt);
            // (1 - z^(N+1)) / (1 - z) with z = exp(i m dt), written as
            // sin((N+1) m dt/2) / sin(m dt/2) * exp(i N m dt/2) to avoid cancellation.
            const double half_dt = dt / 2.0;
            const double ratio = sin_of_product(m * count, half_dt) / sin_of_product(m, half_dt);
            const std::complex<double> closed =
                ratio * unit_phase(static_cast<double>(m) * static_cast<double>(plan.n_points), half_dt);
            out.push_back({m, sum / count, closed / count});
        }
    }
    return out;
}

double weyl_discrepancy(const SamplingPlan& plan, int m_max) {
    double worst = 0.0;
    for (const auto& term : weyl_sums(plan, m_max)) worst = std::max(worst, std::abs(term.direct));
    return worst;
}

std::vector<ScanHit> zero_scan(const ModelParams& params, const SamplingPlan& plan, const EpsilonSchedule& sched,
                               const std::vector<double>& beta_grid, const SeriesConfig& cfg, unsigned threads) {
    if (!(plan.dt > 0.0) || !std::isfinite(plan.dt)) throw DomainError("sampling step dt must be > 0");
    for (double beta : beta_grid) {
        if (!(beta >= 0.5 && beta <= 5.0)) throw DomainError("scan betas must lie in [0.5, 5]");
    }
    std::vector<std::vector<ScanHit>> per_beta(beta_grid.size());
    parallel_for(
        beta_grid.size(),
        [&](std::size_t i) {
            ModelParams p = params;
            p.beta = beta_grid[i];
            const ThermalSeries series(p, cfg);
            const double eps = sched.epsilon(p.beta);
            const std::size_t count = sched.samples(p.beta);
            for (std::size_t n = 0; n <= count; ++n) {
                const double t = static_cast<double>(n) * plan.dt;
                const double sz = series.l3(t);
                if (!(std::abs(sz) < eps)) continue;
                // Re-evaluate through the full propagation so the emitted row is
                // exactly what bloch_propagate reports.
                const BlochVector s = series.propagate({1.0, 0.0, 0.0}, t);
                if (std::abs(s.sz) < eps) per_beta[i].push_back({p.beta, n, t, s.sx, s.sz});
            }
        },
        threads);
    std::vector<ScanHit> out;
    for (auto& hits : per_beta) out.insert(out.end(), hits.begin(), hits.end());
    return out;
}

namespace {

std::vector<double> histogram(const PointCloud& cloud, int bins) {
    std::vector<double> h(static_cast<std::size_t>(bins) * bins + 1, 0.0);
    const std::size_t overflow = h.size() - 1;
    constexpr double edge_tol = 1e-9;
    auto cell = [bins](double v) {
        int i = static_cast<int>(std::floor((v + 1.0) * 0.5 * bins));
        return std::clamp(i, 0, bins - 1);
    };
    for (const auto& p : cloud) {
        if (!(std::abs(p.sx) <= 1.0 + edge_tol && std::abs(p.sz) <= 1.0 + edge_tol)) {
            h[overflow] += 1.0;
            continue;
        }
        h[static_cast<std::size_t>(cell(p.sx)) * bins + cell(p.sz)] += 1.0;
    }
    const double total = static_cast<double>(cloud.size());
    for (double& v : h) v /= total;
    return h;
}

}  // namespace

double cloud_distance(const PointCloud& a, const PointCloud& b, int bins) {
    if (a.empty() || b.empty()) throw DomainError("cloud_distance needs nonempty clouds");
    if (bins < 1) throw DomainError("bins must be >= 1");
    const auto ha = histogram(a, bins);
    const auto hb = histogram(b, bins);
    double d = 0.0;
    for (std::size_t i = 0; i < ha.size(); ++i) d += std::abs(ha[i] - hb[i]);
    return d;
}

double reflection_asymmetry(const PointCloud& cloud, int bins) {
    PointCloud mirrored;
    mirrored.reserve(cloud.size());
    for (const auto& p : cloud) mirrored.push_back({-p.sx, p.sz});
    return cloud_distance(cloud, mirrored, bins);
}

ScaleCheck scale_invariance_check(const ModelParams& params, const SamplingPlan& plan, double control_beta,
                                  int bins, const CloudThresholds& thresholds, const SeriesConfig& cfg,
                                  unsigned threads) {
    if (!plan.s) throw DomainError("scale_invariance_check needs a scale factor s");
    const double r = reduce_two_pi(plan.dt);
    const auto [s_lo, s_hi] = scale_window(plan.dt);
    std::ostringstream window;
    window.precision(17);
    window << "admissible s window (" << s_lo << ", " << s_hi << ") for dt=" << plan.dt;
    if (!(r > std::numbers::pi)) throw BoundsViolation("dt mod 2pi must exceed pi; " + window.str());
    const double s = *plan.s;
    if (!(s > s_lo && s < s_hi) || !(reduce_two_pi(s * plan.dt) > std::numbers::pi)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "s=" << s << " outside " << window.str();
        throw BoundsViolation(msg.str());
    }
    SamplingPlan base = plan;
    base.s.reset();
    const PointCloud reference = to_cloud(sample_trajectory(params, base, cfg, {1.0, 0.0, 0.0}, threads));
    const PointCloud scaled = to_cloud(sample_trajectory(params, plan, cfg, {1.0, 0.0, 0.0}, threads));
    ModelParams control_params = params;
    control_params.beta = control_beta;
    const PointCloud control = to_cloud(sample_trajectory(control_params, base, cfg, {1.0, 0.0, 0.0}, threads));

    ScaleCheck out;
    out.distance = cloud_distance(reference, scaled, bins);
    out.control_distance = cloud_distance(reference, control, bins);
    out.threshold = thresholds.scale_invariance;
    out.pass = out.distance < out.threshold && out.control_distance > out.threshold;
    return out;
}

}  // namespace jcm
