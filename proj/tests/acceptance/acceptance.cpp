// Acceptance checks. Each criterion prints exactly one PASS/FAIL line;
// indented lines beneath it are diagnostics.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jcm/analysis.hpp"
#include "jcm/diophantine.hpp"
#include "jcm/model.hpp"
#include "jcm/oracle.hpp"

using namespace jcm;

namespace {

// Pinned tolerances.
constexpr double kOracleTolerance = 1e-8;
constexpr double kOracleTruncation = 1e-12;
constexpr double kEigenTolerance = 1e-10;
constexpr double kWeylRouteTolerance = 1e-12;
constexpr double kWeylSlopeLo = -1.5;
constexpr double kWeylSlopeHi = -0.5;
constexpr double kCoplotTolerance = 0.025;  // |S_x| gap for a blue value to sit on a red point
constexpr double kCoplotFraction = 0.5;     // share of nonzero-q blue values that must do so
constexpr std::size_t kCloudPoints = 400000;
constexpr double kCloudStep = 4.0;
constexpr double kScale = 1.2;
constexpr int kBins = 64;

struct Outcome {
    bool pass{false};
    std::string summary;
};

void info(const std::string& line) { std::printf("    %s\n", line.c_str()); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ModelParams unit(int l, double beta) { return ModelParams{l, 1.0, 1.0, beta}; }

// Reference beta pairs (a, b) for each l.
const std::map<int, std::pair<double, double>> kPanels{{1, {0.9, 1.8}}, {2, {1.0, 2.0}}, {3, {0.6, 1.2}}, {4, {1.2, 2.4}}};

Outcome continued_fractions() {
    struct Golden {
        long m;
        std::size_t index;
        const char* p;
        const char* q;
    };
    const Golden goldens[] = {{3, 12, "3691", "2131"},    {3, 13, "5042", "2911"},     {3, 14, "13775", "7953"},
                              {2, 12, "47321", "33461"}, {2, 13, "114243", "80782"}, {2, 14, "275807", "195025"}};
    bool ok = true;
    for (const auto& g : goldens) {
        const auto conv = convergents(expand_surd(g.m, 1, g.index));
        const Convergent& c = conv.at(g.index);
        const bool match = c.p == BigInt(g.p) && c.q == BigInt(g.q);
        ok = ok && match;
        info(fmt("sqrt(%ld) index %zu: %s/%s (expected %s/%s)", g.m, g.index, c.p.get_str().c_str(),
                 c.q.get_str().c_str(), g.p, g.q));
    }
    return {ok, "continued-fraction convergents of sqrt 3 and sqrt 2 at indices 12..14"};
}

Outcome candidate_sizes() {
    bool ok = true;
    for (auto [l, expected] : {std::pair{2, 243ul}, std::pair{1, 91ul}, std::pair{4, 323ul}}) {
        const std::size_t got = build_candidate_set(CandidateSpec::defaults(l)).size();
        ok = ok && got == expected;
        info(fmt("l=%d |M|=%zu (expected %zu)", l, got, expected));
    }
    const CandidateSet m3 = build_candidate_set(CandidateSpec::defaults(3));
    bool range = m3.size() == 2001;
    for (std::size_t i = 0; range && i < m3.size(); ++i) range = m3.members[i] == static_cast<unsigned long>(i);
    ok = ok && range;
    info(fmt("l=3 M = {0..2000}: %s", range ? "yes" : "no"));
    return {ok, "candidate-set cardinalities"};
}

struct FilterCase {
    int l;
    double epsilon;
    std::size_t expected;
    std::vector<const char*> listed;
};

const std::vector<FilterCase> kFilterCases{{2, 0.05, 15, {"0", "15731042", "1117014753"}},
                                           {1, 0.0035, 24, {"0", "19601", "33461", "470832"}},
                                           {4, 0.04, 17, {}},
                                           {3, 0.003, 15, {}}};

Outcome filtered_sets() {
    bool ok = true;
    std::vector<std::size_t> replica;
    for (const auto& fc : kFilterCases) {
        const CandidateSet m = build_candidate_set(CandidateSpec::defaults(fc.l));
        FilterSpec f;
        f.beta = 2.0;
        f.epsilon = fc.epsilon;
        const CandidateSet kept = filter_candidates(m, unit(fc.l, 2.0), f);
        bool listed = true;
        for (const char* q : fc.listed) listed = listed && kept.contains(BigInt(q));
        const bool size_ok = kept.size() == fc.expected;
        ok = ok && size_ok && listed;
        info(fmt("l=%d eps=%g certified |M~|=%zu (expected %zu)%s", fc.l, fc.epsilon, kept.size(), fc.expected,
                 fc.listed.empty() ? "" : (listed ? ", listed elements present" : ", listed elements MISSING")));

        FilterSpec d = f;
        d.evaluation = CosineEvaluation::machine_double;
        replica.push_back(filter_candidates(m, unit(fc.l, 2.0), d).size());
    }
    info(fmt("double-precision replica (cos of an unreduced double argument): %zu/%zu/%zu/%zu", replica[0],
             replica[1], replica[2], replica[3]));
    return {ok, "filtered sets (l=2,1,4,3) with certified phase reduction"};
}

Outcome oracle_equivalence() {
    double worst = 0.0;
    for (int l = 1; l <= 4; ++l) {
        for (double beta : {0.5, 1.0, 2.0, 5.0}) {
            const ModelParams p = unit(l, beta);
            const auto trunc = oracle::FockTruncation::for_tolerance(p, kOracleTruncation);
            for (double t : {0.5, 1.0, 5.0, 20.0, 40.0}) {
                const BlochVector ref = oracle::evolve_and_trace(p, trunc, t, kOracleTruncation);
                const BlochVector got = bloch_propagate({1.0, 0.0, 0.0}, t, p);
                worst = std::max({worst, std::abs(ref.sx - got.sx), std::abs(ref.sy - got.sy),
                                  std::abs(ref.sz - got.sz)});
            }
        }
    }
    info(fmt("max |closed form - oracle| = %.3e (tolerance %.0e)", worst, kOracleTolerance));
    return {worst <= kOracleTolerance, "closed form vs truncated-Fock oracle on the 4x4x5 grid"};
}

Outcome eigen_goldens() {
    const ModelParams p = unit(2, 1.0);
    const bool golden = eigen_d(0, p) == 2.0 && eigen_d(1, p) == 6.0 && eigen_d(2, p) == 12.0;
    info(fmt("l=2: D0=%g D1=%g D2=%g", eigen_d(0, p), eigen_d(1, p), eigen_d(2, p)));
    double worst = 0.0;
    for (int l = 1; l <= 4; ++l) {
        const ModelParams q = unit(l, 1.0);
        const oracle::FockTruncation trunc{40};
        const Eigen::VectorXd spec = oracle::ground_sector_squared_spectrum(q, trunc);
        std::vector<double> expected;
        for (std::size_t n = 0; n + static_cast<std::size_t>(l) <= trunc.n_max; ++n) expected.push_back(eigen_d(n, q));
        expected.resize(trunc.n_max + 1, 0.0);
        std::sort(expected.begin(), expected.end());
        for (std::size_t i = 0; i < expected.size(); ++i)
            worst = std::max(worst, std::abs(spec(static_cast<Eigen::Index>(i)) - expected[i]) / std::max(1.0, expected[i]));
    }
    info(fmt("max relative |eig(C2^2) - D_n| = %.3e (tolerance %.0e)", worst, kEigenTolerance));
    return {golden && worst <= kEigenTolerance, "D_n goldens and oracle spectrum of C2^2"};
}

PointCloud cloud(int l, double beta, std::optional<double> s = {}, BlochVector s0 = {1.0, 0.0, 0.0}) {
    return to_cloud(sample_trajectory(unit(l, beta), SamplingPlan{kCloudStep, kCloudPoints, s}, {}, s0));
}

Outcome scale_invariance() {
    const CloudThresholds th;
    bool ok = true;
    for (const auto& [l, panel] : kPanels) {
        const auto [ba, bb] = panel;
        const PointCloud a = cloud(l, ba), b = cloud(l, bb);
        const double da = cloud_distance(a, cloud(l, ba, kScale), kBins);
        const double db = cloud_distance(b, cloud(l, bb, kScale), kBins);
        const double control = cloud_distance(a, b, kBins);
        const bool pass = da < th.scale_invariance && db < th.scale_invariance && control > th.scale_invariance;
        ok = ok && pass;
        info(fmt("l=%d: d(beta=%g, s=%g)=%.4f d(beta=%g, s=%g)=%.4f control=%.4f threshold=%g", l, ba, kScale, da,
                 bb, kScale, db, control, th.scale_invariance));
    }
    return {ok, "scale invariance of the sampled clouds under dt -> 1.2 dt"};
}

Outcome symmetry() {
    const CloudThresholds th;
    bool ok = true;
    for (const auto& [l, panel] : kPanels) {
        for (double beta : {panel.first, panel.second}) {
            const PointCloud c = cloud(l, beta);
            const double asym = reflection_asymmetry(c, kBins);
            const bool expect_symmetric = l != 3;
            bool pass = expect_symmetric ? asym < th.symmetric : asym > th.symmetric;
            std::string extra;
            if (!expect_symmetric) {
                PointCloud both = c;
                const PointCloud mirror_start = cloud(l, beta, {}, {-1.0, 0.0, 0.0});
                both.insert(both.end(), mirror_start.begin(), mirror_start.end());
                const double dual = reflection_asymmetry(both, kBins);
                pass = pass && dual < th.symmetric;
                extra = fmt(", union with S(0)=(-1,0,0): %.4f", dual);
            }
            ok = ok && pass;
            info(fmt("l=%d beta=%g asymmetry=%.4f (%s threshold %g)%s", l, beta, asym,
                     expect_symmetric ? "below" : "above", th.symmetric, extra.c_str()));
        }
    }
    return {ok, "reflection symmetry S_x -> -S_x (l=1,2,4 symmetric; l=3 not; dual union restores it)"};
}

Outcome weyl() {
    const int m_max = 8;
    double envelope = 0.0;
    for (int m = 1; m <= m_max; ++m) envelope = std::max(envelope, 1.0 / std::abs(std::sin(m * kCloudStep / 2.0)));
    bool ok = true;
    std::vector<double> maxima;
    const std::vector<std::size_t> sizes{10000, 100000, 1000000};
    for (std::size_t n : sizes) {
        const auto terms = weyl_sums(SamplingPlan{kCloudStep, n, {}}, m_max);
        double worst_route = 0.0, worst = 0.0;
        for (const auto& w : terms) {
            worst_route = std::max(worst_route, std::abs(w.direct - w.closed_form));
            worst = std::max(worst, std::abs(w.direct));
        }
        const double scaled = worst * static_cast<double>(n + 1);
        ok = ok && worst_route <= kWeylRouteTolerance && scaled <= envelope * (1.0 + 1e-9);
        maxima.push_back(worst);
        info(fmt("N=%zu max|W_m|=%.4e N*max=%.4f envelope=%.4f route gap=%.2e", n, worst, scaled, envelope,
                 worst_route));
    }
    ok = ok && maxima[0] > maxima[1] && maxima[1] > maxima[2];
    const double slope = std::log(maxima[2] / maxima[0]) / std::log(static_cast<double>(sizes[2]) / sizes[0]);
    ok = ok && slope >= kWeylSlopeLo && slope <= kWeylSlopeHi;
    info(fmt("log-log slope 1e4 -> 1e6: %.3f (accepted [%g, %g])", slope, kWeylSlopeLo, kWeylSlopeHi));
    return {ok, "Weyl sums: two routes agree and the discrepancy decays like 1/N"};
}

Outcome zero_scan_consistency() {
    const int l = 2;
    const double beta = 2.0;
    FilterSpec f;
    f.beta = beta;
    f.epsilon = 0.05;
    const CandidateSet kept = filter_candidates(build_candidate_set(CandidateSpec::defaults(l)), unit(l, beta), f);
    const SurdTimeEvaluator eval(l, 1);
    const double bound = implied_sz_bound(l, f);
    double worst_sz = 0.0;
    std::vector<double> blue;
    for (const BigInt& q : kept.members) {
        const auto ph = eval.phases(q, eval.cutoff({beta}));
        worst_sz = std::max(worst_sz, std::abs(eval.sz(ph, beta)));
        if (q != 0) blue.push_back(eval.sx(ph, beta));
    }
    const bool bounded = worst_sz < bound;
    info(fmt("|M~|=%zu, max |S_z(q pi)| = %.6f, implied bound %.6f", kept.size(), worst_sz, bound));

    const EpsilonSchedule sched{0.009, 0.6, 1000000};
    const auto hits = zero_scan(unit(l, beta), SamplingPlan{kCloudStep, 0, {}}, sched, {beta});
    std::size_t on_red = 0;
    for (double sx : blue) {
        double gap = 2.0;
        for (const auto& h : hits) gap = std::min(gap, std::abs(h.sx - sx));
        if (gap <= kCoplotTolerance) ++on_red;
    }
    const double share = blue.empty() ? 0.0 : static_cast<double>(on_red) / static_cast<double>(blue.size());
    info(fmt("scan at beta=2 (eps0=0.009, N=%zu): %zu red points; %zu of %zu nonzero-q blue values within %.3f of one",
             sched.samples(beta), hits.size(), on_red, blue.size(), kCoplotTolerance));
    return {bounded && !hits.empty() && share >= kCoplotFraction,
            "l=2, beta=2: filter bound on |S_z| and blue/red co-plot"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9); all when omitted")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome()>> checks{continued_fractions, candidate_sizes, filtered_sets,
                                                       oracle_equivalence,  eigen_goldens,   scale_invariance,
                                                       symmetry,            weyl,            zero_scan_consistency};
    bool all = true;
    for (int i = 1; i <= 9; ++i) {
        if (only != 0 && i != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[static_cast<std::size_t>(i - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i, o.summary.c_str(), secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
