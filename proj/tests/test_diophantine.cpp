#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "jcm/diophantine.hpp"
#include "jcm/errors.hpp"
#include "json.hpp"

using namespace jcm;

namespace {

std::vector<long> as_longs(const std::vector<BigInt>& v, std::size_t n) {
    std::vector<long> out;
    for (std::size_t i = 0; i < n && i < v.size(); ++i) out.push_back(v[i].get_si());
    return out;
}

// |sqrt(m)/k - p/q| < 1/q^2, decided exactly by squaring q^2 sqrt(m) against (p q k +- k)
bool within_dirichlet_bound(const Convergent& c, const BigInt& m, const BigInt& k) {
    const BigInt lhs = c.q * c.q * c.q * c.q * m;
    const BigInt lo = c.p * c.q * k - k;
    const BigInt hi = c.p * c.q * k + k;
    return (sgn(lo) < 0 || lo * lo < lhs) && lhs < hi * hi;
}

}  // namespace

TEST_CASE("continued fraction goldens") {
    CHECK(as_longs(expand_surd(3, 1, 7).quotients, 8) == std::vector<long>{1, 1, 2, 1, 2, 1, 2, 1});
    CHECK(as_longs(expand_surd(3, 2, 7).quotients, 8) == std::vector<long>{0, 1, 6, 2, 6, 2, 6, 2});
    CHECK(as_longs(expand_surd(5, 2, 7).quotients, 8) == std::vector<long>{1, 8, 2, 8, 2, 8, 2, 8});
    CHECK(as_longs(expand_surd(2, 1, 7).quotients, 8) == std::vector<long>{1, 2, 2, 2, 2, 2, 2, 2});
    CHECK(as_longs(expand_surd(7, 1, 7).quotients, 8) == std::vector<long>{2, 1, 1, 1, 4, 1, 1, 1});
    CHECK(as_longs(expand_surd(3, 7, 7).quotients, 8) == std::vector<long>{0, 4, 24, 8, 24, 8, 24, 8});
    CHECK_FALSE(expand_surd(3, 1, 7).rational);
    CHECK(expand_surd(3, 1, 20).quotients.size() == 21);
}

TEST_CASE("rational square roots terminate") {
    // sqrt(4)/3 = 2/3 = [0; 1, 2]
    const SurdCF cf = expand_surd(4, 3, 50);
    CHECK(cf.rational);
    CHECK(as_longs(cf.quotients, 10) == std::vector<long>{0, 1, 2});
    const auto conv = convergents(cf);
    CHECK(conv.back() == Convergent{2, 3});
    CHECK(expand_surd(9, 1, 5).quotients == std::vector<BigInt>{3});
    CHECK_THROWS_AS(expand_surd(0, 1, 5), DomainError);
    CHECK_THROWS_AS(expand_surd(3, 0, 5), DomainError);
}

TEST_CASE("quadratic surds have periodic expansions") {
    for (long m : {2, 3, 5, 6, 7, 13, 19, 31}) {
        for (long k : {1, 2, 3, 5}) {
            const auto a = expand_surd(m, k, 120).quotients;
            // search for a period after the first few terms
            bool found = false;
            for (std::size_t start = 1; start < 20 && !found; ++start) {
                for (std::size_t p = 1; p < 40 && !found; ++p) {
                    bool ok = true;
                    for (std::size_t i = start; i + p < a.size(); ++i) ok = ok && a[i] == a[i + p];
                    found = ok;
                }
            }
            CHECK_MESSAGE(found, "m=" << m << " k=" << k);
        }
    }
}

TEST_CASE("convergent identities") {
    for (long m : {2, 3, 5}) {
        for (long k = 1; k <= 9; ++k) {
            const SurdCF cf = expand_surd(m, k, 60);
            const auto conv = convergents(cf);
            REQUIRE(conv.size() == cf.quotients.size());
            CHECK(conv[0] == Convergent{cf.quotients[0], 1});
            for (std::size_t i = 1; i < conv.size(); ++i) {
                const BigInt det = conv[i].p * conv[i - 1].q - conv[i - 1].p * conv[i].q;
                CHECK(det == (i % 2 == 1 ? 1 : -1));
                CHECK((i == 1 ? conv[i].q >= conv[i - 1].q : conv[i].q > conv[i - 1].q));
                CHECK(within_dirichlet_bound(conv[i], m, k));
            }
        }
    }
    CHECK_THROWS_AS(convergents(SurdCF{}), DomainError);
}

TEST_CASE("default candidate sets") {
    // l = 3: sqrt(4) = 2 is rational, so the set is the integers 0..2000
    const CandidateSet m3 = build_candidate_set(CandidateSpec::defaults(3));
    CHECK(m3.size() == 2001);
    CHECK(m3.members.front() == 0);
    CHECK(m3.members.back() == 2000);
    CHECK(m3.provenance.at(BigInt(17)).front().source == "enumerated");

    const CandidateSet m1 = build_candidate_set(CandidateSpec::defaults(1));
    const CandidateSet m2 = build_candidate_set(CandidateSpec::defaults(2));
    const CandidateSet m4 = build_candidate_set(CandidateSpec::defaults(4));
    CHECK(m1.size() == 91);
    CHECK(m2.size() == 243);
    CHECK(m4.size() == 323);
    for (const auto* set : {&m1, &m2, &m4}) {
        CHECK(set->contains(0));
        CHECK(std::is_sorted(set->members.begin(), set->members.end()));
        CHECK(std::adjacent_find(set->members.begin(), set->members.end()) == set->members.end());
        CHECK(set->provenance.size() == set->size());
    }
    CHECK(m2.provenance.at(BigInt(0)).front().source == "zero");

    // every recorded provenance names a real convergent denominator
    for (const auto& [q, from] : m2.provenance) {
        for (const Provenance& p : from) {
            if (p.source != "convergent") continue;
            const auto conv = convergents(expand_surd(3, p.k, p.index));
            CHECK(conv[p.index].q == q);
        }
    }
}

TEST_CASE("candidate spec validation") {
    CandidateSpec bad = CandidateSpec::defaults(2);
    bad.ranges.front().lo = 10;
    bad.ranges.front().hi = 5;
    CHECK_THROWS_AS(build_candidate_set(bad), DomainError);
    CHECK_THROWS_AS(CandidateSpec::defaults(0), DomainError);

    CandidateSpec custom{2, {{1, 0, 3}}, false, 2000};
    // convergents of sqrt 3: 1/1, 2/1, 5/3, 7/4
    const CandidateSet s = build_candidate_set(custom);
    CHECK(s.members == std::vector<BigInt>{1, 3, 4});
    CHECK(s.provenance.at(BigInt(1)).size() == 2);
}

TEST_CASE("filter threshold coefficients") {
    CHECK(threshold_multiplicity(1, 0) == 1);
    CHECK(threshold_multiplicity(1, 1) == 2);
    CHECK(threshold_multiplicity(1, 2) == 3);
    CHECK(threshold_multiplicity(2, 1) == 1);
    CHECK(threshold_multiplicity(2, 2) == 2);
    CHECK(threshold_multiplicity(4, 2) == 1);

    // l = 2, beta = 2, eps = 0.05: (1 - 2e) + (1 - 2e) b + (1 - 4e) b^2
    FilterSpec f;
    const double b = std::exp(-2.0);
    CHECK(filter_threshold(2, f) == doctest::Approx(0.9 + 0.9 * b + 0.8 * b * b).epsilon(1e-15));
    // the threshold is the order-2 truncation of (1 - 2 eps / ((1-b)(1-b^l))) over the weights b^n
    f.order = 60;
    const double series = 1.0 / (1.0 - b) - 2.0 * f.epsilon / ((1.0 - b) * (1.0 - b * b));
    CHECK(filter_threshold(2, f) == doctest::Approx(series).epsilon(1e-14));
}

TEST_CASE("filter right-hand side") {
    FilterSpec f;
    const double b = std::exp(-2.0);
    CHECK(filter_rhs(0, 2, f) == doctest::Approx(1.0 + b + b * b).epsilon(1e-15));
    // small q: certified and plain double evaluation coincide
    for (int l = 1; l <= 4; ++l) {
        for (long q = 1; q < 200; q += 7) {
            double expected = 0.0, bn = 1.0;
            for (int n = 0; n <= 2; ++n) {
                double d = 1.0;
                for (int k = 1; k <= l; ++k) d *= n + k;
                expected += bn * std::cos(2.0 * std::sqrt(d) * q * std::numbers::pi);
                bn *= b;
            }
            CHECK(filter_rhs(q, l, f) == doctest::Approx(expected).epsilon(1e-11));
            FilterSpec plain = f;
            plain.evaluation = CosineEvaluation::machine_double;
            CHECK(filter_rhs(q, l, plain) == doctest::Approx(expected).epsilon(1e-11));
        }
    }
    // l = 3 with r^2 = 6: D_0 / r^2 = 1, so the n = 0 phase is an exact multiple of 2 pi
    FilterSpec scaled = f;
    scaled.time_divisor_squared = 6;
    scaled.order = 0;
    CHECK(filter_rhs(BigInt("98765432109876543210987"), 3, scaled) == 1.0);
}

TEST_CASE("filtered sets: published elements, monotonicity, determinism") {
    const ModelParams p{2, 1.0, 1.0, 2.0};
    const CandidateSet m2 = build_candidate_set(CandidateSpec::defaults(2));
    FilterSpec f;
    const CandidateSet kept = filter_candidates(m2, p, f);
    for (const char* q : {"0", "15731042", "1117014753"}) CHECK(kept.contains(BigInt(q)));
    for (const BigInt& q : kept.members) CHECK(m2.contains(q));
    CHECK(kept.provenance.at(BigInt(15731042)) == m2.provenance.at(BigInt(15731042)));

    FilterSpec looser = f;
    looser.epsilon = 0.08;
    FilterSpec tighter = f;
    tighter.epsilon = 0.02;
    const CandidateSet big = filter_candidates(m2, p, looser);
    const CandidateSet small = filter_candidates(m2, p, tighter);
    for (const BigInt& q : small.members) CHECK(kept.contains(q));
    for (const BigInt& q : kept.members) CHECK(big.contains(q));

    FilterSpec serial = f;
    serial.threads = 1;
    FilterSpec wide = f;
    wide.threads = 3;
    CHECK(filter_candidates(m2, p, serial).members == filter_candidates(m2, p, wide).members);
    CHECK(filter_candidates(m2, p, f).members == kept.members);

    const ModelParams p1{1, 1.0, 1.0, 2.0};
    FilterSpec f1;
    f1.epsilon = 0.0035;
    const CandidateSet kept1 = filter_candidates(build_candidate_set(CandidateSpec::defaults(1)), p1, f1);
    for (const char* q : {"0", "19601", "33461", "470832"}) CHECK(kept1.contains(BigInt(q)));

    CHECK_THROWS_AS(filter_candidates(m2, ModelParams{2, 2.0, 1.0, 2.0}, f), NormalizationError);
    FilterSpec bad = f;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(filter_candidates(m2, p, bad), DomainError);
}

TEST_CASE("passing the filter bounds |S_z| at the candidate times") {
    const ModelParams p{2, 1.0, 1.0, 2.0};
    FilterSpec f;
    const CandidateSet kept = filter_candidates(build_candidate_set(CandidateSpec::defaults(2)), p, f);
    const SurdTimeEvaluator eval(2, 1);
    const double bound = implied_sz_bound(2, f);
    for (const BigInt& q : kept.members) CHECK(std::abs(eval.sz(q, 2.0)) < bound);
}

TEST_CASE("surd-time evaluation agrees with the thermal series at small q") {
    for (int l = 1; l <= 4; ++l) {
        for (long r2 : {1L, 6L}) {
            const SurdTimeEvaluator eval(l, r2);
            for (double beta : {0.7, 2.0, 4.0}) {
                const ThermalSeries series(ModelParams{l, 1.0, 1.0, beta}, {});
                for (long q : {0L, 1L, 3L, 17L, 120L}) {
                    const double t = static_cast<double>(q) * std::numbers::pi / std::sqrt(static_cast<double>(r2));
                    const BlochVector s = series.propagate({1.0, 0.0, 0.0}, t);
                    CHECK(eval.sx(BigInt(q), beta) == doctest::Approx(s.sx).epsilon(1e-10));
                    CHECK(eval.sz(BigInt(q), beta) == doctest::Approx(s.sz).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("blue curves are beta-major") {
    CandidateSet s;
    s.members = {0, 15731042};
    const auto pts = blue_curves(s, {1.0, 2.0, 3.0}, 2, 1);
    REQUIRE(pts.size() == 6);
    CHECK(pts[0].beta == 1.0);
    CHECK(pts[1].q == 15731042);
    CHECK(pts[2].beta == 2.0);
    CHECK(pts[0].sx == doctest::Approx(1.0).epsilon(1e-12));
    const SurdTimeEvaluator eval(2, 1);
    CHECK(pts[3].sx == eval.sx(BigInt(15731042), 2.0));
}

TEST_CASE("candidate files round trip") {
    const CandidateSet m2 = build_candidate_set(CandidateSpec::defaults(2));
    std::stringstream buf;
    write_candidates(buf, m2);
    const CandidateSet back = read_candidates(buf);
    CHECK(back.members == m2.members);
    CHECK(buf.str().rfind("q\n0\n", 0) == 0);
    std::stringstream bare("5\n3\n3\n");
    CHECK(read_candidates(bare).members == std::vector<BigInt>{3, 5});

    std::stringstream bad("12\nabc\n");
    CHECK_THROWS_AS(read_candidates(bad), ConfigError);
    std::stringstream neg("-4\n");
    CHECK_THROWS_AS(read_candidates(neg), ConfigError);

    std::stringstream js;
    write_provenance(js, m2);
    const auto doc = nlohmann::json::parse(js.str());
    REQUIRE(doc.size() == m2.size());
    CHECK(doc[0]["q"] == "0");
    CHECK(doc[0]["from"][0]["source"] == "zero");
}
