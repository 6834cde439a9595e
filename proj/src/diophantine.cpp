#include "jcm/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "json.hpp"

#include "jcm/errors.hpp"
#include "jcm/parallel.hpp"

namespace jcm {

SurdCF expand_surd(const BigInt& m, const BigInt& k, std::size_t count) {
    if (sgn(m) <= 0 || sgn(k) <= 0) throw DomainError("expand_surd needs m > 0 and k > 0");
    SurdCF cf{m, k, {}, false};
    const BigInt root_m = isqrt_floor(m);
    if (root_m * root_m == m) {
        // sqrt(m)/k = root_m/k: plain Euclid, terminates.
        cf.rational = true;
        BigInt num = root_m, den = k;
        while (den != 0) {
            BigInt a;
            mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            cf.quotients.push_back(a);
            BigInt r = num - a * den;
            num = den;
            den = r;
        }
        return cf;
    }
    // Complete quotients (P + sqrt(D))/Q with D = m k^2 and Q0 = k^2, so that
    // Q always divides D - P^2.
    const BigInt d = m * k * k;
    const BigInt root_d = isqrt_floor(d);
    BigInt p = 0, q = k * k;
    cf.quotients.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        BigInt a;
        mpz_fdiv_q(a.get_mpz_t(), BigInt(p + root_d).get_mpz_t(), q.get_mpz_t());
        cf.quotients.push_back(a);
        p = a * q - p;
        q = (d - p * p) / q;
    }
    return cf;
}

std::vector<Convergent> convergents(const SurdCF& cf) {
    if (cf.quotients.empty()) throw DomainError("convergents of an empty expansion");
    std::vector<Convergent> out;
    out.reserve(cf.quotients.size());
    BigInt p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
    for (const BigInt& a : cf.quotients) {
        BigInt p = a * p_prev + p_prev2;
        BigInt q = a * q_prev + q_prev2;
        out.push_back({p, q});
        p_prev2 = std::move(p_prev);
        q_prev2 = std::move(q_prev);
        p_prev = std::move(p);
        q_prev = std::move(q);
    }
    return out;
}

CandidateSpec CandidateSpec::defaults(int l) {
    if (l < 1) throw DomainError("candidate spec needs l >= 1");
    CandidateSpec spec;
    spec.l = l;
    auto add = [&](long k_lo, long k_hi, std::size_t lo, std::size_t hi) {
        for (long k = k_lo; k <= k_hi; ++k) spec.ranges.push_back({BigInt(k), lo, hi});
    };
    switch (l) {
        case 1: add(1, 4, 12, 39); break;
        case 2: add(1, 7, 12, 59); break;
        case 3: break;  // sqrt(4) = 2 is rational: enumeration branch
        case 4:
            add(1, 8, 8, 59);
            add(9, 9, 8, 58);
            break;
        default: add(1, 4, 8, 39); break;
    }
    return spec;
}

void CandidateSpec::validate() const {
    if (l < 1) throw DomainError("candidate spec needs l >= 1");
    for (const auto& r : ranges) {
        if (sgn(r.k) <= 0) throw DomainError("divisor k must be positive");
        if (r.lo > r.hi) throw DomainError("empty convergent index range");
    }
}

bool CandidateSet::contains(const BigInt& q) const {
    return std::binary_search(members.begin(), members.end(), q);
}

namespace {

void finalize(CandidateSet& set) {
    set.members.clear();
    set.members.reserve(set.provenance.size());
    for (const auto& [q, from] : set.provenance) set.members.push_back(q);
}

}  // namespace

CandidateSet build_candidate_set(const CandidateSpec& spec) {
    spec.validate();
    CandidateSet set;
    const BigInt radicand = spec.l + 1;
    const BigInt root = isqrt_floor(radicand);
    if (root * root == radicand) {
        for (std::size_t q = 0; q <= spec.enumeration_limit; ++q)
            set.provenance[BigInt(static_cast<unsigned long>(q))].push_back({"enumerated", 0, q});
    } else {
        for (const auto& range : spec.ranges) {
            const auto conv = convergents(expand_surd(radicand, range.k, range.hi));
            for (std::size_t i = range.lo; i <= range.hi && i < conv.size(); ++i)
                set.provenance[conv[i].q].push_back({"convergent", range.k, i});
        }
    }
    if (spec.include_zero) set.provenance[BigInt(0)].push_back({"zero", 0, 0});
    finalize(set);
    return set;
}

void FilterSpec::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("filter beta must be finite and > 0");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("filter epsilon must lie in (0,1)");
    if (order < 0) throw DomainError("filter order must be >= 0");
    if (time_divisor_squared <= 0) throw DomainError("time_divisor_squared must be positive");
}

long threshold_multiplicity(int l, int n) { return n / l + 1; }

double filter_threshold(int l, const FilterSpec& fspec) {
    const double b = std::exp(-fspec.beta);
    double sum = 0.0, bn = 1.0;
    for (int n = 0; n <= fspec.order; ++n) {
        sum += (1.0 - 2.0 * fspec.epsilon * static_cast<double>(threshold_multiplicity(l, n))) * bn;
        bn *= b;
    }
    return sum;
}

namespace {

BigInt integer_d(long n, int l) {
    BigInt d = 1;
    for (int k = 1; k <= l; ++k) d *= n + k;
    return d;
}

BigInt integer_d_prime(long n, int l) {
    if (n < l) return 0;
    BigInt d = 1;
    for (int k = 1; k <= l; ++k) d *= n - k + 1;
    return d;
}

// cos(2*pi*frac(q*sqrt(num/den)))
double certified_cos(const BigInt& num, const BigInt& den, const BigInt& q) {
    if (sgn(num) == 0 || sgn(q) == 0) return 1.0;
    return cos_two_pi_frac(frac_of_surd_multiple(num, den, q));
}

}  // namespace

double filter_rhs(const BigInt& q, int l, const FilterSpec& fspec) {
    const double b = std::exp(-fspec.beta);
    const BigInt r2 = fspec.time_divisor_squared;
    double sum = 0.0, bn = 1.0;
    for (int n = 0; n <= fspec.order; ++n) {
        const BigInt d = integer_d(n, l);
        double c;
        if (fspec.evaluation == CosineEvaluation::certified) {
            c = certified_cos(d, r2, q);
        } else {
            const double freq = std::sqrt(4.0 * d.get_d() / static_cast<double>(fspec.time_divisor_squared));
            // strtod rounds to nearest; mpz_get_d would truncate.
            c = std::cos(freq * std::stod(q.get_str()) * std::numbers::pi);
        }
        sum += bn * c;
        bn *= b;
    }
    return sum;
}

CandidateSet filter_candidates(const CandidateSet& mset, const ModelParams& params, const FilterSpec& fspec) {
    params.validate();
    fspec.validate();
    if (params.g != 1.0 || params.omega != 1.0)
        throw NormalizationError("Diophantine filter is defined for g = omega = 1");
    const double threshold = filter_threshold(params.l, fspec);
    std::vector<char> keep(mset.members.size(), 0);
    parallel_for(
        mset.members.size(),
        [&](std::size_t i) { keep[i] = threshold < filter_rhs(mset.members[i], params.l, fspec); },
        fspec.threads);
    CandidateSet out;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (!keep[i]) continue;
        const BigInt& q = mset.members[i];
        out.members.push_back(q);
        if (auto it = mset.provenance.find(q); it != mset.provenance.end()) out.provenance[q] = it->second;
    }
    return out;
}

double implied_sz_bound(int l, const FilterSpec& fspec) {
    const double b = std::exp(-fspec.beta);
    const double tail = std::pow(b, fspec.order + 1);
    // f(t_q) > threshold - sum_{n>order} b^n; certified cosines add < 1e-9.
    const double slack = 1e-9;
    const double bracket = 1.0 - (1.0 - b) * filter_threshold(l, fspec) + tail + slack;
    return 0.5 * (1.0 - std::pow(b, l)) * bracket;
}

SurdTimeEvaluator::SurdTimeEvaluator(int l, long time_divisor_squared, const SeriesConfig& cfg)
    : l_(l), r2_(time_divisor_squared), cfg_(cfg) {
    if (l < 1) throw DomainError("photon multiplicity l must be >= 1");
    if (r2_ <= 0) throw DomainError("time_divisor_squared must be positive");
}

std::size_t SurdTimeEvaluator::cutoff(const std::vector<double>& betas) const {
    std::size_t n_max = 0;
    for (double beta : betas) n_max = std::max(n_max, series_cutoff(ModelParams{l_, 1.0, 1.0, beta}, cfg_));
    return n_max;
}

SurdTimeEvaluator::Phases SurdTimeEvaluator::phases(const BigInt& q, std::size_t n_max) const {
    Phases ph;
    ph.half.resize(n_max + 1);
    ph.half_prime.resize(n_max + 1);
    ph.full.resize(n_max + 1);
    const BigInt r2 = r2_;
    const BigInt four_r2 = 4 * r2;
    for (std::size_t n = 0; n <= n_max; ++n) {
        const BigInt d = integer_d(static_cast<long>(n), l_);
        const BigInt dp = integer_d_prime(static_cast<long>(n), l_);
        // cos(sqrt(X) q pi / sqrt(r2)) = cos(2 pi q sqrt(X / (4 r2)))
        ph.half[n] = certified_cos(d, four_r2, q);
        ph.half_prime[n] = certified_cos(dp, four_r2, q);
        ph.full[n] = certified_cos(d, r2, q);
    }
    return ph;
}

double SurdTimeEvaluator::sx(const Phases& ph, double beta) const {
    const std::size_t n_max = series_cutoff(ModelParams{l_, 1.0, 1.0, beta}, cfg_);
    if (n_max >= ph.half.size()) throw DomainError("phase table shorter than the series cutoff");
    const double b = std::exp(-beta);
    double sum = 0.0, bn = 1.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        sum += bn * ph.half[n] * ph.half_prime[n];
        bn *= b;
    }
    return (1.0 - b) * sum;
}

double SurdTimeEvaluator::sz(const Phases& ph, double beta) const {
    const std::size_t n_max = series_cutoff(ModelParams{l_, 1.0, 1.0, beta}, cfg_);
    if (n_max >= ph.full.size()) throw DomainError("phase table shorter than the series cutoff");
    const double b = std::exp(-beta);
    double f = 0.0, bn = 1.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        f += bn * ph.full[n];
        bn *= b;
    }
    return -0.5 * (1.0 - std::exp(-beta * l_)) * (1.0 - (1.0 - b) * f);
}

double SurdTimeEvaluator::sx(const BigInt& q, double beta) const {
    return sx(phases(q, cutoff({beta})), beta);
}

double SurdTimeEvaluator::sz(const BigInt& q, double beta) const {
    return sz(phases(q, cutoff({beta})), beta);
}

std::vector<CurvePoint> blue_curves(const CandidateSet& mtilde, const std::vector<double>& beta_grid, int l,
                                    long time_divisor_squared, const SeriesConfig& cfg, unsigned threads) {
    const SurdTimeEvaluator eval(l, time_divisor_squared, cfg);
    const std::size_t n_max = eval.cutoff(beta_grid);
    const std::size_t nq = mtilde.members.size();
    std::vector<SurdTimeEvaluator::Phases> table(nq);
    parallel_for(nq, [&](std::size_t i) { table[i] = eval.phases(mtilde.members[i], n_max); }, threads);
    std::vector<CurvePoint> out;
    out.reserve(beta_grid.size() * nq);
    for (double beta : beta_grid)
        for (std::size_t i = 0; i < nq; ++i) out.push_back({beta, mtilde.members[i], eval.sx(table[i], beta)});
    return out;
}

void write_candidates(std::ostream& out, const CandidateSet& set) {
    out << "q\n";
    for (const BigInt& q : set.members) out << q.get_str() << '\n';
}

CandidateSet read_candidates(std::istream& in) {
    CandidateSet set;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line == "q")) continue;
        BigInt q;
        if (q.set_str(line, 10) != 0 || sgn(q) < 0)
            throw ConfigError("candidate file line " + std::to_string(line_no) + ": not a nonnegative integer");
        set.provenance[q];
    }
    finalize(set);
    return set;
}

void write_provenance(std::ostream& out, const CandidateSet& set) {
    nlohmann::json doc = nlohmann::json::array();
    for (const BigInt& q : set.members) {
        nlohmann::json from = nlohmann::json::array();
        if (auto it = set.provenance.find(q); it != set.provenance.end()) {
            for (const auto& p : it->second)
                from.push_back({{"source", p.source}, {"k", p.k.get_str()}, {"index", p.index}});
        }
        doc.push_back({{"q", q.get_str()}, {"from", from}});
    }
    out << doc.dump(2) << '\n';
}

}  // namespace jcm
