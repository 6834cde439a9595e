// diophantine.hpp: continued fractions of sqrt(m)/k, convergents, candidate
// denominator sets and the second-order filter that predicts times where S_z
// nearly vanishes.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "jcm/model.hpp"
#include "jcm/precision.hpp"

namespace jcm {

/// Partial quotients of alpha = sqrt(m)/k.
struct SurdCF {
    BigInt m;
    BigInt k;
    std::vector<BigInt> quotients;
    bool rational{false};  // true when the expansion terminated
};

struct Convergent {
    BigInt p;
    BigInt q;
    bool operator==(const Convergent&) const = default;
};

/// First count+1 partial quotients a_0..a_count of sqrt(m)/k, or the full
/// finite expansion when sqrt(m)/k is rational. Exact integer arithmetic only.
SurdCF expand_surd(const BigInt& m, const BigInt& k, std::size_t count);

/// p_i/q_i = [a_0; a_1, ..., a_i] for every available index i.
std::vector<Convergent> convergents(const SurdCF& cf);

struct IndexRange {
    BigInt k;
    std::size_t lo{0};
    std::size_t hi{0};
};

struct CandidateSpec {
    int l{2};
    std::vector<IndexRange> ranges;   // one entry per divisor k
    bool include_zero{true};
    std::size_t enumeration_limit{2000};  // used when sqrt(l+1) is an integer

    /// Published ranges: l=1 k=1..4 idx 12..39; l=2 k=1..7 idx 12..59;
    /// l=4 k=1..8 idx 8..59 and k=9 idx 8..58; l=3 enumerates 0..2000.
    static CandidateSpec defaults(int l);
    void validate() const;
};

struct Provenance {
    std::string source;   // "convergent", "zero" or "enumerated"
    BigInt k{0};
    std::size_t index{0};
    bool operator==(const Provenance&) const = default;
};

struct CandidateSet {
    std::vector<BigInt> members;                        // sorted ascending, unique
    std::map<BigInt, std::vector<Provenance>> provenance;

    std::size_t size() const { return members.size(); }
    bool contains(const BigInt& q) const;
};

/// Union over k of convergent denominators of sqrt(l+1)/k in [lo, hi], plus
/// {0} when requested. When l+1 is a perfect square the surd is rational and
/// the set is {0, 1, ..., enumeration_limit} instead.
CandidateSet build_candidate_set(const CandidateSpec& spec);

enum class CosineEvaluation {
    certified,       // exact reduction of q*sqrt(D_n/r^2) modulo 1
    machine_double,  // cos(sqrt(4 D_n / r^2) * q * pi) in IEEE double, no reduction
};

struct FilterSpec {
    double beta{2.0};
    double epsilon{0.05};
    int order{2};
    long time_divisor_squared{1};  // t_q = q*pi / sqrt(r^2)
    CosineEvaluation evaluation{CosineEvaluation::certified};
    unsigned threads{0};

    void validate() const;
};

/// Coefficient kappa_n of b^n in 1/((1-b)(1-b^l)); the filter threshold is
/// sum_n (1 - 2 eps kappa_n) b^n.
long threshold_multiplicity(int l, int n);
double filter_threshold(int l, const FilterSpec& fspec);
/// sum_{n<=order} b^n cos(2 sqrt(D_n) t_q), with D_n for g = 1.
double filter_rhs(const BigInt& q, int l, const FilterSpec& fspec);

/// Members q with filter_threshold < filter_rhs(q). Requires g = omega = 1.
CandidateSet filter_candidates(const CandidateSet& mset, const ModelParams& params, const FilterSpec& fspec);

/// Upper bound on |S_z(t_q)| implied by passing the filter (truncation of the
/// thermal series beyond `order` included).
double implied_sz_bound(int l, const FilterSpec& fspec);

/// Evaluates L1 and L3 at t_q = q*pi/sqrt(r^2) with certified reduction of
/// every phase, so q may be arbitrarily large. Requires g = omega = 1.
class SurdTimeEvaluator {
public:
    /// Beta-independent phase factors at one t_q, for n = 0..n_max.
    struct Phases {
        std::vector<double> half;        // cos(sqrt(D_n) t_q)
        std::vector<double> half_prime;  // cos(sqrt(D'_n) t_q)
        std::vector<double> full;        // cos(2 sqrt(D_n) t_q)
    };

    SurdTimeEvaluator(int l, long time_divisor_squared, const SeriesConfig& cfg = {});

    /// Largest series cutoff over the given inverse temperatures.
    std::size_t cutoff(const std::vector<double>& betas) const;
    Phases phases(const BigInt& q, std::size_t n_max) const;

    double sx(const Phases& ph, double beta) const;
    double sz(const Phases& ph, double beta) const;
    double sx(const BigInt& q, double beta) const;
    double sz(const BigInt& q, double beta) const;

private:
    int l_;
    long r2_;
    SeriesConfig cfg_;
};

struct CurvePoint {
    double beta{0.0};
    BigInt q;
    double sx{0.0};
};

/// S_x(t_q) for every beta in the grid and every q in mtilde, beta-major.
std::vector<CurvePoint> blue_curves(const CandidateSet& mtilde, const std::vector<double>& beta_grid, int l,
                                    long time_divisor_squared, const SeriesConfig& cfg = {},
                                    unsigned threads = 0);

/// Header line "q", then one decimal integer per line, ascending. Reading
/// accepts the file with or without the header.
void write_candidates(std::ostream& out, const CandidateSet& set);
CandidateSet read_candidates(std::istream& in);
/// JSON sidecar: [{"q": "...", "from": [{"source":..,"k":..,"index":..}]}, ...]
void write_provenance(std::ostream& out, const CandidateSet& set);

}  // namespace jcm
