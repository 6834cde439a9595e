// jcm: command-line driver: trajectories, zero scans, Weyl sums, cloud checks,
// continued fractions, candidate sets, filtering, curves and oracle checks.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "jcm/analysis.hpp"
#include "jcm/diophantine.hpp"
#include "jcm/errors.hpp"
#include "jcm/io.hpp"
#include "jcm/oracle.hpp"

using namespace jcm;
using jcm::cli::RunConfig;

namespace {

// Command-line values; each one set on the command line overrides the file.
struct Overrides {
    std::string config_path;
    std::optional<int> l;
    std::optional<double> g, omega, beta;
    std::optional<double> tail_tolerance;
    std::optional<std::size_t> max_terms;
    std::optional<double> dt, s, t_end;
    std::optional<std::size_t> n_points;
    bool continuous{false};
    std::optional<double> eps0, c0;
    std::optional<std::size_t> n0;
    std::optional<double> beta_lo, beta_hi;
    std::optional<std::size_t> beta_points;
    std::vector<double> betas;
    std::optional<std::string> candidates_file;
    std::optional<std::size_t> enumeration_limit;
    std::optional<double> filter_beta, epsilon;
    std::optional<int> order;
    std::optional<long> r2;
    std::optional<std::string> evaluation;
    std::optional<int> m_max;
    std::optional<double> control_beta;
    std::optional<int> bins;
    std::optional<long> cf_m, cf_k;
    std::optional<std::size_t> cf_count;
    bool svg{false};
    std::optional<std::string> out;
    std::optional<unsigned> threads;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    sub->add_option("-l,--l", o.l, "photon multiplicity");
    sub->add_option("--g", o.g, "coupling constant");
    sub->add_option("--omega", o.omega, "field frequency");
    sub->add_option("--beta", o.beta, "inverse temperature (inf for zero temperature)");
    sub->add_option("--tail-tolerance", o.tail_tolerance, "thermal series tail bound");
    sub->add_option("--max-terms", o.max_terms, "cap on thermal series terms");
}

void add_sampling(CLI::App* sub, Overrides& o) {
    sub->add_option("--dt", o.dt, "sampling step");
    sub->add_option("-N,--n-points", o.n_points, "frames n = 0..N");
    sub->add_option("--s", o.s, "scale factor applied to dt");
}

void add_grid(CLI::App* sub, Overrides& o) {
    sub->add_option("--beta-lo", o.beta_lo, "lower end of the log beta grid");
    sub->add_option("--beta-hi", o.beta_hi, "upper end of the log beta grid");
    sub->add_option("--beta-points", o.beta_points, "number of grid points");
    sub->add_option("--betas", o.betas, "explicit beta values (replace the grid)");
}

void add_candidates(CLI::App* sub, Overrides& o) {
    sub->add_option("--candidates", o.candidates_file, "read candidates from this file instead of building them");
    sub->add_option("--enumeration-limit", o.enumeration_limit, "largest q when sqrt(l+1) is rational");
}

void add_filter(CLI::App* sub, Overrides& o) {
    add_candidates(sub, o);
    sub->add_option("--filter-beta", o.filter_beta, "inverse temperature of the filter");
    sub->add_option("--epsilon", o.epsilon, "filter epsilon");
    sub->add_option("--order", o.order, "highest thermal term kept by the filter");
    sub->add_option("--time-divisor-squared", o.r2, "r^2 in t_q = q pi / r");
    sub->add_option("--evaluation", o.evaluation, "phase evaluation")
        ->check(CLI::IsMember({"certified", "double"}));
}

template <class T>
void put(const std::optional<T>& v, T& target) {
    if (v) target = *v;
}

RunConfig resolve(const Overrides& o) {
    nlohmann::json doc = nlohmann::json::object();
    if (!o.config_path.empty()) doc = cli::load_json(o.config_path);

    int l = 2;
    if (doc.contains("model") && doc["model"].is_object() && doc["model"].contains("l")) {
        if (!doc["model"]["l"].is_number_integer()) throw ConfigError("model.l: expected an integer");
        l = doc["model"]["l"].get<int>();
    }
    if (o.l) l = *o.l;
    if (l < 1) throw DomainError("photon multiplicity l must be >= 1");

    RunConfig cfg = RunConfig::defaults(l);
    cli::apply_json(cfg, doc);
    cfg.model.l = l;
    cfg.candidates.l = l;

    put(o.g, cfg.model.g);
    put(o.omega, cfg.model.omega);
    put(o.beta, cfg.model.beta);
    put(o.tail_tolerance, cfg.series.tail_tolerance);
    put(o.max_terms, cfg.series.max_terms);
    put(o.dt, cfg.sampling.dt);
    put(o.n_points, cfg.sampling.n_points);
    if (o.s) cfg.sampling.s = *o.s;
    if (o.continuous) cfg.continuous = true;
    put(o.t_end, cfg.t_end);
    put(o.eps0, cfg.schedule.eps0);
    put(o.c0, cfg.schedule.c0);
    put(o.n0, cfg.schedule.n0);
    put(o.beta_lo, cfg.grid.lo);
    put(o.beta_hi, cfg.grid.hi);
    put(o.beta_points, cfg.grid.points);
    if (!o.betas.empty()) cfg.grid.explicit_values = o.betas;
    put(o.candidates_file, cfg.candidates_file);
    put(o.enumeration_limit, cfg.candidates.enumeration_limit);
    put(o.filter_beta, cfg.filter.beta);
    put(o.epsilon, cfg.filter.epsilon);
    put(o.order, cfg.filter.order);
    put(o.r2, cfg.filter.time_divisor_squared);
    if (o.evaluation)
        cfg.filter.evaluation = *o.evaluation == "double" ? CosineEvaluation::machine_double : CosineEvaluation::certified;
    put(o.m_max, cfg.weyl_m_max);
    put(o.control_beta, cfg.control_beta);
    put(o.bins, cfg.bins);
    put(o.cf_m, cfg.cf.m);
    put(o.cf_k, cfg.cf.k);
    put(o.cf_count, cfg.cf.count);
    if (o.svg) cfg.svg = true;
    if (o.out) cfg.output_dir = *o.out;
    put(o.threads, cfg.threads);

    cfg.model.validate();
    return cfg;
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
    std::ofstream out(cfg.output_dir / name);
    if (!out) throw ConfigError("cannot write " + (cfg.output_dir / name).string());
    return out;
}

void note(const std::string& msg) { std::cerr << msg << '\n'; }

SamplingPlan effective_plan(const RunConfig& cfg) {
    SamplingPlan plan = cfg.sampling;
    if (cfg.continuous) {
        // dense uniform sampling of [0, t_end]
        if (plan.n_points == 0) throw DomainError("continuous mode needs n_points >= 1");
        plan.dt = cfg.t_end / static_cast<double>(plan.n_points);
        plan.s.reset();
    } else {
        for (const auto& w : plan.warnings()) note("warning: " + w);
    }
    return plan;
}

int cmd_simulate(const RunConfig& cfg) {
    const auto frames = sample_trajectory(cfg.model, effective_plan(cfg), cfg.series, {1.0, 0.0, 0.0}, cfg.threads);
    auto csv = open_output(cfg, "frames.csv");
    io::write_frames_csv(csv, frames);
    if (cfg.svg) {
        auto svg = open_output(cfg, "frames.svg");
        io::write_svg_scatter(svg, to_cloud(frames), cfg.svg_radius);
    }
    note("wrote " + std::to_string(frames.size()) + " frames");
    return 0;
}

int cmd_scan(const RunConfig& cfg) {
    const auto hits = zero_scan(cfg.model, cfg.sampling, cfg.schedule, cfg.grid.values(), cfg.series, cfg.threads);
    auto csv = open_output(cfg, "hits.csv");
    io::write_hits_csv(csv, hits);
    note("wrote " + std::to_string(hits.size()) + " hits");
    return 0;
}

int cmd_weyl(const RunConfig& cfg) {
    const auto terms = weyl_sums(cfg.sampling, cfg.weyl_m_max);
    auto csv = open_output(cfg, "weyl.csv");
    io::write_weyl_csv(csv, terms);
    double worst = 0.0;
    for (const auto& w : terms) worst = std::max(worst, std::abs(w.direct));
    note("max |W_m| = " + io::format_double(worst));
    return 0;
}

ScaleCheck run_scale_check(const RunConfig& cfg) {
    SamplingPlan plan = cfg.sampling;
    if (!plan.s) plan.s = 1.2;
    return scale_invariance_check(cfg.model, plan, cfg.control_beta, cfg.bins, cfg.thresholds, cfg.series,
                                  cfg.threads);
}

int cmd_scale_check(const RunConfig& cfg) {
    const ScaleCheck c = run_scale_check(cfg);
    auto csv = open_output(cfg, "report.csv");
    io::write_report_csv(csv, {{"scale_distance", c.distance, c.threshold, c.distance < c.threshold},
                               {"control_distance", c.control_distance, c.threshold, c.control_distance > c.threshold}});
    note(std::string("scale check ") + (c.pass ? "passed" : "failed"));
    return c.pass ? 0 : 1;
}

int cmd_cf(const RunConfig& cfg) {
    const SurdCF cf = expand_surd(cfg.cf.m, cfg.cf.k, cfg.cf.count);
    const auto conv = convergents(cf);
    auto csv = open_output(cfg, "cf.csv");
    csv << "index,a,p,q\n";
    for (std::size_t i = 0; i < conv.size(); ++i)
        csv << i << ',' << cf.quotients[i].get_str() << ',' << conv[i].p.get_str() << ',' << conv[i].q.get_str() << '\n';
    return 0;
}

CandidateSet obtain_candidates(const RunConfig& cfg) {
    if (cfg.candidates_file.empty()) return build_candidate_set(cfg.candidates);
    std::ifstream in(cfg.candidates_file);
    if (!in) throw ConfigError("cannot open candidates file " + cfg.candidates_file);
    return read_candidates(in);
}

void write_set(const RunConfig& cfg, const CandidateSet& set, const std::string& stem) {
    auto csv = open_output(cfg, stem + ".csv");
    write_candidates(csv, set);
    auto js = open_output(cfg, stem + "_provenance.json");
    write_provenance(js, set);
}

ModelParams filter_params(const RunConfig& cfg) { return ModelParams{cfg.model.l, cfg.model.g, cfg.model.omega, cfg.filter.beta}; }

int cmd_candidates(const RunConfig& cfg) {
    const CandidateSet set = build_candidate_set(cfg.candidates);
    write_set(cfg, set, "candidates");
    note("|M| = " + std::to_string(set.size()));
    return 0;
}

int cmd_filter(const RunConfig& cfg) {
    FilterSpec f = cfg.filter;
    f.threads = cfg.threads;
    const CandidateSet set = filter_candidates(obtain_candidates(cfg), filter_params(cfg), f);
    write_set(cfg, set, "filtered");
    note("|M~| = " + std::to_string(set.size()));
    return 0;
}

int cmd_curves(const RunConfig& cfg) {
    FilterSpec f = cfg.filter;
    f.threads = cfg.threads;
    const CandidateSet set = filter_candidates(obtain_candidates(cfg), filter_params(cfg), f);
    if (cfg.model.g != 1.0 || cfg.model.omega != 1.0) throw NormalizationError("curves are defined for g = omega = 1");
    const auto points = blue_curves(set, cfg.grid.values(), cfg.model.l, cfg.filter.time_divisor_squared, cfg.series,
                                    cfg.threads);
    auto csv = open_output(cfg, "curves.csv");
    io::write_curves_csv(csv, points);
    note("wrote " + std::to_string(points.size()) + " curve points for " + std::to_string(set.size()) + " curves");
    return 0;
}

io::ReportRow oracle_row(const RunConfig& cfg) {
    double worst = 0.0;
    for (double beta : cfg.oracle_betas) {
        ModelParams p = cfg.model;
        p.beta = beta;
        const auto trunc = oracle::FockTruncation::for_tolerance(p, cfg.oracle_truncation);
        for (double t : cfg.oracle_times) {
            const BlochVector ref = oracle::evolve_and_trace(p, trunc, t, cfg.oracle_truncation);
            const BlochVector got = bloch_propagate({1.0, 0.0, 0.0}, t, p, cfg.series);
            worst = std::max({worst, std::abs(ref.sx - got.sx), std::abs(ref.sy - got.sy), std::abs(ref.sz - got.sz)});
        }
    }
    return {"oracle_max_deviation", worst, cfg.oracle_tolerance, worst <= cfg.oracle_tolerance};
}

int cmd_oracle_verify(const RunConfig& cfg) {
    const io::ReportRow row = oracle_row(cfg);
    auto csv = open_output(cfg, "report.csv");
    io::write_report_csv(csv, {row});
    note("max deviation " + io::format_double(row.value));
    return row.pass ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg) {
    series_cutoff(cfg.model, cfg.series);  // surface TruncationOverflow for the requested beta first
    std::vector<io::ReportRow> rows;
    rows.push_back(oracle_row(cfg));

    constexpr double route_tolerance = 1e-12;
    double gap = 0.0, worst = 0.0;
    for (const auto& w : weyl_sums(cfg.sampling, cfg.weyl_m_max)) {
        gap = std::max(gap, std::abs(w.direct - w.closed_form));
        worst = std::max(worst, std::abs(w.direct));
    }
    double envelope = 0.0;
    for (int m = 1; m <= cfg.weyl_m_max; ++m)
        envelope = std::max(envelope, 1.0 / std::abs(std::sin(m * cfg.sampling.step() / 2.0)));
    const double scaled = worst * static_cast<double>(cfg.sampling.n_points + 1);
    rows.push_back({"weyl_route_gap", gap, route_tolerance, gap <= route_tolerance});
    rows.push_back({"weyl_scaled_discrepancy", scaled, envelope, scaled <= envelope * (1.0 + 1e-9)});

    const ScaleCheck c = run_scale_check(cfg);
    rows.push_back({"scale_distance", c.distance, c.threshold, c.distance < c.threshold});
    rows.push_back({"control_distance", c.control_distance, c.threshold, c.control_distance > c.threshold});

    SamplingPlan base = cfg.sampling;
    base.s.reset();
    const PointCloud cloud = to_cloud(sample_trajectory(cfg.model, base, cfg.series, {1.0, 0.0, 0.0}, cfg.threads));
    const double asym = reflection_asymmetry(cloud, cfg.bins);
    rows.push_back({"reflection_asymmetry", asym, cfg.thresholds.symmetric, asym < cfg.thresholds.symmetric});
    PointCloud both = cloud;
    const PointCloud mirrored =
        to_cloud(sample_trajectory(cfg.model, base, cfg.series, {-1.0, 0.0, 0.0}, cfg.threads));
    both.insert(both.end(), mirrored.begin(), mirrored.end());
    const double dual = reflection_asymmetry(both, cfg.bins);
    rows.push_back({"dual_union_asymmetry", dual, cfg.thresholds.symmetric, dual < cfg.thresholds.symmetric});

    auto csv = open_output(cfg, "report.csv");
    io::write_report_csv(csv, rows);
    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.pass;
        note((r.pass ? "pass  " : "FAIL  ") + r.check + " = " + io::format_double(r.value) + " (threshold " +
             io::format_double(r.threshold) + ")");
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal l-photon Jaynes-Cummings dynamics: trajectories, scans and Diophantine filters"};
    app.require_subcommand(1);
    Overrides o;

    auto* simulate = app.add_subcommand("simulate", "sample S(t) at t_n = n dt; frames.csv (+ frames.svg)");
    add_common(simulate, o);
    add_sampling(simulate, o);
    simulate->add_flag("--continuous", o.continuous, "dense sampling of [0, t_end] with N points");
    simulate->add_option("--t-end", o.t_end, "end time for --continuous");
    simulate->add_flag("--svg", o.svg, "also write an SVG scatter of (S_x, S_z)");

    auto* scan = app.add_subcommand("scan", "frames with |S_z| < eps(beta) over a beta grid; hits.csv");
    add_common(scan, o);
    add_sampling(scan, o);
    add_grid(scan, o);
    scan->add_option("--eps0", o.eps0, "epsilon for beta >= 2");
    scan->add_option("--c0", o.c0, "growth rate of epsilon below beta = 2");
    scan->add_option("--n0", o.n0, "sample count for beta < 1");

    auto* weyl = app.add_subcommand("weyl", "exponential sums of the sampled phases; weyl.csv");
    add_common(weyl, o);
    add_sampling(weyl, o);
    weyl->add_option("--m-max", o.m_max, "largest |m|");

    auto* scale = app.add_subcommand("scale-check", "cloud(dt) vs cloud(s dt) and a beta control; report.csv");
    add_common(scale, o);
    add_sampling(scale, o);
    scale->add_option("--control-beta", o.control_beta, "beta of the control cloud");
    scale->add_option("--bins", o.bins, "histogram bins per axis");

    auto* cf = app.add_subcommand("cf", "partial quotients and convergents of sqrt(m)/k; cf.csv");
    add_common(cf, o);
    cf->add_option("--m", o.cf_m, "radicand");
    cf->add_option("--k", o.cf_k, "divisor");
    cf->add_option("--count", o.cf_count, "number of partial quotients after a_0");

    auto* candidates = app.add_subcommand("candidates", "candidate denominators; candidates.csv + provenance");
    add_common(candidates, o);
    add_candidates(candidates, o);

    auto* filter = app.add_subcommand("filter", "second-order filter of the candidates; filtered.csv + provenance");
    add_common(filter, o);
    add_filter(filter, o);

    auto* curves = app.add_subcommand("curves", "S_x(q pi / r) over a beta grid for the filtered set; curves.csv");
    add_common(curves, o);
    add_filter(curves, o);
    add_grid(curves, o);

    auto* oracle_verify = app.add_subcommand("oracle-verify", "closed form vs truncated-Fock evolution; report.csv");
    add_common(oracle_verify, o);

    auto* verify = app.add_subcommand("verify", "oracle, Weyl, scale and symmetry checks; report.csv");
    add_common(verify, o);
    add_sampling(verify, o);
    verify->add_option("--control-beta", o.control_beta, "beta of the control cloud");
    verify->add_option("--bins", o.bins, "histogram bins per axis");
    verify->add_option("--m-max", o.m_max, "largest |m| for the Weyl sums");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = resolve(o);
        cli::write_resolved(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
        if (weyl->parsed()) return cmd_weyl(cfg);
        if (scale->parsed()) return cmd_scale_check(cfg);
        if (cf->parsed()) return cmd_cf(cfg);
        if (candidates->parsed()) return cmd_candidates(cfg);
        if (filter->parsed()) return cmd_filter(cfg);
        if (curves->parsed()) return cmd_curves(cfg);
        if (oracle_verify->parsed()) return cmd_oracle_verify(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
    } catch (const TruncationOverflow& e) {
        std::cerr << "error (TruncationOverflow): " << e.what() << '\n';
    } catch (const BoundsViolation& e) {
        std::cerr << "error (BoundsViolation): " << e.what() << '\n';
    } catch (const ConfigError& e) {
        std::cerr << "error (ConfigError): " << e.what() << '\n';
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 2;
}
