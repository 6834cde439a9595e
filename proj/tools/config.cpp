#include "config.hpp"

#include <fstream>
#include <set>

#include "jcm/errors.hpp"

namespace jcm::cli {

using nlohmann::json;

std::vector<double> BetaGrid::values() const {
    if (!explicit_values.empty()) return explicit_values;
    return log_grid(lo, hi, points);
}

RunConfig RunConfig::defaults(int l) {
    RunConfig cfg;
    cfg.model.l = l;
    cfg.candidates = CandidateSpec::defaults(l);
    switch (l) {
        case 1:
            cfg.model.beta = 0.9;
            cfg.control_beta = 1.8;
            cfg.schedule = {0.0035, 0.7, 1000000};
            cfg.filter.epsilon = 0.0035;
            break;
        case 3:
            cfg.model.beta = 0.6;
            cfg.control_beta = 1.2;
            cfg.schedule = {0.0024, 1.5, 1000000};
            cfg.filter.epsilon = 0.003;
            break;
        case 4:
            cfg.model.beta = 1.2;
            cfg.control_beta = 2.4;
            cfg.schedule = {0.009, 0.7, 1000000};
            cfg.filter.epsilon = 0.04;
            break;
        default:
            cfg.model.beta = 1.0;
            cfg.control_beta = 2.0;
            cfg.schedule = {0.009, 0.6, 1000000};
            cfg.filter.epsilon = 0.05;
            break;
    }
    return cfg;
}

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown.
class Section {
public:
    Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError(field(key) + ": expected " + expected<T>() + ", got " + it->dump());
        }
    }

    template <class T>
    void read_optional(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end()) return;
        if (it->is_null()) {
            out.reset();
            return;
        }
        T v{};
        read(key, v);
        out = v;
    }

    const json* child(const char* key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown config key '" + field(it.key()) + "'");
    }

private:
    template <class T>
    static std::string expected() {
        if constexpr (std::is_same_v<T, bool>) return "a boolean";
        else if constexpr (std::is_same_v<T, std::string>) return "a string";
        else if constexpr (std::is_integral_v<T>) return "an integer";
        else if constexpr (std::is_floating_point_v<T>) return "a number";
        else return "a list";
    }

    std::string where() const { return path_.empty() ? "config" : path_; }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

// Accepts a JSON number or the string "inf" (zero temperature).
double read_beta(const json& v, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && v.get<std::string>() == "inf") return ModelParams::zero_temperature;
    throw ConfigError(field + ": expected a number or \"inf\", got " + v.dump());
}

CosineEvaluation parse_evaluation(const std::string& s, const std::string& field) {
    if (s == "certified") return CosineEvaluation::certified;
    if (s == "double") return CosineEvaluation::machine_double;
    throw ConfigError(field + ": expected \"certified\" or \"double\", got \"" + s + "\"");
}

}  // namespace

void apply_json(RunConfig& cfg, const json& doc) {
    Section top(doc, "");
    if (const json* m = top.child("model")) {
        Section s(*m, "model");
        s.read("l", cfg.model.l);
        s.read("g", cfg.model.g);
        s.read("omega", cfg.model.omega);
        if (const json* b = s.child("beta")) cfg.model.beta = read_beta(*b, s.field("beta"));
        s.finish();
    }
    if (const json* m = top.child("series")) {
        Section s(*m, "series");
        s.read("tail_tolerance", cfg.series.tail_tolerance);
        s.read("max_terms", cfg.series.max_terms);
        s.finish();
    }
    if (const json* m = top.child("sampling")) {
        Section s(*m, "sampling");
        s.read("dt", cfg.sampling.dt);
        s.read("n_points", cfg.sampling.n_points);
        s.read_optional("s", cfg.sampling.s);
        s.read("continuous", cfg.continuous);
        s.read("t_end", cfg.t_end);
        s.finish();
    }
    if (const json* m = top.child("schedule")) {
        Section s(*m, "schedule");
        s.read("eps0", cfg.schedule.eps0);
        s.read("c0", cfg.schedule.c0);
        s.read("n0", cfg.schedule.n0);
        s.finish();
    }
    if (const json* m = top.child("beta_grid")) {
        Section s(*m, "beta_grid");
        s.read("lo", cfg.grid.lo);
        s.read("hi", cfg.grid.hi);
        s.read("points", cfg.grid.points);
        s.read("values", cfg.grid.explicit_values);
        s.finish();
    }
    if (const json* m = top.child("candidates")) {
        Section s(*m, "candidates");
        s.read("include_zero", cfg.candidates.include_zero);
        s.read("enumeration_limit", cfg.candidates.enumeration_limit);
        s.read("file", cfg.candidates_file);
        if (const json* r = s.child("ranges")) {
            if (!r->is_array()) throw ConfigError("candidates.ranges: expected a list");
            cfg.candidates.ranges.clear();
            for (std::size_t i = 0; i < r->size(); ++i) {
                Section e((*r)[i], "candidates.ranges[" + std::to_string(i) + "]");
                long k = 1;
                IndexRange range;
                e.read("k", k);
                e.read("lo", range.lo);
                e.read("hi", range.hi);
                e.finish();
                range.k = k;
                cfg.candidates.ranges.push_back(range);
            }
        }
        s.finish();
    }
    if (const json* m = top.child("filter")) {
        Section s(*m, "filter");
        s.read("beta", cfg.filter.beta);
        s.read("epsilon", cfg.filter.epsilon);
        s.read("order", cfg.filter.order);
        s.read("time_divisor_squared", cfg.filter.time_divisor_squared);
        std::string evaluation;
        s.read("evaluation", evaluation);
        if (!evaluation.empty()) cfg.filter.evaluation = parse_evaluation(evaluation, "filter.evaluation");
        s.finish();
    }
    if (const json* m = top.child("weyl")) {
        Section s(*m, "weyl");
        s.read("m_max", cfg.weyl_m_max);
        s.finish();
    }
    if (const json* m = top.child("clouds")) {
        Section s(*m, "clouds");
        s.read("control_beta", cfg.control_beta);
        s.read("bins", cfg.bins);
        s.read("scale_threshold", cfg.thresholds.scale_invariance);
        s.read("symmetry_threshold", cfg.thresholds.symmetric);
        s.finish();
    }
    if (const json* m = top.child("oracle")) {
        Section s(*m, "oracle");
        s.read("tolerance", cfg.oracle_tolerance);
        s.read("truncation", cfg.oracle_truncation);
        s.read("betas", cfg.oracle_betas);
        s.read("times", cfg.oracle_times);
        s.finish();
    }
    if (const json* m = top.child("cf")) {
        Section s(*m, "cf");
        s.read("m", cfg.cf.m);
        s.read("k", cfg.cf.k);
        s.read("count", cfg.cf.count);
        s.finish();
    }
    if (const json* m = top.child("output")) {
        Section s(*m, "output");
        std::string dir = cfg.output_dir.string();
        s.read("dir", dir);
        cfg.output_dir = dir;
        s.read("svg", cfg.svg);
        s.read("svg_radius", cfg.svg_radius);
        s.finish();
    }
    top.read("threads", cfg.threads);
    top.finish();
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

json to_json(const RunConfig& cfg) {
    json ranges = json::array();
    for (const auto& r : cfg.candidates.ranges) ranges.push_back({{"k", r.k.get_si()}, {"lo", r.lo}, {"hi", r.hi}});
    json beta = cfg.model.is_zero_temperature() ? json("inf") : json(cfg.model.beta);
    return {
        {"model", {{"l", cfg.model.l}, {"g", cfg.model.g}, {"omega", cfg.model.omega}, {"beta", beta}}},
        {"series", {{"tail_tolerance", cfg.series.tail_tolerance}, {"max_terms", cfg.series.max_terms}}},
        {"sampling",
         {{"dt", cfg.sampling.dt},
          {"n_points", cfg.sampling.n_points},
          {"s", cfg.sampling.s ? json(*cfg.sampling.s) : json(nullptr)},
          {"continuous", cfg.continuous},
          {"t_end", cfg.t_end}}},
        {"schedule", {{"eps0", cfg.schedule.eps0}, {"c0", cfg.schedule.c0}, {"n0", cfg.schedule.n0}}},
        {"beta_grid",
         {{"lo", cfg.grid.lo}, {"hi", cfg.grid.hi}, {"points", cfg.grid.points}, {"values", cfg.grid.explicit_values}}},
        {"candidates",
         {{"include_zero", cfg.candidates.include_zero},
          {"enumeration_limit", cfg.candidates.enumeration_limit},
          {"file", cfg.candidates_file},
          {"ranges", ranges}}},
        {"filter",
         {{"beta", cfg.filter.beta},
          {"epsilon", cfg.filter.epsilon},
          {"order", cfg.filter.order},
          {"time_divisor_squared", cfg.filter.time_divisor_squared},
          {"evaluation", cfg.filter.evaluation == CosineEvaluation::certified ? "certified" : "double"}}},
        {"weyl", {{"m_max", cfg.weyl_m_max}}},
        {"clouds",
         {{"control_beta", cfg.control_beta},
          {"bins", cfg.bins},
          {"scale_threshold", cfg.thresholds.scale_invariance},
          {"symmetry_threshold", cfg.thresholds.symmetric}}},
        {"oracle",
         {{"tolerance", cfg.oracle_tolerance},
          {"truncation", cfg.oracle_truncation},
          {"betas", cfg.oracle_betas},
          {"times", cfg.oracle_times}}},
        {"cf", {{"m", cfg.cf.m}, {"k", cfg.cf.k}, {"count", cfg.cf.count}}},
        {"output", {{"dir", cfg.output_dir.string()}, {"svg", cfg.svg}, {"svg_radius", cfg.svg_radius}}},
        {"threads", cfg.threads},
    };
}

void write_resolved(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(cfg.output_dir / "config.resolved.json");
    out << to_json(cfg).dump(2) << '\n';
}

}  // namespace jcm::cli
