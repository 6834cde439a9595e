// config.hpp: command-line run configuration. Defaults per l, JSON file
// loading with field diagnostics, and the resolved-config echo.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jcm/analysis.hpp"
#include "jcm/diophantine.hpp"
#include "jcm/model.hpp"
#include "json.hpp"

namespace jcm::cli {

struct BetaGrid {
    double lo{0.5};
    double hi{5.0};
    std::size_t points{100};
    std::vector<double> explicit_values;  // used instead of the log grid when nonempty

    std::vector<double> values() const;
};

struct CfRequest {
    long m{3};
    long k{1};
    std::size_t count{20};
};

struct RunConfig {
    ModelParams model{2, 1.0, 1.0, 1.0};
    SeriesConfig series;
    SamplingPlan sampling{4.0, 400000, {}};
    bool continuous{false};
    double t_end{40.0};
    EpsilonSchedule schedule;
    BetaGrid grid;
    CandidateSpec candidates = CandidateSpec::defaults(2);
    std::string candidates_file;  // read instead of building when set
    FilterSpec filter;
    int weyl_m_max{8};
    double control_beta{2.0};
    int bins{64};
    CloudThresholds thresholds;
    double oracle_tolerance{1e-8};
    double oracle_truncation{1e-12};
    std::vector<double> oracle_betas{0.5, 1.0, 2.0, 5.0};
    std::vector<double> oracle_times{0.5, 1.0, 5.0, 20.0, 40.0};
    CfRequest cf;
    bool svg{false};
    double svg_radius{0.6};
    std::filesystem::path output_dir{"out"};
    unsigned threads{0};

    /// Reference trajectory, scan and filter parameters for photon multiplicity l.
    static RunConfig defaults(int l);
};

/// Applies every key present in `doc` on top of `cfg`. Unknown keys and
/// mistyped values raise ConfigError naming the field.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);

/// Parses a JSON config file. Syntax errors raise ConfigError with line and column.
nlohmann::json load_json(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);

/// Creates the output directory and writes config.resolved.json into it.
void write_resolved(const RunConfig& cfg);

}  // namespace jcm::cli
