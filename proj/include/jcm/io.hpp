// io.hpp: CSV tables and SVG scatter plots. Doubles are written with 17
// significant digits so every value round-trips exactly.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jcm/analysis.hpp"
#include "jcm/diophantine.hpp"
#include "jcm/model.hpp"

namespace jcm::io {

std::string format_double(double v);

void write_frames_csv(std::ostream& out, const std::vector<TrajectoryFrame>& frames);
void write_hits_csv(std::ostream& out, const std::vector<ScanHit>& hits);
void write_weyl_csv(std::ostream& out, const std::vector<WeylTerm>& terms);
void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points);

struct ReportRow {
    std::string check;
    double value{0.0};
    double threshold{0.0};
    bool pass{false};
};

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);

/// Scatter of (sx, sz) on [-1,1]^2, one <circle> per point.
void write_svg_scatter(std::ostream& out, const PointCloud& cloud, double radius = 0.6, int size_px = 600);

}  // namespace jcm::io
