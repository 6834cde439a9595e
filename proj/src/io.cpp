#include "jcm/io.hpp"

#include <cstdio>
#include <ostream>

namespace jcm::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_frames_csv(std::ostream& out, const std::vector<TrajectoryFrame>& frames) {
    out << "n,t,sx,sy,sz\n";
    for (const auto& f : frames) {
        out << f.n << ',' << format_double(f.t) << ',' << format_double(f.bloch.sx) << ','
            << format_double(f.bloch.sy) << ',' << format_double(f.bloch.sz) << '\n';
    }
}

void write_hits_csv(std::ostream& out, const std::vector<ScanHit>& hits) {
    out << "beta,n,t,sx,sz\n";
    for (const auto& h : hits) {
        out << format_double(h.beta) << ',' << h.n << ',' << format_double(h.t) << ',' << format_double(h.sx)
            << ',' << format_double(h.sz) << '\n';
    }
}

void write_weyl_csv(std::ostream& out, const std::vector<WeylTerm>& terms) {
    out << "m,magnitude\n";
    for (const auto& w : terms) out << w.m << ',' << format_double(std::abs(w.direct)) << '\n';
}

void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
    out << "beta,q,sx\n";
    for (const auto& p : points) out << format_double(p.beta) << ',' << p.q.get_str() << ',' << format_double(p.sx) << '\n';
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << "check,value,threshold,pass\n";
    for (const auto& r : rows) {
        out << r.check << ',' << format_double(r.value) << ',' << format_double(r.threshold) << ','
            << (r.pass ? "true" : "false") << '\n';
    }
}

void write_svg_scatter(std::ostream& out, const PointCloud& cloud, double radius, int size_px) {
    const double half = size_px / 2.0;
    char buf[96];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\"" << size_px
        << "\" viewBox=\"0 0 " << size_px << ' ' << size_px << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"0\" y1=\"" << half << "\" x2=\"" << size_px << "\" y2=\"" << half
        << "\" stroke=\"#bbb\"/>\n";
    out << "<line x1=\"" << half << "\" y1=\"0\" x2=\"" << half << "\" y2=\"" << size_px
        << "\" stroke=\"#bbb\"/>\n";
    out << "<g fill=\"black\">\n";
    for (const auto& p : cloud) {
        // S_z points up.
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3g\"/>\n", half * (1.0 + p.sx),
                      half * (1.0 - p.sz), radius);
        out << buf;
    }
    out << "</g>\n</svg>\n";
}

}  // namespace jcm::io
