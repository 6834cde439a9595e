#include <sstream>
#include <string>

#include "doctest.h"
#include "jcm/io.hpp"

using namespace jcm;

TEST_CASE("doubles round-trip through text") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789}) CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("csv headers and rows") {
    std::ostringstream frames;
    io::write_frames_csv(frames, {{3, 12.0, {0.5, 0.0, -0.25}}});
    CHECK(frames.str() == "n,t,sx,sy,sz\n3,12,0.5,0,-0.25\n");

    std::ostringstream hits;
    io::write_hits_csv(hits, {{2.0, 7, 28.0, 0.75, 0.001}});
    CHECK(hits.str().rfind("beta,n,t,sx,sz\n", 0) == 0);

    std::ostringstream weyl;
    io::write_weyl_csv(weyl, {{-1, {0.0, 0.5}, {0.0, 0.5}}});
    CHECK(weyl.str() == "m,magnitude\n-1,0.5\n");

    std::ostringstream curves;
    io::write_curves_csv(curves, {{2.0, BigInt("15731042"), 0.25}});
    CHECK(curves.str() == "beta,q,sx\n2,15731042,0.25\n");

    std::ostringstream report;
    io::write_report_csv(report, {{"symmetry", 0.1, 0.5, true}});
    CHECK(report.str() == "check,value,threshold,pass\nsymmetry,0.10000000000000001,0.5,true\n");
}

TEST_CASE("svg scatter") {
    std::ostringstream svg;
    io::write_svg_scatter(svg, {{0.0, 0.0}, {1.0, 1.0}, {-1.0, 0.5}});
    const std::string s = svg.str();
    std::size_t circles = 0;
    for (std::size_t pos = s.find("<circle"); pos != std::string::npos; pos = s.find("<circle", pos + 1)) ++circles;
    CHECK(circles == 3);
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
}
