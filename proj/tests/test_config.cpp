#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gdlab/config.hpp"
#include "gdlab/csv.hpp"

using namespace gdlab;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path.string();
}

}  // namespace

TEST_CASE("config parsing: keys, comments, lists, fail-fast") {
    auto cfg = ConfigMap::parse_string(
        "# experiment\n"
        "d = 3\n"
        "scale = power(1, 0.5)   # growth profile\n"
        "horizons = [1e3, 1e4, 1e5]\n"
        "verbose = true\n");
    CHECK(cfg.get_int("d") == 3);
    CHECK(cfg.get_string("scale") == "power(1, 0.5)");
    auto h = cfg.get_list("horizons");
    REQUIRE(h.size() == 3);
    CHECK(h[1] == doctest::Approx(1e4));
    CHECK(cfg.get_bool("verbose", false));
    cfg.finalize();  // everything consumed

    auto bad = ConfigMap::parse_string("d = 3\nmystery = 1\n");
    CHECK(bad.get_int("d") == 3);
    CHECK_THROWS(bad.finalize());  // unknown key is an error

    CHECK_THROWS(ConfigMap::parse_string("novalue\n"));
    CHECK_THROWS(ConfigMap::parse_string("a = 1\na = 2\n"));
}

TEST_CASE("scale specs") {
    auto p = parse_scale_spec("power(2, 0.5)");
    CHECK(p(2.0) == doctest::Approx(2.0));

    auto s = parse_scale_spec("steps([(0, 1), (5, 2), (9, 4)])");
    CHECK(s(4.9) == 1.0);
    CHECK(s(5.0) == 2.0);
    CHECK(s(9.5) == 4.0);

    auto path = write_temp("gdlab_scale_table.csv", "t,value\n0,1.0\n10,3.0\n20,9.0\n");
    auto t = parse_scale_spec("table(" + path + ")");
    CHECK(t(5.0) == 1.0);
    CHECK(t(10.0) == 3.0);

    CHECK_THROWS(parse_scale_spec("spline(1,2)"));
}

TEST_CASE("shape specs") {
    auto b = parse_shape_spec("ball(2)", 3);
    CHECK(b.inner_radius() == 2.0);
    auto e = parse_shape_spec("ellipsoid(2, 1, 1)", 3);
    CHECK(e.outer_radius() == 2.0);
    CHECK_THROWS(parse_shape_spec("ellipsoid(2, 1)", 3));

    std::string csv = "theta,phi,r\n";
    for (double th : {0.0, 1.5707963, 3.1415927})
        for (double ph : {0.0, 2.0943951, 4.1887902})
            csv += std::to_string(th) + "," + std::to_string(ph) + ",1.0\n";
    auto path = write_temp("gdlab_shape_table.csv", csv);
    auto r = parse_shape_spec("radial_table(" + path + ")", 3);
    CHECK(r.inner_radius() == doctest::Approx(1.0));
    CHECK_THROWS(parse_shape_spec("radial_table(" + path + ")", 4));
}

TEST_CASE("csv round trip") {
    CsvWriter w("a,b,c");
    w.field(int64_t{1}).field(2.5, 3).field("x");
    w.end_row();
    w.field(int64_t{-7}).field(0.125, 6).field("y z");
    w.end_row();
    auto t = parse_csv(w.str());
    REQUIRE(t.header.size() == 3);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.number(0, t.column("a")) == 1.0);
    CHECK(t.number(0, t.column("b")) == 2.5);
    CHECK(t.number(1, t.column("b")) == 0.125);
    CHECK(t.rows[1][2] == "y z");

    // Fixed-point formatting is locale-free and stable.
    CHECK(format_fixed(1.0 / 3.0, 6) == "0.333333");
    CHECK(format_fixed(2.0, 2) == "2.00");
}
