#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "../support.hpp"
#include "willmore/boundary.hpp"
#include "willmore/cli.hpp"
#include "willmore/config.hpp"
#include "willmore/errors.hpp"
#include "willmore/io.hpp"

using namespace willmore;
using namespace willmore::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "willmore_cli_io_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigurationError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    for (const auto& p : problems)
        if (p.find(needle) != std::string::npos) return true;
    return false;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

int quiet_run(const std::string& command, const std::string& text, const fs::path& out) {
    std::ostringstream sink, err;
    RunOptions opt;
    opt.out = &sink;
    opt.err = &err;
    return run_text(command, text, {"output_dir = " + out.string()}, opt, out.string());
}

// Every number is finite, and every null member sits next to a
// "<key>_null_reason" string or is listed in null_values.
void check_nulls(const json& node, const json& listed, const std::string& path) {
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            if (it.value().is_null()) {
                bool explained = node.contains(it.key() + "_null_reason");
                for (const auto& e : listed) explained = explained || e["path"] == path + "/" + it.key();
                const std::string where = path + "/" + it.key();
                CHECK_MESSAGE(explained, where);
            }
            check_nulls(it.value(), listed, path + "/" + it.key());
        }
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) check_nulls(node[i], listed, path + "/" + std::to_string(i));
    } else if (node.is_number_float()) {
        CHECK(std::isfinite(node.get<double>()));
    }
}

}  // namespace

TEST_CASE("parse_config defaults and overrides") {
    const RunConfig c = parse_config("domain = unit-square\n");
    CHECK(c.resolution == 64);
    CHECK(c.p == 4.0);
    CHECK(c.a == 0.25);
    CHECK(c.tolerance == 1e-8);
    CHECK(c.boundary == "sine-slope");
    CHECK(c.levels == std::vector<int>{16, 32, 64});

    const RunConfig o = parse_config("# comment\nresolution = 32\nresolution = 48  # later wins\namplitude=0.1\n");
    CHECK(o.resolution == 48);
    CHECK(o.amplitude == 0.1);

    const RunConfig poly = parse_config("domain = polygon\nvertices = 0 0; 2 0; 2 1; 0 1\n");
    CHECK(poly.polygon().area() == doctest::Approx(2.0));
    CHECK(parse_config("domain = l-shape").polygon().area() == doctest::Approx(0.75));
}

TEST_CASE("parse_config reports every problem") {
    CHECK(mentions(problems_of("p = 2\n"), "p ∈ (2, ∞)"));
    CHECK(mentions(problems_of("p = 4\na = 0.6\n"), "a < 1 − 2/p = 0.5"));
    CHECK(mentions(problems_of("resolution = 8\n"), "resolution ≥ 16"));
    CHECK(mentions(problems_of("tolerence = 1e-6\n"), "did you mean 'tolerance'"));
    CHECK(mentions(problems_of("amplitude = inf\n"), "amplitude"));
    const auto many = problems_of("p = 2\nresolution = 8\nbogus = 1\ndamping = 0\n");
    CHECK(many.size() >= 4);
    CHECK(mentions(problems_of("resolution = abc\n"), "line 1"));
}

TEST_CASE("edit distance") {
    CHECK(edit_distance("kitten", "sitting") == 3);
    CHECK(edit_distance("", "abc") == 3);
    CHECK(edit_distance("same", "same") == 0);
}

TEST_CASE("boundary round trip") {
    const fs::path dir = scratch("roundtrip");
    const DomainPtr d = square(16);
    const BoundaryData bc = BoundaryData::from_traces(d, [](Point p) { return 0.3 * p.x - 0.2 * p.y + 1.0; },
                                                      [](Point) { return Vec2{0.3, -0.2}; });
    export_boundary(bc, (dir / "bc.csv").string());
    std::vector<std::string> warnings;
    const BoundaryData back = import_boundary((dir / "bc.csv").string(), d, &warnings);
    CHECK(warnings.empty());
    REQUIRE(back.size() == bc.size());
    for (std::size_t k = 0; k < bc.size(); ++k) {
        CHECK(back.g0()[k] == bc.g0()[k]);
        CHECK(back.g1()[k] == bc.g1()[k]);
    }
}

TEST_CASE("boundary import errors") {
    const DomainPtr d = square(16);
    try {
        parse_boundary_csv("arclength,g0,g1\n0,0,0\n0.5,0,0\n0.25,0,0\n", d);
        FAIL("non-monotone arclength accepted");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("row 4") != std::string::npos);
    }
    try {
        parse_boundary_csv("0,0,0\n0.1,zero,0\n", d);
        FAIL("malformed row accepted");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
    CHECK_THROWS_AS(import_boundary("/nonexistent/bc.csv", d), IoError);
}

TEST_CASE("boundary import resamples mismatched counts") {
    const DomainPtr d = square(32);
    const double L = d->perimeter();
    std::ostringstream csv;
    csv.precision(17);
    csv << "arclength,g0,g1\n";
    const int m = 400;
    for (int k = 0; k < m; ++k) {
        const double s = L * k / m;
        csv << s << ',' << std::sin(2 * std::numbers::pi * s / L) << ',' << std::cos(2 * std::numbers::pi * s / L) << '\n';
    }
    std::vector<std::string> warnings;
    const BoundaryData bc = parse_boundary_csv(csv.str(), d, &warnings);
    CHECK(warnings.size() == 1);
    REQUIRE(bc.size() == d->trace().size());
    const double ds = L / m;
    const double tol = 0.5 * std::pow(2 * std::numbers::pi / L * ds, 2) / 4.0 + 1e-12;
    for (std::size_t k = 0; k < bc.size(); ++k) {
        const double s = bc.sample(k).arclength;
        CHECK(std::abs(bc.g0()[k] - std::sin(2 * std::numbers::pi * s / L)) <= tol);
        CHECK(std::abs(bc.g1()[k] - std::cos(2 * std::numbers::pi * s / L)) <= tol);
    }
}

TEST_CASE("field export") {
    const fs::path dir = scratch("export");
    const DomainPtr d = square(16);
    export_field(ScalarField::sample(d, [](Point p) { return p.x + 2 * p.y; }), (dir / "u.csv").string(), "u");
    std::ifstream in(dir / "u.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,u");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        double x, y, v;
        char c1, c2;
        std::istringstream ls(line);
        ls >> x >> c1 >> y >> c2 >> v;
        CHECK(v == doctest::Approx(x + 2 * y).epsilon(1e-15));
        ++rows;
    }
    CHECK(rows == 17 * 17);
}

TEST_CASE("run: solve with affine data") {
    const fs::path out = scratch("solve_affine");
    CHECK(quiet_run("solve", "boundary = affine\namplitude = 0.4\nresolution = 16\n", out) == kExitSuccess);
    const json r = read_json(out / "report.json");
    CHECK(r["schema_version"] == kSchemaVersion);
    CHECK(r["exit_code"] == 0);
    CHECK(r["results"]["convergence"]["outcome"] == "converged");
    CHECK(r["results"]["convergence"]["iterations"] == 1);
    CHECK(r["results"]["convergence"]["residual"]["weak"].get<double>() <= 1e-9);
    CHECK(r["results"]["convergence"]["residual"]["strong"].get<double>() <= 1e-9);
    CHECK(r["results"]["convergence"]["contraction"]["note"] == "insufficient history");
    CHECK(r["results"]["parameter_check"]["fixed_point_regime"]["satisfied"] == true);
    CHECK(r["metadata"].contains("grid"));
    CHECK(r["metadata"]["timestamp"].contains("wall_time_s"));
    for (const char* f : {"u.csv", "mean_curvature.csv", "gauss_curvature.csv", "area_element.csv"})
        CHECK(fs::exists(out / f));
    check_nulls(r, r["null_values"], "");

    // On finer grids the undivided fourth differences of an exactly affine
    // field sit at the rounding floor eps / h^4 instead.
    const fs::path fine = scratch("solve_affine_fine");
    CHECK(quiet_run("solve", "boundary = affine\namplitude = 0.4\nresolution = 64\n", fine) == kExitSuccess);
    const json rf = read_json(fine / "report.json");
    CHECK(rf["results"]["convergence"]["iterations"] == 1);
    CHECK(rf["results"]["convergence"]["residual"]["strong"].get<double>() <= fourth_order_rounding(1.0 / 64, 0.4) * 10);
}

TEST_CASE("run: verify-identity records orders") {
    const fs::path out = scratch("identity");
    CHECK(quiet_run("verify-identity", "field = sine\n", out) == kExitSuccess);
    const json r = read_json(out / "report.json");
    const auto orders = r["results"]["raw"]["orders"];
    REQUIRE(orders.size() == 2);
    for (const auto& q : orders) {
        CHECK(q.get<double>() >= 1.8);
        CHECK(q.get<double>() <= 2.5);
    }
}

TEST_CASE("run: exit codes") {
    const fs::path out = scratch("codes");
    CHECK(quiet_run("solve", "resolution = 8\n", out / "coarse") == kExitConfiguration);
    const json coarse = read_json(out / "coarse" / "report.json");
    CHECK(coarse["failure"]["messages"][0].get<std::string>().find("resolution ≥ 16") != std::string::npos);

    CHECK(quiet_run("frobnicate", "", out / "unknown") == kExitConfiguration);
    CHECK(quiet_run("solve", "amplitude = 20\nresolution = 32\n", out / "diverged") == kExitFailed);
    const json diverged = read_json(out / "diverged" / "report.json");
    CHECK(diverged["results"]["convergence"]["outcome"] == "diverged");
    CHECK(diverged["results"]["convergence"]["residual"].is_null());
    check_nulls(diverged, diverged["null_values"], "");

    CHECK(quiet_run("sweep", "resolution = 32\nsweep_epsilons = 0.05, 1.0\nmax_iterations = 10\n", out / "sweep") ==
          kExitFailed);
    CHECK(quiet_run("solve", "domain = polygon\nvertices = 0 0; 1 0; 0.5 0.9\nresolution = 32\n", out / "oblique") ==
          kExitConfiguration);
}

TEST_CASE("run: every command writes a valid report") {
    for (const std::string& cmd : commands()) {
        const fs::path out = scratch("all_" + cmd);
        const int code = quiet_run(cmd, "resolution = 32\nsweep_epsilons = 0.01, 0.05\n", out);
        CHECK_MESSAGE(code == kExitSuccess, cmd);
        const json r = read_json(out / "report.json");
        CHECK(r["command"] == cmd);
        check_nulls(r, r["null_values"], "");
    }
}

TEST_CASE("run: energy of the sphere cap") {
    const fs::path out = scratch("cap");
    CHECK(quiet_run("energy", "field = sphere-cap\ncap_radius = 2\n", out) == kExitSuccess);
    const json r = read_json(out / "report.json");
    CHECK(r["results"]["willmore"].back().get<double>() == doctest::Approx(std::numbers::pi).epsilon(0.02));
}

TEST_CASE("run: reports are deterministic apart from the timestamp") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(quiet_run("solve", "resolution = 32\n", a) == kExitSuccess);
    REQUIRE(quiet_run("solve", "resolution = 32\n", b) == kExitSuccess);
    json ra = read_json(a / "report.json"), rb = read_json(b / "report.json");
    ra["metadata"].erase("timestamp");
    rb["metadata"].erase("timestamp");
    CHECK(ra == rb);
    std::ifstream ua(a / "u.csv"), ub(b / "u.csv");
    std::stringstream sa, sb;
    sa << ua.rdbuf();
    sb << ub.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("run: summary goes to the output stream unless quiet") {
    const fs::path out = scratch("summary");
    std::ostringstream o, e;
    RunOptions opt;
    opt.out = &o;
    opt.err = &e;
    run_text("verify-identity", "", {"output_dir = " + out.string()}, opt);
    CHECK(o.str().find("verify-identity") != std::string::npos);
    std::ostringstream q;
    opt.out = &q;
    opt.quiet = true;
    run_text("verify-identity", "", {"output_dir = " + out.string()}, opt);
    CHECK(q.str().empty());
}
