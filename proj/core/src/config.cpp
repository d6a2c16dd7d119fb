#include "willmore/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

bool parse_int(const std::string& s, int& out) {
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "domain",        "vertices",        "resolution",      "boundary",       "amplitude",
        "boundary_file", "p",               "a",               "tolerance",      "max_iterations",
        "damping",       "initial_guess",   "blowup_gradient", "blowup_growth",  "field",
        "field_amplitude", "cap_radius",    "cap_angle",       "levels",         "sweep_epsilons",
        "output_dir"};
    return keys;
}

Polygon RunConfig::polygon() const {
    if (domain == "unit-square") return Polygon::unit_square();
    if (domain == "l-shape") return Polygon::l_shape();
    return Polygon(vertices);
}

IterationConfig RunConfig::iteration() const {
    IterationConfig c;
    c.norm = NormParams::make(p, a);
    c.tolerance = tolerance;
    c.max_iterations = max_iterations;
    c.damping = damping;
    c.initial = initial_guess == "zero" ? InitialGuess::Zero : InitialGuess::Biharmonic;
    c.blowup_gradient = blowup_gradient;
    c.blowup_growth = blowup_growth;
    return c;
}

BoundaryShape RunConfig::boundary_shape() const {
    if (boundary == "zero") return BoundaryShape::Zero;
    if (boundary == "sine-height") return BoundaryShape::SineHeight;
    if (boundary == "affine") return BoundaryShape::Affine;
    return BoundaryShape::SineSlope;
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::vector<std::string> problems;
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            const auto best = std::min_element(keys.begin(), keys.end(), [&](const auto& x, const auto& y) {
                return edit_distance(key, x) < edit_distance(key, y);
            });
            problems.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'; did you mean '" + *best +
                               "'?");
            continue;
        }
        entries[key] = {value, lineno};
    }

    auto where = [&](const std::string& key) { return "line " + std::to_string(entries[key].second) + ": "; };
    auto get_double = [&](const std::string& key, double& out) {
        if (!entries.count(key)) return;
        if (!parse_double(entries[key].first, out) || !std::isfinite(out))
            problems.push_back(where(key) + key + " must be a finite number, got '" + entries[key].first + "'");
    };
    auto get_int = [&](const std::string& key, int& out) {
        if (!entries.count(key)) return;
        if (!parse_int(entries[key].first, out))
            problems.push_back(where(key) + key + " must be an integer, got '" + entries[key].first + "'");
    };
    auto get_choice = [&](const std::string& key, std::string& out, std::initializer_list<const char*> allowed) {
        if (!entries.count(key)) return;
        const std::string& v = entries[key].first;
        for (const char* a : allowed)
            if (v == a) {
                out = v;
                return;
            }
        std::string list;
        for (const char* a : allowed) list += std::string(list.empty() ? "" : " | ") + a;
        problems.push_back(where(key) + key + " must be one of " + list + ", got '" + v + "'");
    };

    get_choice("domain", c.domain, {"unit-square", "l-shape", "polygon"});
    get_int("resolution", c.resolution);
    get_choice("boundary", c.boundary, {"zero", "sine-slope", "sine-height", "affine", "file"});
    get_double("amplitude", c.amplitude);
    if (entries.count("boundary_file")) c.boundary_file = entries["boundary_file"].first;
    get_double("p", c.p);
    get_double("a", c.a);
    get_double("tolerance", c.tolerance);
    get_int("max_iterations", c.max_iterations);
    get_double("damping", c.damping);
    get_choice("initial_guess", c.initial_guess, {"biharmonic", "zero"});
    get_double("blowup_gradient", c.blowup_gradient);
    get_double("blowup_growth", c.blowup_growth);
    get_choice("field", c.field, {"sine", "cubic", "affine", "sphere-cap"});
    get_double("field_amplitude", c.field_amplitude);
    get_double("cap_radius", c.cap_radius);
    get_double("cap_angle", c.cap_angle);
    if (entries.count("output_dir")) c.output_dir = entries["output_dir"].first;

    if (entries.count("vertices")) {
        c.vertices.clear();
        for (const std::string& pair : split(entries["vertices"].first, ';')) {
            std::istringstream ps(pair);
            double x = 0, y = 0;
            std::string rest;
            if (!(ps >> x >> y) || (ps >> rest)) {
                problems.push_back(where("vertices") + "vertex '" + pair + "' must be two numbers 'x y'");
                continue;
            }
            c.vertices.push_back({x, y});
        }
    }
    if (entries.count("levels")) {
        c.levels.clear();
        for (const std::string& v : split(entries["levels"].first, ',')) {
            int n = 0;
            if (!parse_int(v, n)) problems.push_back(where("levels") + "level '" + v + "' must be an integer");
            else c.levels.push_back(n);
        }
    }
    if (entries.count("sweep_epsilons")) {
        c.sweep_epsilons.clear();
        for (const std::string& v : split(entries["sweep_epsilons"].first, ',')) {
            double e = 0;
            if (!parse_double(v, e) || !std::isfinite(e))
                problems.push_back(where("sweep_epsilons") + "amplitude '" + v + "' must be a finite number");
            else c.sweep_epsilons.push_back(e);
        }
    }

    // Range checks.
    if (c.resolution < kMinResolution)
        problems.push_back("resolution " + std::to_string(c.resolution) + " too coarse: need resolution ≥ 16");
    if (!(c.p > 2.0)) problems.push_back("p = " + fmt(c.p) + " outside the admissible range p ∈ (2, ∞)");
    if (!(c.a > 0.0)) problems.push_back("a = " + fmt(c.a) + " must be positive: a ∈ (0, 1 − 2/p)");
    if (c.p > 2.0 && !(c.a < 1.0 - 2.0 / c.p))
        problems.push_back("a = " + fmt(c.a) + " violates a < 1 − 2/p = " + fmt(1.0 - 2.0 / c.p));
    if (!(c.tolerance > 0.0)) problems.push_back("tolerance must be positive");
    if (c.max_iterations < 1) problems.push_back("max_iterations must be at least 1");
    if (!(c.damping > 0.0 && c.damping <= 1.0)) problems.push_back("damping must lie in (0, 1]");
    if (!(c.blowup_gradient > 0.0)) problems.push_back("blowup_gradient must be positive");
    if (!(c.blowup_growth > 1.0)) problems.push_back("blowup_growth must exceed 1");
    if (!(c.cap_radius > 0.0)) problems.push_back("cap_radius must be positive");
    if (!(c.cap_angle > 0.0 && c.cap_angle < 1.5707963267948966)) problems.push_back("cap_angle must lie in (0, pi/2)");
    if (c.domain == "polygon") {
        if (c.vertices.size() < 3) {
            problems.push_back("domain = polygon needs at least 3 vertices");
        } else {
            try {
                (void)Polygon(c.vertices);
            } catch (const ConfigurationError& e) {
                problems.push_back(std::string("vertices: ") + e.what());
            }
        }
    }
    if (c.boundary == "file" && c.boundary_file.empty()) problems.push_back("boundary = file needs boundary_file");
    if (c.levels.size() < 3) problems.push_back("levels needs at least 3 resolutions");
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
        if (c.levels[i] < kMinResolution)
            problems.push_back("levels entry " + std::to_string(c.levels[i]) + " too coarse: need resolution ≥ 16");
        if (i > 0 && c.levels[i] <= c.levels[i - 1]) problems.push_back("levels must be strictly increasing");
    }
    for (std::size_t i = 0; i < c.sweep_epsilons.size(); ++i) {
        if (c.sweep_epsilons[i] < 0.0 || (i > 0 && c.sweep_epsilons[i] <= c.sweep_epsilons[i - 1])) {
            problems.push_back("sweep_epsilons must be nonnegative and strictly increasing");
            break;
        }
    }
    if (c.output_dir.empty()) problems.push_back("output_dir must not be empty");

    if (!problems.empty()) throw ConfigurationError(problems);
    return c;
}

}  // namespace willmore
