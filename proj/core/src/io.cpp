#include "willmore/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

using File = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

File open_for_write(const std::string& path) {
    File f(std::fopen(path.c_str(), "w"), &std::fclose);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

bool parse_row(const std::string& line, double (&v)[3], std::string& why) {
    std::vector<std::string> cols;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cols.push_back(cell);
    if (cols.size() != 3) {
        why = "expected 3 columns, found " + std::to_string(cols.size());
        return false;
    }
    for (int k = 0; k < 3; ++k) {
        const std::string& s = cols[static_cast<std::size_t>(k)];
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        if (b == std::string::npos) {
            why = "empty column " + std::to_string(k + 1);
            return false;
        }
        const std::string t = s.substr(b, e - b + 1);
        char* end = nullptr;
        v[k] = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size() || !std::isfinite(v[k])) {
            why = "column " + std::to_string(k + 1) + " is not a finite number: '" + t + "'";
            return false;
        }
    }
    return true;
}

}  // namespace

void export_field(const ScalarField& field, const std::string& path, const std::string& name) {
    File f = open_for_write(path);
    std::fprintf(f.get(), "x,y,%s\n", name.c_str());
    const GridDomain& d = field.domain();
    for (int n = 0; n < d.node_count(); ++n) {
        if (!d.active(n) || !field.defined(n)) continue;
        const Point p = d.point(n);
        std::fprintf(f.get(), "%.17g,%.17g,%.17g\n", p.x, p.y, field[n]);
    }
    if (std::ferror(f.get())) throw IoError("write to '" + path + "' failed");
}

void export_boundary(const BoundaryData& bc, const std::string& path) {
    File f = open_for_write(path);
    std::fprintf(f.get(), "arclength,g0,g1\n");
    const auto g0 = bc.g0();
    const auto g1 = bc.g1();
    for (std::size_t k = 0; k < bc.size(); ++k)
        std::fprintf(f.get(), "%.17g,%.17g,%.17g\n", bc.sample(k).arclength, g0[k], g1[k]);
    if (std::ferror(f.get())) throw IoError("write to '" + path + "' failed");
}

BoundaryData parse_boundary_csv(const std::string& text, DomainPtr domain, std::vector<std::string>* warnings) {
    std::vector<double> s, g0, g1;
    std::istringstream is(text);
    std::string line;
    int row = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        double v[3];
        std::string why;
        if (!parse_row(line, v, why)) {
            if (row == 1 && s.empty()) continue;  // header
            throw IoError("row " + std::to_string(row) + ": " + why);
        }
        if (!s.empty() && !(v[0] > s.back()))
            throw IoError("row " + std::to_string(row) + ": arclength " + std::to_string(v[0]) +
                          " is not increasing");
        s.push_back(v[0]);
        g0.push_back(v[1]);
        g1.push_back(v[2]);
    }
    if (s.size() < 2) throw IoError("boundary file needs at least 2 data rows");

    const auto& trace = domain->trace();
    const double length = domain->perimeter();
    if (s.size() == trace.size()) return BoundaryData(std::move(domain), std::move(g0), std::move(g1));

    if (!(s.back() - s.front() < length))
        throw IoError("arclength span " + std::to_string(s.back() - s.front()) + " exceeds the perimeter " +
                      std::to_string(length));
    if (warnings)
        warnings->push_back("boundary file has " + std::to_string(s.size()) + " samples, grid trace has " +
                            std::to_string(trace.size()) + "; resampled by periodic linear interpolation");
    // Periodic extension: the last sample connects back to the first at s0 + L.
    std::vector<double> ss = s, a0 = g0, a1 = g1;
    ss.push_back(s.front() + length);
    a0.push_back(g0.front());
    a1.push_back(g1.front());
    std::vector<double> r0(trace.size()), r1(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        double t = trace[k].arclength;
        t = s.front() + std::fmod(std::fmod(t - s.front(), length) + length, length);
        const auto it = std::upper_bound(ss.begin(), ss.end(), t);
        const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - ss.begin()), ss.size() - 1);
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        const double w = ss[hi] > ss[lo] ? (t - ss[lo]) / (ss[hi] - ss[lo]) : 0.0;
        r0[k] = (1.0 - w) * a0[lo] + w * a0[hi];
        r1[k] = (1.0 - w) * a1[lo] + w * a1[hi];
    }
    return BoundaryData(std::move(domain), std::move(r0), std::move(r1));
}

BoundaryData import_boundary(const std::string& path, DomainPtr domain, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open boundary file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_boundary_csv(buf.str(), std::move(domain), warnings);
}

}  // namespace willmore
