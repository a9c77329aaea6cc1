#include "graspkde/ply.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "graspkde/errors.hpp"

namespace graspkde {
namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw DataError(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& tok, const std::string& path, int line) {
    double value = 0.0;
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), last, value);
    if (ec != std::errc{} || ptr != last) fail(path, line, "expected a number, got '" + tok + "'");
    return value;
}

long parse_count(const std::string& tok, const std::string& path, int line) {
    long value = 0;
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), last, value);
    if (ec != std::errc{} || ptr != last || value < 0) fail(path, line, "expected a count, got '" + tok + "'");
    return value;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(std::move(t));
    return toks;
}

bool scalar_float_type(const std::string& t) {
    return t == "float" || t == "float32" || t == "double" || t == "float64";
}

}  // namespace

PointCloud load_cloud(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    PointCloud cloud;
    std::string line;
    int lineno = 0;
    auto next_line = [&] {
        if (!std::getline(in, line)) fail(path, lineno, "unexpected end of file");
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    next_line();
    if (line != "ply") fail(path, lineno, "not a PLY file (missing 'ply' magic)");

    bool have_format = false;
    long vertex_count = -1;
    int prop_count = 0;
    int col[3] = {-1, -1, -1};
    bool in_vertex = false;
    for (;;) {
        next_line();
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "end_header") break;
        if (kw == "format") {
            if (toks.size() < 2 || toks[1] != "ascii") fail(path, lineno, "only ascii format is supported");
            have_format = true;
        } else if (kw == "comment" || kw == "obj_info") {
            if (toks.size() == 5 && toks[1] == "viewpoint")
                for (int a = 0; a < 3; ++a) cloud.viewpoint[a] = parse_number(toks[2 + a], path, lineno);
        } else if (kw == "element") {
            if (toks.size() != 3) fail(path, lineno, "malformed element line");
            if (toks[1] == "vertex") {
                if (vertex_count >= 0) fail(path, lineno, "duplicate vertex element");
                vertex_count = parse_count(toks[2], path, lineno);
                in_vertex = true;
            } else {
                // Rows of trailing elements (faces etc.) sit after the vertex
                // rows and are simply not read. Leading elements would shift
                // the vertex rows, which this reader does not handle.
                if (vertex_count < 0) fail(path, lineno, "vertex must be the first element");
                in_vertex = false;
            }
        } else if (kw == "property") {
            if (!in_vertex) continue;
            if (toks.size() >= 2 && toks[1] == "list") fail(path, lineno, "list property on vertex element");
            if (toks.size() != 3) fail(path, lineno, "malformed property line");
            for (int a = 0; a < 3; ++a) {
                if (toks[2] != std::string(1, "xyz"[a])) continue;
                if (!scalar_float_type(toks[1])) fail(path, lineno, "coordinate property must be float or double");
                col[a] = prop_count;
            }
            ++prop_count;
        } else {
            fail(path, lineno, "unknown header keyword '" + kw + "'");
        }
    }

    if (!have_format) fail(path, lineno, "missing format line");
    if (vertex_count < 0) fail(path, lineno, "missing vertex element");
    if (vertex_count == 0) fail(path, lineno, "empty cloud");
    if (col[0] < 0 || col[1] < 0 || col[2] < 0) fail(path, lineno, "vertex element lacks x, y, z properties");

    cloud.points.reserve(static_cast<std::size_t>(vertex_count));
    for (long i = 0; i < vertex_count; ++i) {
        next_line();
        auto toks = tokenize(line);
        if (static_cast<int>(toks.size()) < prop_count)
            fail(path, lineno, "expected " + std::to_string(prop_count) + " values");
        Eigen::Vector3d p;
        for (int a = 0; a < 3; ++a) p[a] = parse_number(toks[static_cast<std::size_t>(col[a])], path, lineno);
        if (!p.allFinite()) fail(path, lineno, "non-finite coordinate");
        cloud.points.push_back(p);
    }
    return cloud;
}

void save_cloud(const PointCloud& cloud, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataError("cannot write " + path);
    std::fprintf(f, "ply\nformat ascii 1.0\n");
    std::fprintf(f, "comment viewpoint %.17g %.17g %.17g\n", cloud.viewpoint.x(), cloud.viewpoint.y(),
                 cloud.viewpoint.z());
    std::fprintf(f, "element vertex %zu\n", cloud.points.size());
    std::fprintf(f, "property double x\nproperty double y\nproperty double z\n");
    std::fprintf(f, "end_header\n");
    for (const auto& p : cloud.points) std::fprintf(f, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    std::fclose(f);
}

}  // namespace graspkde
