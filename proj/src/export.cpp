#include "stoplab/export.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace stoplab {

namespace {

void append_number(std::string& out, double v) {
    if (std::isinf(v)) {
        out += v > 0 ? "+inf" : "-inf";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

std::string surface_csv(const ValueSurface& s) {
    std::string out = "t,x,v,g,exercise\n";
    out.reserve(out.size() + s.v.rows() * s.v.cols() * 72);
    for (std::size_t k = 0; k < s.v.rows(); ++k) {
        for (std::size_t j = 0; j < s.v.cols(); ++j) {
            append_number(out, s.grid.t[k]);
            out += ',';
            append_number(out, s.grid.x[j]);
            out += ',';
            append_number(out, s.v(k, j));
            out += ',';
            append_number(out, s.obstacle(k, j));
            out += s.exercise(k, j) ? ",1\n" : ",0\n";
        }
    }
    return out;
}

std::string boundary_csv(const Boundary& b) {
    std::string out = "t,b\n";
    for (std::size_t k = 0; k < b.t.size(); ++k) {
        append_number(out, b.t[k]);
        out += ',';
        append_number(out, b.b[k]);
        out += '\n';
    }
    return out;
}

std::string write_text_file(const std::string& dir, const std::string& name, const std::string& text) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + dir + "': " + ec.message());
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    out << text;
    out.close();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
    return path;
}

std::vector<std::string> export_surface(const ValueSurface& s, const Boundary& b, const std::string& dir) {
    return {write_text_file(dir, "surface.csv", surface_csv(s)),
            write_text_file(dir, "boundary.csv", boundary_csv(b))};
}

}  // namespace stoplab
