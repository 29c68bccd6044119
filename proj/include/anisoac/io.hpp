#pragma once
// File output: field snapshots (plain text, 17 significant digits, exact
// round trip), optional legacy-VTK export, CSV helpers and the run manifest.
// Every file is written to a temporary name and renamed into place.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisoac/mesh.hpp"

namespace anisoac {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw IoError("short write to '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

inline std::string format_field_snapshot(const NodalField& field, int n_div, double t) {
    std::ostringstream out;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", t);
    out << "aniso-ac field n_div=" << n_div << " t=" << buf << "\n";
    for (double v : field) {
        std::snprintf(buf, sizeof(buf), "%.16e", v);
        out << buf << "\n";
    }
    return out.str();
}

inline void write_field_snapshot(const std::filesystem::path& path, const NodalField& field,
                                 int n_div, double t) {
    const std::size_t expected = static_cast<std::size_t>(n_div + 1) * (n_div + 1);
    if (field.size() != expected) throw IoError("field size does not match n_div");
    write_file_atomic(path, format_field_snapshot(field, n_div, t));
}

struct FieldSnapshot {
    NodalField field;
    int n_div = 0;
    double t = 0.0;
};

inline FieldSnapshot read_field_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string header;
    if (!std::getline(in, header)) throw IoError("empty snapshot file");
    std::istringstream hs(header);
    std::string word, kind, item;
    hs >> word >> kind;
    if (word != "aniso-ac" || kind != "field") throw IoError("not a field snapshot file");
    FieldSnapshot snap;
    while (hs >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (key == "n_div") snap.n_div = std::stoi(val);
        if (key == "t") snap.t = std::stod(val);
    }
    if (snap.n_div < 2) throw IoError("bad n_div in snapshot header");
    const std::size_t expected = static_cast<std::size_t>(snap.n_div + 1) * (snap.n_div + 1);
    snap.field.reserve(expected);
    double v;
    while (in >> v) snap.field.push_back(v);
    if (snap.field.size() != expected)
        throw IoError("snapshot has " + std::to_string(snap.field.size()) + " values, expected " +
                      std::to_string(expected));
    return snap;
}

// legacy VTK STRUCTURED_POINTS, for external visualization only
inline void write_vtk_snapshot(const std::filesystem::path& path, const NodalField& field,
                               int n_div, const std::string& name = "y") {
    const int n = n_div + 1;
    std::ostringstream out;
    out << "# vtk DataFile Version 3.0\nanisoac field\nASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << n << " " << n << " 1\n";
    out << "ORIGIN -1 -1 0\n";
    const double h = 2.0 / n_div;
    out << "SPACING " << h << " " << h << " 1\n";
    out << "POINT_DATA " << field.size() << "\n";
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    char buf[40];
    for (double v : field) {
        std::snprintf(buf, sizeof(buf), "%.16e", v);
        out << buf << "\n";
    }
    write_file_atomic(path, out.str());
}

// rows of preformatted cells; the writer only does layout
inline void write_csv(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    write_file_atomic(path, out.str());
}

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot hash '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

}  // namespace anisoac
