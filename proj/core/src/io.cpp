#include "conewalk/io.hpp"

#include <array>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "conewalk/errors.hpp"

namespace conewalk {

namespace {

void put(std::ostream& out, double x) {
    out << std::setprecision(17) << x;
}

struct Table {
    std::vector<std::array<double, 3>> rows;
    int cols = 0;
};

Table read_table(std::istream& in, const char* expected_header) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidPath("empty path file");
    if (line != expected_header) {
        throw InvalidPath("unexpected CSV header: " + line);
    }
    Table t;
    t.cols = 1;
    for (char c : std::string(expected_header)) {
        if (c == ',') ++t.cols;
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 3> row{0.0, 0.0, 0.0};
        std::stringstream ss(line);
        std::string cell;
        for (int c = 0; c < t.cols; ++c) {
            if (!std::getline(ss, cell, ',')) {
                throw InvalidPath("short CSV row: " + line);
            }
            row[c] = std::stod(cell);
        }
        t.rows.push_back(row);
    }
    if (t.rows.size() < 2) throw InvalidPath("path file has fewer than two nodes");
    return t;
}

TimeGrid grid_of(const Table& t) {
    const double t0 = t.rows.front()[0];
    const double T = t.rows.back()[0] - t0;
    return TimeGrid(t0, T, static_cast<int>(t.rows.size()) - 1);
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string num(double x) {
    std::ostringstream ss;
    ss << std::setprecision(17) << x;
    return ss.str();
}

}  // namespace

void write_csv(std::ostream& out, const Path1D& path) {
    out << "tau,value\n";
    for (int i = 0; i <= path.grid.N; ++i) {
        put(out, path.grid.node(i));
        out << ',';
        put(out, path.values[i]);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const Path2D& path) {
    out << "tau,x0,x1\n";
    for (int i = 0; i <= path.grid.N; ++i) {
        put(out, path.grid.node(i));
        out << ',';
        put(out, path.x0[i]);
        out << ',';
        put(out, path.x1[i]);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const ConePath& path) {
    write_csv(out, path.path);
}

void write_csv(std::ostream& out, const Diffeo& phi) {
    out << "tau,phi\n";
    const auto& g = phi.grid();
    for (int i = 0; i <= g.N; ++i) {
        put(out, g.node(i));
        out << ',';
        put(out, phi.forward_nodes()[i]);
        out << '\n';
    }
}

Path1D read_path_1d(std::istream& in) {
    Table t = read_table(in, "tau,value");
    std::vector<double> v(t.rows.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.rows[i][1];
    return Path1D(grid_of(t), std::move(v));
}

Path2D read_path_2d(std::istream& in) {
    Table t = read_table(in, "tau,x0,x1");
    std::vector<double> a(t.rows.size()), b(t.rows.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = t.rows[i][1];
        b[i] = t.rows[i][2];
    }
    return Path2D(grid_of(t), std::move(a), std::move(b));
}

ConePath read_cone_path(std::istream& in) {
    return ConePath(read_path_2d(in));
}

std::uint64_t config_hash(const std::string& canonical) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string report_to_json(const McReport& report, std::uint64_t cfg_hash) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"name\": \"" << json_escape(report.name) << "\",\n";
    out << "  \"estimate\": " << num(report.estimate) << ",\n";
    out << "  \"std_error\": " << num(report.std_error) << ",\n";
    out << "  \"n_samples\": " << report.n_samples << ",\n";
    out << "  \"n_rejected\": " << report.n_rejected << ",\n";
    out << "  \"seed\": " << report.seed << ",\n";
    out << "  \"pass\": " << (report.pass ? "true" : "false") << ",\n";
    out << "  \"config_hash\": \"" << std::hex << cfg_hash << std::dec << "\",\n";
    out << "  \"details\": {";
    bool first = true;
    for (const auto& [k, v] : report.metadata) {
        if (!first) out << ",";
        first = false;
        out << "\n    \"" << json_escape(k) << "\": \"" << json_escape(v) << "\"";
    }
    if (!first) out << "\n  ";
    out << "}\n}\n";
    return out.str();
}

std::string geodesic_to_json(const GeodesicResult& result, std::uint64_t cfg_hash) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"distance\": " << num(result.distance) << ",\n";
    out << "  \"case\": " << result.geodesic_case << ",\n";
    out << "  \"config_hash\": \"" << std::hex << cfg_hash << std::dec << "\",\n";
    out << "  \"polyline\": [";
    for (std::size_t i = 0; i < result.polyline.size(); ++i) {
        const auto& v = result.polyline[i];
        if (i) out << ",";
        out << "\n    {\"r\": " << num(v.r) << ", \"theta\": " << num(v.theta)
            << ", \"sheet\": " << v.sheet << ", \"origin\": "
            << (v.is_origin ? "true" : "false") << "}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

}  // namespace conewalk
