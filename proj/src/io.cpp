#include "mobimpute/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mobimpute::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') { fields.push_back(cur); cur.clear(); }
        else if (c != '\r' && c != '\n') cur.push_back(c);
    }
    fields.push_back(cur);
    return fields;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ISO-8601 `YYYY-MM-DD[T ]hh:mm:ss[Z]` or plain epoch seconds.
double parse_timestamp(const std::string& s) {
    int yy, mo, dd, hh, mi, ss;
    if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d", &yy, &mo, &dd, &hh, &mi, &ss) == 6 ||
        std::sscanf(s.c_str(), "%d-%d-%d %d:%d:%d", &yy, &mo, &dd, &hh, &mi, &ss) == 6) {
        return static_cast<double>(civil_to_epoch(yy, mo, dd, hh, mi, ss));
    }
    return std::stod(s);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::vector<GpsRecord> parse_gps_csv(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) return {};
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "timestamp") {
        throw std::runtime_error("GPS CSV must start with a timestamp,latitude,longitude header");
    }
    const bool has_accuracy = header.size() > 3;

    std::vector<GpsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() < 3) continue;
        try {
            GpsRecord r;
            r.t = parse_timestamp(f[0]);
            r.lat = std::stod(f[1]);
            r.lon = std::stod(f[2]);
            if (has_accuracy && f.size() > 3 && !f[3].empty()) r.accuracy = std::stod(f[3]);
            if (r.lat < -90.0 || r.lat > 90.0 || r.lon < -180.0 || r.lon > 180.0) continue;
            out.push_back(r);
        } catch (const std::exception&) {
            continue;
        }
    }
    return out;
}

std::vector<GpsRecord> read_gps_csv(const std::filesystem::path& path) {
    return parse_gps_csv(read_file(path));
}

void write_gps_csv(const std::filesystem::path& path, std::span<const GpsRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "timestamp,latitude,longitude,accuracy\n";
    for (const auto& r : records) {
        out << format_double(r.t) << ',' << format_double(r.lat) << ','
            << format_double(r.lon) << ',' << (r.accuracy >= 0 ? format_double(r.accuracy) : "")
            << '\n';
    }
}

void write_event_csv(const std::filesystem::path& path, std::span<const Event> events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "kind,x,y,t,dx,dy,dt,observed\n";
    for (const auto& e : events) {
        out << (e.kind == EventKind::Flight ? "flight" : "pause") << ','
            << format_double(e.x) << ',' << format_double(e.y) << ','
            << format_double(e.t) << ',' << format_double(e.dx) << ','
            << format_double(e.dy) << ',' << format_double(e.dt) << ','
            << (e.observed ? 1 : 0) << '\n';
    }
}

std::vector<Event> read_event_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::getline(in, line);  // header
    std::vector<Event> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() < 8) continue;
        Event e;
        e.kind = f[0] == "pause" ? EventKind::Pause : EventKind::Flight;
        e.x = std::stod(f[1]);
        e.y = std::stod(f[2]);
        e.t = std::stod(f[3]);
        e.dx = std::stod(f[4]);
        e.dy = std::stod(f[5]);
        e.dt = std::stod(f[6]);
        e.observed = f[7] == "1";
        out.push_back(e);
    }
    return out;
}

void write_feature_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, DailyFeatureVector>>& rows,
                       bool with_intervals) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const auto& names = DailyFeatureVector::measure_names();
    out << "subject_day";
    for (const auto& n : names) {
        out << ',' << n;
        if (with_intervals) out << ',' << n << "_lo," << n << "_hi";
    }
    out << '\n';
    for (const auto& [key, v] : rows) {
        out << key;
        const auto vals = v.as_vector();
        for (std::size_t i = 0; i < vals.size(); ++i) {
            out << ',' << format_double(vals[i]);
            if (with_intervals) {
                const double lo = i < v.lo.size() ? v.lo[i] : vals[i];
                const double hi = i < v.hi.size() ? v.hi[i] : vals[i];
                out << ',' << format_double(lo) << ',' << format_double(hi);
            }
        }
        out << '\n';
    }
}

void write_error_table_csv(const std::filesystem::path& path, const ErrorTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "measure";
    for (const auto& m : table.methods) out << ',' << m;
    out << '\n';
    for (std::size_t r = 0; r < table.measures.size(); ++r) {
        out << table.measures[r];
        for (std::size_t c = 0; c < table.methods.size(); ++c) {
            out << ',' << format_double(table.cells[r][c]);
            if (table.flagged[r][c]) out << "(abs)";
        }
        out << '\n';
    }
    out << "AvgAbsError";
    for (double v : table.mean_abs_error) out << ',' << format_double(v);
    out << '\n';
}

void write_error_table_json(const std::filesystem::path& path, const ErrorTable& table) {
    nlohmann::json j;
    j["measures"] = table.measures;
    j["methods"] = table.methods;
    j["cells"] = table.cells;
    j["flagged"] = table.flagged;
    j["mean_abs_error"] = table.mean_abs_error;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<std::pair<std::string, std::vector<GpsRecord>>> read_plt_tree(
    const std::filesystem::path& root) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".plt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<std::pair<std::string, std::vector<GpsRecord>>> out;
    for (const auto& f : files) {
        auto parsed = parse_plt(read_file(f));
        out.emplace_back(f.lexically_relative(root).string(), std::move(parsed.records));
    }
    return out;
}

}  // namespace mobimpute::io
