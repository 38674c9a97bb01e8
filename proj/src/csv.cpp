#include "ckls/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ckls {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw InvalidParameter("not a number: '" + text + "'");
    }
    return v;
}

void write_path_csv(const SamplePath& path, std::ostream& out) {
    out << "t,r\n";
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        out << format_double(path.time_at(k)) << ',' << format_double(path.values[k])
            << '\n';
    }
}

void write_path_csv(const SamplePath& path, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw Error("cannot open '" + filename + "' for writing");
    write_path_csv(path, out);
    if (!out) throw Error("write to '" + filename + "' failed");
}

SamplePath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || (line != "t,r" && line != "t,r\r")) {
        throw InvalidParameter("path CSV must start with header 't,r'");
    }
    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw InvalidParameter("path CSV row without comma: '" + line + "'");
        }
        times.push_back(parse_double(line.substr(0, comma)));
        values.push_back(parse_double(line.substr(comma + 1)));
    }
    if (values.size() < 2) throw InvalidParameter("path CSV needs at least 2 rows");

    const double t0 = times.front();
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw InvalidParameter("path CSV times must be strictly increasing");
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expected = t0 + static_cast<double>(k) * dt;
        const double tol = 1e-9 * std::max(1.0, std::abs(expected));
        if (std::abs(times[k] - expected) > tol) {
            throw InvalidParameter("path CSV time grid is not uniform at row " +
                                   std::to_string(k + 2));
        }
    }
    SamplePath path{t0, dt, std::move(values)};
    validate_path(path);
    return path;
}

SamplePath read_path_csv(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw Error("cannot open '" + filename + "' for reading");
    return read_path_csv(in);
}

} // namespace ckls
