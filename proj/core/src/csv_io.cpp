#include "pathvar/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pathvar/errors.hpp"

namespace pathvar {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t row) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ValidationError("malformed number '" + s + "' in CSV row " + std::to_string(row));
    return v;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

void write_number(std::ostream& out, double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, ptr - buf);
}

}  // namespace

SampledPath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("path CSV is empty");
    const auto header = split(line);
    if (header.size() < 2 || header[0] != "t") throw ValidationError("path CSV header must be t,x1,...,xd");
    const std::size_t d = header.size() - 1;
    std::vector<double> times, values;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (blank(line)) continue;
        const auto fields = split(line);
        if (fields.size() != d + 1)
            throw ValidationError("path CSV row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(d + 1));
        times.push_back(parse_number(fields[0], row));
        for (std::size_t c = 0; c < d; ++c) values.push_back(parse_number(fields[c + 1], row));
    }
    if (times.size() < 2) throw ValidationError("path CSV needs at least two samples");
    const double T = times.back();
    const double step = T / static_cast<double>(times.size() - 1);
    if (!(T > 0.0)) throw ValidationError("path CSV times must increase to a positive horizon");
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - step * static_cast<double>(i)) > 1e-9 * std::max(T, 1.0))
            throw ValidationError("path CSV times must form a uniform grid starting at 0 (row " +
                                  std::to_string(i + 2) + ")");
    return SampledPath(T, d, std::move(values));
}

SampledPath read_path_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open path file " + file);
    return read_path_csv(in);
}

void write_path_csv(std::ostream& out, const SampledPath& path) {
    out << 't';
    for (std::size_t c = 0; c < path.dim(); ++c) out << ",x" << c + 1;
    out << '\n';
    for (std::size_t i = 0; i < path.num_samples(); ++i) {
        write_number(out, path.time(i));
        for (std::size_t c = 0; c < path.dim(); ++c) {
            out << ',';
            write_number(out, path.value(i, c));
        }
        out << '\n';
    }
}

void write_path_csv(const std::string& file, const SampledPath& path) {
    std::ofstream out(file);
    if (!out) throw ValidationError("cannot write " + file);
    write_path_csv(out, path);
}

std::vector<double> read_partition_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || split(line) != std::vector<std::string>{"t"})
        throw ValidationError("partition CSV header must be t");
    std::vector<double> times;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (blank(line)) continue;
        const auto fields = split(line);
        if (fields.size() != 1) throw ValidationError("partition CSV row " + std::to_string(row) + " must have one field");
        times.push_back(parse_number(fields[0], row));
        if (times.size() > 1 && !(times.back() > times[times.size() - 2]))
            throw ValidationError("partition times must be strictly increasing");
    }
    if (times.size() < 2) throw ValidationError("partition CSV needs at least two points");
    return times;
}

void write_partition_csv(std::ostream& out, std::span<const double> times) {
    out << "t\n";
    for (double t : times) {
        write_number(out, t);
        out << '\n';
    }
}

void write_local_time_csv(std::ostream& out, const LocalTimeGrid& lt) {
    out << "x,L\n";
    for (std::size_t i = 0; i < lt.grid.size; ++i) {
        write_number(out, lt.grid.x(i));
        out << ',';
        write_number(out, lt.values[i]);
        out << '\n';
    }
}

}  // namespace pathvar
