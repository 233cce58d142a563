#include "corekit/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace corekit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view field, std::size_t row, std::size_t column) {
    const std::string_view f = trim(field);
    if (f.empty())
        throw ParseError("empty field", row, column);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc{} || ptr != f.data() + f.size())
        throw ParseError("invalid number '" + std::string(f) + "'", row, column);
    return value;
}

// Splits one CSV line into parsed doubles; `row` is 1-based for error reporting.
void parse_row(std::string_view line, std::size_t row, std::vector<double>& out) {
    out.clear();
    std::size_t column = 1;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string_view field =
            comma == std::string_view::npos ? line.substr(start) : line.substr(start, comma - start);
        out.push_back(parse_field(field, row, column));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
        ++column;
    }
}

bool blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

Dataset read_dataset(std::istream& in, const std::string& origin) {
    Matrix points;
    std::string line;
    std::vector<double> fields;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (blank(line)) continue;
        parse_row(line, row, fields);
        if (points.rows() > 0 && fields.size() != points.cols())
            throw ParseError(origin + ": expected " + std::to_string(points.cols()) +
                                 " columns, found " + std::to_string(fields.size()),
                             row, fields.size());
        points.push_row(fields);
    }
    if (points.rows() == 0)
        throw ParseError(origin + ": no data rows", 0, 0);
    return Dataset{std::move(points)};
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    return read_dataset(in, path);
}

void save_dataset(const std::string& path, const Matrix& points) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path, 0, 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        for (std::size_t j = 0; j < points.cols(); ++j) {
            if (j) out << ',';
            out << format_double(points(i, j));
        }
        out << '\n';
    }
}

void save_coreset(const std::string& path, const Coreset& c,
                  std::uint64_t source_n, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path, 0, 0);
    out << "# lwcs v1 n=" << source_n << " m=" << c.points.rows() << " seed=" << seed << '\n';
    for (std::size_t i = 0; i < c.points.rows(); ++i) {
        for (std::size_t j = 0; j < c.points.cols(); ++j)
            out << format_double(c.points(i, j)) << ',';
        out << format_double(c.weights[i]) << '\n';
    }
}

namespace {

std::uint64_t header_field(std::string_view header, std::string_view key) {
    const std::string needle = std::string(key) += '=';
    const std::size_t at = header.find(needle);
    if (at == std::string_view::npos)
        throw ParseError("coreset header missing '" + std::string(key) + "='", 1, 0);
    std::string_view rest = header.substr(at + needle.size());
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc{} || ptr == rest.data())
        throw ParseError("coreset header has invalid '" + std::string(key) + "' value", 1, 0);
    return value;
}

}  // namespace

CoresetFile load_coreset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(path + ": empty file", 0, 0);
    const std::string_view header = trim(line);
    if (header.substr(0, 9) != "# lwcs v1")
        throw ParseError(path + ": missing '# lwcs v1' header", 1, 1);

    CoresetFile file;
    file.source_n = header_field(header, "n");
    file.m = header_field(header, "m");
    file.seed = header_field(header, "seed");

    std::vector<double> fields;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (blank(line)) continue;
        parse_row(line, row, fields);
        if (fields.size() < 2)
            throw ParseError(path + ": coreset row needs coordinates and a weight", row, fields.size());
        if (file.coreset.points.rows() > 0 && fields.size() - 1 != file.coreset.points.cols())
            throw ParseError(path + ": inconsistent column count", row, fields.size());
        file.coreset.weights.push_back(fields.back());
        file.coreset.points.push_row({fields.data(), fields.size() - 1});
    }
    if (file.coreset.points.rows() != file.m)
        throw ParseError(path + ": header says m=" + std::to_string(file.m) + " but found " +
                             std::to_string(file.coreset.points.rows()) + " rows",
                         row, 0);
    return file;
}

void save_centers(const std::string& path, const CenterSet& centers) {
    save_dataset(path, centers.centers);
}

CenterSet load_centers(const std::string& path) {
    return CenterSet{load_dataset(path).points};
}

}  // namespace corekit
