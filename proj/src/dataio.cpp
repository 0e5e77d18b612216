#include "gopc/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace gopc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Tokens separated by any run of whitespace and/or commas.
std::vector<std::string_view> split_loose(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

double parse_real(std::string_view token, std::size_t line_no) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw InvalidInput(at_line(line_no) + "non-numeric cell '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw InvalidInput(at_line(line_no) + "non-finite value '" + std::string(token) + "'");
  }
  return value;
}

int parse_int(std::string_view token, std::size_t line_no) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw InvalidInput(at_line(line_no) + "invalid integer label '" + std::string(token) +
                       "'");
  }
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void check_written(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

PointSet<double> parse_points(std::istream& in, TextFormat format, bool has_labels) {
  const char sep = format == TextFormat::csv ? ',' : '\t';
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, sep);
    if (rows.empty()) {
      width = cells.size();
      if (has_labels && width < 2) {
        throw InvalidInput(at_line(line_no) + "need at least one coordinate and a label");
      }
    } else if (cells.size() != width) {
      throw InvalidInput(at_line(line_no) + "ragged row: expected " + std::to_string(width) +
                         " columns, found " + std::to_string(cells.size()));
    }
    const std::size_t coords = has_labels ? width - 1 : width;
    std::vector<double> row(coords);
    for (std::size_t c = 0; c < coords; ++c) row[c] = parse_real(cells[c], line_no);
    if (has_labels) labels.push_back(parse_int(cells.back(), line_no));
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read failure");
  if (rows.empty()) throw InvalidInput("empty file: no data rows");

  PointSet<double> ps;
  const auto n = static_cast<Index>(rows.size());
  const auto d = static_cast<Index>(rows.front().size());
  ps.points.resize(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < d; ++c) ps.points(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  }
  if (has_labels) ps.labels = std::move(labels);
  return ps;
}

PointSet<double> load_points(const std::filesystem::path& path, TextFormat format,
                             bool has_labels) {
  auto in = open_in(path);
  try {
    return parse_points(in, format, has_labels);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

DistanceMatrix<double> parse_matrix(std::istream& in, Mode mode, bool strict_symmetry) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cells = split_loose(line);
    if (cells.empty()) continue;
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto cell : cells) {
      const double v = parse_real(cell, line_no);
      if (mode == Mode::dissimilarity && v < 0) {
        throw InvalidInput(at_line(line_no) + "negative entry in dissimilarity matrix");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput(at_line(line_no) + "ragged row: expected " +
                         std::to_string(rows.front().size()) + " columns, found " +
                         std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read failure");
  if (rows.empty()) throw InvalidInput("empty file: no data rows");
  validate_square(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));

  const auto n = static_cast<Index>(rows.size());
  DistanceMatrix<double> dm;
  dm.mode = mode;
  dm.values.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& ri = rows[static_cast<std::size_t>(i)];
    for (Index j = i; j < n; ++j) {
      const double a = ri[static_cast<std::size_t>(j)];
      const double b = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (strict_symmetry && std::abs(a - b) > 1e-9) {
        throw InvalidInput("asymmetric entries at (" + std::to_string(i) + ", " +
                           std::to_string(j) + "): " + format_real(a) + " vs " + format_real(b));
      }
      const double v = a == b ? a : (a + b) / 2;
      dm.values(i, j) = v;
      dm.values(j, i) = v;
    }
    if (mode == Mode::dissimilarity) dm.values(i, i) = 0;
  }
  return dm;
}

DistanceMatrix<double> load_matrix(const std::filesystem::path& path, Mode mode,
                                   bool strict_symmetry) {
  auto in = open_in(path);
  try {
    return parse_matrix(in, mode, strict_symmetry);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

Partition parse_labels(std::istream& in) {
  Partition labels;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() == 1) {
      labels.push_back(parse_int(cells[0], line_no));
    } else if (cells.size() == 3) {
      labels.push_back(parse_int(cells[1], line_no));
    } else {
      throw InvalidInput(at_line(line_no) + "expected 'label' or 'index,label,noise'");
    }
  }
  if (in.bad()) throw IoError("read failure");
  if (labels.empty()) throw InvalidInput("empty file: no labels");
  return labels;
}

Partition load_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return parse_labels(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_partition(std::ostream& out, const Partition& labels,
                     const std::vector<bool>& noise_flags) {
  if (labels.empty()) throw InvalidInput("partition must contain at least one object");
  if (!noise_flags.empty() && noise_flags.size() != labels.size()) {
    throw InvalidInput("noise flags and labels differ in length");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool noise = !noise_flags.empty() && noise_flags[i];
    out << i << ',' << labels[i] << ',' << (noise ? 1 : 0) << '\n';
  }
}

void write_partition(const std::filesystem::path& path, const Partition& labels,
                     const std::vector<bool>& noise_flags) {
  if (labels.empty()) throw InvalidInput("partition must contain at least one object");
  auto out = open_out(path);
  write_partition(out, labels, noise_flags);
  check_written(out, path);
}

void write_matrix(std::ostream& out, const Matrix<double>& values) {
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_real(values(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const std::filesystem::path& path, const Matrix<double>& values) {
  auto out = open_out(path);
  write_matrix(out, values);
  check_written(out, path);
}

void write_points(std::ostream& out, const PointSet<double>& ps) {
  for (Index i = 0; i < ps.size(); ++i) {
    for (Index c = 0; c < ps.dim(); ++c) {
      if (c > 0) out << ',';
      out << format_real(ps.points(i, c));
    }
    if (ps.labels) out << ',' << (*ps.labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

void write_points(const std::filesystem::path& path, const PointSet<double>& ps) {
  auto out = open_out(path);
  write_points(out, ps);
  check_written(out, path);
}

}  // namespace gopc
