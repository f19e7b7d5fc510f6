#include "bqhash/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace bqhash {

namespace {

constexpr std::array<char, 4> kMagic{'B', 'H', 'S', 'H'};
constexpr std::size_t kHeaderBytes = 16;

std::string describe(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ifstream in(path, std::ios::in | mode);
  if (!in) throw IoError("cannot open " + describe(path) + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw IoError("cannot open " + describe(path) + " for writing");
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
std::vector<T> parse_fields(std::string_view line, const std::filesystem::path& path,
                            std::size_t line_no) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    const std::string_view field =
        trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    T value{};
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
      throw IoError(describe(path) + " line " + std::to_string(line_no) +
                    ": cannot parse field '" + std::string(field) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(value)) {
        throw IoError(describe(path) + " line " + std::to_string(line_no) +
                      ": non-finite value '" + std::string(field) + "'");
      }
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Rows of comma-separated fields, skipping blank lines.
template <typename T>
std::vector<std::vector<T>> read_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<T>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    rows.push_back(parse_fields<T>(body, path, line_no));
    if (rows.size() > 1 && rows.back().size() != rows.front().size()) {
      throw IoError(describe(path) + " line " + std::to_string(line_no) + ": shape mismatch, " +
                    std::to_string(rows.back().size()) + " fields where " +
                    std::to_string(rows.front().size()) + " expected");
    }
  }
  return rows;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void check_shape(const DatasetFile& file, std::size_t dims, std::size_t samples) {
  if ((file.dims && *file.dims != dims) || (file.samples && *file.samples != samples)) {
    throw IoError(describe(file.path) + ": shape mismatch, parsed " + std::to_string(dims) +
                  " x " + std::to_string(samples) + " but expected " +
                  (file.dims ? std::to_string(*file.dims) : std::string("?")) + " x " +
                  (file.samples ? std::to_string(*file.samples) : std::string("?")));
  }
}

}  // namespace

MatrixFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::Csv : MatrixFormat::RawF32;
}

DenseMatrix load_matrix(const DatasetFile& file) {
  if (file.format == MatrixFormat::Csv) {
    const auto rows = read_csv<double>(file.path);
    if (rows.empty()) throw IoError(describe(file.path) + ": no samples");
    const std::size_t n = rows.size();
    const std::size_t dims = rows.front().size();
    check_shape(file, dims, n);
    std::vector<double> data(dims * n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t d = 0; d < dims; ++d) data[d * n + j] = rows[j][d];
    return DenseMatrix(dims, n, std::move(data));
  }

  std::ifstream in = open_in(file.path, std::ios::binary);
  std::array<unsigned char, kHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), kHeaderBytes);
  if (in.gcount() != static_cast<std::streamsize>(kHeaderBytes)) {
    throw IoError(describe(file.path) + ": truncated header");
  }
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw IoError(describe(file.path) + ": bad magic");
  }
  const std::size_t dims = get_u32(header.data() + 4);
  const std::size_t n = get_u32(header.data() + 8);
  if (get_u32(header.data() + 12) != 0) {
    throw IoError(describe(file.path) + ": malformed header, reserved field is not zero");
  }
  check_shape(file, dims, n);

  std::vector<unsigned char> payload(dims * n * 4);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (in.gcount() != static_cast<std::streamsize>(payload.size())) {
    throw IoError(describe(file.path) + ": shape mismatch, payload shorter than " +
                  std::to_string(dims) + " x " + std::to_string(n) + " floats");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError(describe(file.path) + ": shape mismatch, trailing bytes after payload");
  }
  std::vector<double> data(dims * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t d = 0; d < dims; ++d) {
      const float v = std::bit_cast<float>(get_u32(payload.data() + 4 * (j * dims + d)));
      if (!std::isfinite(v)) {
        throw IoError(describe(file.path) + ": non-finite value at sample " + std::to_string(j) +
                      ", dimension " + std::to_string(d));
      }
      data[d * n + j] = v;
    }
  }
  return DenseMatrix(dims, n, std::move(data));
}

void save_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream out = open_out(path);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t d = 0; d < m.rows(); ++d) {
      if (d) out << ',';
      out << format_double(m(d, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + describe(path));
}

void save_matrix_raw(const std::filesystem::path& path, const DenseMatrix& m) {
  if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) {
    throw IoError("save_matrix_raw: matrix too large for the raw header");
  }
  std::ofstream out = open_out(path, std::ios::binary);
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  put_u32(out, 0);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t d = 0; d < m.rows(); ++d)
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(m(d, j))));
  if (!out) throw IoError("write failed for " + describe(path));
}

std::vector<int> load_labels(const std::filesystem::path& path) {
  const auto rows = read_csv<int>(path);
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 1) throw IoError(describe(path) + ": expected one label per line");
    labels.push_back(r.front());
  }
  if (labels.empty()) throw IoError(describe(path) + ": no labels");
  return labels;
}

void save_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::ofstream out = open_out(path);
  for (int v : labels) out << v << '\n';
  if (!out) throw IoError("write failed for " + describe(path));
}

void save_codes_csv(const std::filesystem::path& path, const CodeMatrix& z) {
  std::ofstream out = open_out(path, std::ios::binary);
  for (std::size_t j = 0; j < z.samples(); ++j) {
    for (std::size_t k = 0; k < z.bits(); ++k) {
      if (k) out << ',';
      out << (z(k, j) > 0 ? "1" : "-1");
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + describe(path));
}

CodeMatrix load_codes_csv(const std::filesystem::path& path) {
  const auto rows = read_csv<int>(path);
  if (rows.empty()) throw IoError(describe(path) + ": no codes");
  const std::size_t n = rows.size();
  const std::size_t bits = rows.front().size();
  std::vector<std::int8_t> codes(bits * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < bits; ++k) {
      const int v = rows[j][k];
      if (v != 1 && v != -1) {
        throw IoError(describe(path) + ": code entry on line " + std::to_string(j + 1) +
                      " is not +-1");
      }
      codes[k * n + j] = static_cast<std::int8_t>(v);
    }
  }
  return CodeMatrix(bits, n, std::move(codes));
}

DenseMatrix normalize_columns(const DenseMatrix& x) {
  std::vector<double> d(x.data().begin(), x.data().end());
  const std::size_t n = x.cols();
  for (std::size_t j = 0; j < n; ++j) {
    double sq = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) sq += x(r, j) * x(r, j);
    if (sq == 0.0) {
      throw PreconditionError("normalize_columns: column " + std::to_string(j) + " is zero");
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t r = 0; r < x.rows(); ++r) d[r * n + j] *= inv;
  }
  return DenseMatrix(x.rows(), n, std::move(d));
}

}  // namespace bqhash
