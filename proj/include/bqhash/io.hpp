#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "bqhash/core.hpp"

namespace bqhash {

enum class MatrixFormat { Csv, RawF32 };

/// Input data set. CSV holds one sample per line (D comma-separated reals).
/// raw-f32 is a 16-byte header -- magic "BHSH", u32 D, u32 n, u32 reserved
/// (must be 0), all little-endian -- followed by D*n little-endian float32
/// values in column-major order (sample by sample).
struct DatasetFile {
  std::filesystem::path path;
  MatrixFormat format = MatrixFormat::Csv;
  std::optional<std::size_t> dims;     // expected D
  std::optional<std::size_t> samples;  // expected n
};

/// Guesses the format from the extension: ".csv" is CSV, anything else raw.
MatrixFormat format_from_path(const std::filesystem::path& path);

/// Returns the D x n matrix with samples in columns.
DenseMatrix load_matrix(const DatasetFile& file);

void save_matrix_csv(const std::filesystem::path& path, const DenseMatrix& m);
void save_matrix_raw(const std::filesystem::path& path, const DenseMatrix& m);

/// One integer label per line.
std::vector<int> load_labels(const std::filesystem::path& path);
void save_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// Codes as CSV, one sample per line with L comma-separated +-1 entries.
void save_codes_csv(const std::filesystem::path& path, const CodeMatrix& z);
CodeMatrix load_codes_csv(const std::filesystem::path& path);

/// Scales every column to unit l2 norm. Zero columns are an error.
DenseMatrix normalize_columns(const DenseMatrix& x);

}  // namespace bqhash
