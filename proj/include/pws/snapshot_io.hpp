#pragma once

// Output plumbing: SLDN1 binary field snapshots, CSV series and atomic writes.
//
// SLDN1 layout (little-endian): "SLDN1", u32 dim, u32 points per axis,
// f64 length per axis, f64 time, then row-major samples as interleaved f64
// (re, im).

#include <filesystem>
#include <string>
#include <vector>

#include "pws/grid.hpp"

namespace pws {

// Write to a temporary sibling file, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

std::string encode_snapshot(const ComplexField& field);
ComplexField decode_snapshot(const std::string& bytes);
void write_snapshot(const ComplexField& field, const std::filesystem::path& path);
ComplexField read_snapshot(const std::filesystem::path& path);

// Time series with a header row of names and a '#'-prefixed units row.
// Numbers are printed with 17 significant digits, so output is a pure
// function of the values.
class CsvSeries {
 public:
  CsvSeries(std::vector<std::string> names, std::vector<std::string> units);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_.size(); }
  std::string render() const;

 private:
  std::vector<std::string> names_, units_;
  std::vector<std::vector<double>> rows_;
};

std::string format_double(double v);

}  // namespace pws
