#include "pws/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pws {
namespace {

constexpr char kMagic[5] = {'S', 'L', 'D', 'N', '1'};

template <class U>
void put_le(std::string& out, U v) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

void put_f64(std::string& out, double d) { put_le(out, std::bit_cast<std::uint64_t>(d)); }

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}
  template <class U>
  U get() {
    if (pos_ + sizeof(U) > s_.size()) throw Error("truncated SLDN1 snapshot");
    U v = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) {
      v |= static_cast<U>(static_cast<unsigned char>(s_[pos_ + b])) << (8 * b);
    }
    pos_ += sizeof(U);
    return v;
  }
  double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  void expect_magic() {
    if (s_.size() < 5 || std::memcmp(s_.data(), kMagic, 5) != 0) throw Error("not an SLDN1 snapshot");
    pos_ = 5;
  }
  bool done() const { return pos_ == s_.size(); }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename " + tmp.string() + " to " + path.string());
  }
}

std::string encode_snapshot(const ComplexField& f) {
  std::string out(kMagic, 5);
  const GridSpec& g = f.grid;
  put_le(out, static_cast<std::uint32_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) put_le(out, static_cast<std::uint32_t>(g.n[a]));
  for (int a = 0; a < g.dim; ++a) put_f64(out, g.length[a]);
  put_f64(out, f.time);
  out.reserve(out.size() + 16 * f.size());
  for (const auto& v : f.data) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  return out;
}

ComplexField decode_snapshot(const std::string& bytes) {
  Reader r(bytes);
  r.expect_magic();
  const auto dim = r.get<std::uint32_t>();
  if (dim != 1 && dim != 2) throw Error("SLDN1 snapshot has unsupported dimension " + std::to_string(dim));
  std::array<std::size_t, 2> n{1, 1};
  std::array<double, 2> len{1.0, 1.0};
  for (std::uint32_t a = 0; a < dim; ++a) n[a] = r.get<std::uint32_t>();
  for (std::uint32_t a = 0; a < dim; ++a) len[a] = r.f64();
  const GridSpec g = dim == 1 ? GridSpec::line(n[0], len[0]) : GridSpec::plane(n[0], len[0], n[1], len[1]);
  ComplexField f(g, r.f64());
  for (auto& v : f.data) {
    const double re = r.f64();
    v = {re, r.f64()};
  }
  if (!r.done()) throw Error("trailing bytes in SLDN1 snapshot");
  return f;
}

void write_snapshot(const ComplexField& field, const std::filesystem::path& path) {
  write_file_atomic(path, encode_snapshot(field));
}

ComplexField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_snapshot(ss.str());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvSeries::CsvSeries(std::vector<std::string> names, std::vector<std::string> units)
    : names_(std::move(names)), units_(std::move(units)) {
  if (names_.size() != units_.size()) throw InvalidArgument("CSV names and units differ in length");
}

void CsvSeries::add_row(const std::vector<double>& values) {
  if (values.size() != names_.size()) throw InvalidArgument("CSV row has the wrong number of columns");
  rows_.push_back(values);
}

std::string CsvSeries::render() const {
  std::string out;
  for (std::size_t i = 0; i < names_.size(); ++i) out += (i ? "," : "") + names_[i];
  out += "\n#";
  for (std::size_t i = 0; i < units_.size(); ++i) out += (i ? "," : "") + units_[i];
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace pws
