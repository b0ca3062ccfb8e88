#include "subalign/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "subalign/errors.hpp"

namespace subalign {

namespace {

constexpr std::array<char, 4> kDatasetMagic{'S', 'A', 'D', 'S'};
constexpr std::array<char, 4> kModelMagic{'S', 'A', 'D', 'M'};

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_double(std::string_view text, double& value) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

void check_name(const std::string& name) {
  if (name.find_first_of(",\n\r") != std::string::npos) {
    throw IoError("category name '" + name +
                  "' cannot be written to CSV (contains a comma or newline)");
  }
}

// ---- little-endian binary helpers ----------------------------------------

class ByteWriter {
 public:
  explicit ByteWriter(std::ostream& out) : out_(out) {}

  void raw(const char* data, std::size_t n) {
    out_.write(data, static_cast<std::streamsize>(n));
  }
  template <class UInt>
  void uint(UInt value) {
    std::array<char, sizeof(UInt)> bytes;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
      bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    }
    raw(bytes.data(), bytes.size());
  }
  void f64(double value) { uint(std::bit_cast<std::uint64_t>(value)); }
  void f32(float value) { uint(std::bit_cast<std::uint32_t>(value)); }
  void row_major(const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) f64(m(i, j));
    }
  }
  void vector(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  void names(const std::map<CategoryId, std::string>& table) {
    uint(static_cast<std::uint32_t>(table.size()));
    for (const auto& [id, name] : table) {
      uint(static_cast<std::uint32_t>(id));
      uint(static_cast<std::uint32_t>(name.size()));
      raw(name.data(), name.size());
    }
  }

 private:
  std::ostream& out_;
};

// Bytes left in a seekable stream, or nullopt when the stream cannot seek.
std::optional<std::uint64_t> remaining_bytes(std::istream& in) {
  const auto here = in.tellg();
  if (here < 0) return std::nullopt;
  in.seekg(0, std::ios::end);
  const auto end = in.tellg();
  in.seekg(here);
  if (end < here) return std::nullopt;
  return static_cast<std::uint64_t>(end - here);
}

// Rejects headers whose payload cannot fit in what is left of the stream,
// before any allocation sized by them.
void check_payload(std::istream& in, long double bytes) {
  const auto left = remaining_bytes(in);
  if (left && bytes > static_cast<long double>(*left)) {
    throw TruncatedFile("header announces more data than the file holds");
  }
}

class ByteReader {
 public:
  explicit ByteReader(std::istream& in) : in_(in) {}

  void raw(char* data, std::size_t n) {
    in_.read(data, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw TruncatedFile("unexpected end of file");
    }
  }
  template <class UInt>
  UInt uint() {
    std::array<unsigned char, sizeof(UInt)> bytes;
    raw(reinterpret_cast<char*>(bytes.data()), bytes.size());
    UInt value = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
      value |= static_cast<UInt>(bytes[i]) << (8 * i);
    }
    return value;
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  float f32() { return std::bit_cast<float>(uint<std::uint32_t>()); }
  Matrix row_major(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = f64();
    }
    return m;
  }
  Vector vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = f64();
    return v;
  }
  std::map<CategoryId, std::string> names() {
    const auto count = uint<std::uint32_t>();
    std::map<CategoryId, std::string> table;
    for (std::uint32_t k = 0; k < count; ++k) {
      const auto id = uint<std::uint32_t>();
      const auto length = uint<std::uint32_t>();
      check_payload(in_, static_cast<long double>(length));
      std::string name(length, '\0');
      raw(name.data(), length);
      table.emplace(id, std::move(name));
    }
    return table;
  }
  void magic(const std::array<char, 4>& expected) {
    std::array<char, 4> got;
    raw(got.data(), got.size());
    if (got != expected) {
      throw BadMagic("expected magic '" +
                     std::string(expected.begin(), expected.end()) + "'");
    }
  }

 private:
  std::istream& in_;
};

// Guards against absurd sizes from corrupt headers before allocating.
void check_size(std::uint64_t value, const char* what) {
  if (value > (std::uint64_t{1} << 40)) {
    throw TruncatedFile(std::string("implausible ") + what + " in header");
  }
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buffer;
  const auto [ptr, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

// ---- CSV ------------------------------------------------------------------

Dataset read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header_line = line;
      break;
    }
  }
  if (header_line.empty()) throw ParseError("empty CSV input", 1, 0);
  header = split_commas(header_line);

  std::size_t label_col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "label") {
      if (label_col != header.size()) {
        throw ParseError("header has more than one 'label' column", line_no,
                         j + 1);
      }
      label_col = j;
    }
  }
  if (label_col == header.size()) {
    throw ParseError("header has no 'label' column", line_no, 0);
  }
  const auto dim = static_cast<Eigen::Index>(header.size() - 1);
  if (dim < 1) throw ParseError("header has no feature columns", line_no, 0);

  std::vector<double> values;
  std::vector<CategoryId> labels;
  std::map<CategoryId, std::string> names;
  std::unordered_map<std::string, CategoryId> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string_view> fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw RaggedRows("row has " + std::to_string(fields.size()) +
                           " fields, header has " +
                           std::to_string(header.size()) + " (line " +
                           std::to_string(line_no) + ")",
                       line_no, 0);
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == label_col) {
        std::string name(fields[j]);
        auto it = ids.find(name);
        if (it == ids.end()) {
          const auto id = static_cast<CategoryId>(ids.size());
          it = ids.emplace(name, id).first;
          names.emplace(id, name);
        }
        labels.push_back(it->second);
        continue;
      }
      double value = 0.0;
      if (!parse_double(fields[j], value)) {
        throw NonNumericFeature("non-numeric feature '" + std::string(fields[j]) +
                                    "' at line " + std::to_string(line_no) +
                                    ", column " + std::to_string(j + 1) + " (" +
                                    std::string(header[j]) + ")",
                                line_no, j + 1);
      }
      if (!std::isfinite(value)) {
        throw FiniteCheck("non-finite feature at line " +
                          std::to_string(line_no) + ", column " +
                          std::to_string(j + 1));
      }
      values.push_back(value);
    }
  }

  const auto n = static_cast<Eigen::Index>(labels.size());
  Matrix features(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      features(i, j) = values[static_cast<std::size_t>(i * dim + j)];
    }
  }
  return Dataset(std::move(features), std::move(labels), std::move(names));
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  const std::string where = path.string() + ": ";
  try {
    return read_csv(in);
  } catch (const NonNumericFeature& e) {
    throw NonNumericFeature(where + e.what(), e.row(), e.column());
  } catch (const RaggedRows& e) {
    throw RaggedRows(where + e.what(), e.row(), e.column());
  } catch (const ParseError& e) {
    throw ParseError(where + e.what(), e.row(), e.column());
  } catch (const FiniteCheck& e) {
    throw FiniteCheck(where + e.what());
  }
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << "label";
  for (Eigen::Index j = 0; j < data.dim(); ++j) out << ",f" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const std::string name =
        data.name_of(data.labels()[static_cast<std::size_t>(i)]);
    check_name(name);
    out << name;
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      out << ',' << format_double(data.features()(i, j));
    }
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  write_csv(out, data);
  finish(out, path);
}

// ---- SADS -----------------------------------------------------------------

Dataset read_matrix_bin(std::istream& in) {
  ByteReader reader(in);
  reader.magic(kDatasetMagic);
  const auto version = reader.uint<std::uint32_t>();
  if (version != kDatasetFormatVersion && version != kDatasetFormatVersionF32) {
    throw VersionUnsupported("dataset format version " +
                             std::to_string(version) + " is not supported");
  }
  const auto n = reader.uint<std::uint64_t>();
  const auto d = reader.uint<std::uint64_t>();
  check_size(n, "row count");
  check_size(d, "column count");
  const long double width = version == kDatasetFormatVersion ? 8.0L : 4.0L;
  check_payload(in, static_cast<long double>(n) * static_cast<long double>(d) * width +
                        4.0L * static_cast<long double>(n));
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(d);

  Matrix features(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      features(i, j) = version == kDatasetFormatVersion
                           ? reader.f64()
                           : static_cast<double>(reader.f32());
    }
  }
  std::vector<CategoryId> labels(static_cast<std::size_t>(n));
  for (auto& label : labels) label = reader.uint<std::uint32_t>();
  auto names = reader.names();
  return Dataset(std::move(features), std::move(labels), std::move(names));
}

Dataset load_matrix_bin(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_matrix_bin(in);
}

void write_matrix_bin(std::ostream& out, const Dataset& data,
                      std::uint32_t version) {
  if (version != kDatasetFormatVersion && version != kDatasetFormatVersionF32) {
    throw VersionUnsupported("cannot write dataset format version " +
                             std::to_string(version));
  }
  ByteWriter writer(out);
  writer.raw(kDatasetMagic.data(), kDatasetMagic.size());
  writer.uint(version);
  writer.uint(static_cast<std::uint64_t>(data.size()));
  writer.uint(static_cast<std::uint64_t>(data.dim()));
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      if (version == kDatasetFormatVersion) {
        writer.f64(data.features()(i, j));
      } else {
        writer.f32(static_cast<float>(data.features()(i, j)));
      }
    }
  }
  for (CategoryId label : data.labels()) writer.uint(label);
  writer.names(data.names());
}

void save_matrix_bin(const std::filesystem::path& path, const Dataset& data,
                     std::uint32_t version) {
  std::ofstream out = open_out(path);
  write_matrix_bin(out, data, version);
  finish(out, path);
}

Dataset load_dataset(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return load_csv(path);
  return load_matrix_bin(path);
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  if (path.extension() == ".csv") {
    save_csv(path, data);
  } else {
    save_matrix_bin(path, data);
  }
}

// ---- SADM -----------------------------------------------------------------

void write_model(std::ostream& out, const AdaptedClassifier& clf) {
  ByteWriter writer(out);
  writer.raw(kModelMagic.data(), kModelMagic.size());
  writer.uint(kModelFormatVersion);
  writer.uint(static_cast<std::uint64_t>(clf.feature_dim()));
  writer.uint(static_cast<std::uint64_t>(clf.dim()));
  writer.uint(static_cast<std::uint64_t>(clf.classes().size()));
  for (CategoryId id : clf.classes()) writer.uint(id);
  writer.row_major(clf.weights());
  writer.vector(clf.biases());
  writer.vector(clf.source_stats().mean);
  writer.vector(clf.source_stats().stddev);
  writer.vector(clf.target_stats().mean);
  writer.vector(clf.target_stats().stddev);
  writer.row_major(clf.model().source_subspace().basis());
  writer.row_major(clf.model().target_subspace().basis());
  writer.names(clf.names());
}

AdaptedClassifier read_model(std::istream& in) {
  ByteReader reader(in);
  reader.magic(kModelMagic);
  const auto version = reader.uint<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw VersionUnsupported("model format version " + std::to_string(version) +
                             " is not supported");
  }
  const auto big_d = reader.uint<std::uint64_t>();
  const auto small_d = reader.uint<std::uint64_t>();
  const auto c = reader.uint<std::uint64_t>();
  check_size(big_d, "feature dimension");
  check_size(small_d, "subspace dimension");
  check_size(c, "class count");
  {
    const auto ld = [](std::uint64_t v) { return static_cast<long double>(v); };
    check_payload(in, 4.0L * ld(c) + 8.0L * (ld(c) * ld(small_d) + ld(c) +
                                            4.0L * ld(big_d) +
                                            2.0L * ld(big_d) * ld(small_d)));
  }
  const auto features = static_cast<Eigen::Index>(big_d);
  const auto dim = static_cast<Eigen::Index>(small_d);
  const auto classes = static_cast<Eigen::Index>(c);

  std::vector<CategoryId> ids(static_cast<std::size_t>(c));
  for (auto& id : ids) id = reader.uint<std::uint32_t>();
  Matrix weights = reader.row_major(classes, dim);
  Vector biases = reader.vector(classes);
  ColumnStats source_stats{reader.vector(features), reader.vector(features)};
  ColumnStats target_stats{reader.vector(features), reader.vector(features)};
  Matrix xs = reader.row_major(features, dim);
  Matrix xt = reader.row_major(features, dim);
  auto names = reader.names();
  return AdaptedClassifier(AlignedModel(Subspace(std::move(xs)),
                                        Subspace(std::move(xt))),
                           std::move(ids), std::move(weights),
                           std::move(biases), std::move(source_stats),
                           std::move(target_stats), std::move(names));
}

void save_model(const std::filesystem::path& path,
                const AdaptedClassifier& clf) {
  std::ofstream out = open_out(path);
  write_model(out, clf);
  finish(out, path);
}

AdaptedClassifier load_model(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_model(in);
}

// ---- trace CSV ------------------------------------------------------------

void write_trace_csv(std::ostream& out, const EvolutionTrace& trace,
                     const Dataset& source) {
  out << "step,category_id,category_name,error\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const std::string name = source.name_of(trace.ordering[i]);
    check_name(name);
    out << (i + 1) << ',' << trace.ordering[i] << ',' << name << ','
        << format_double(trace.errors[i]) << '\n';
  }
}

void write_pooled_trace_csv(std::ostream& out, const EvolutionTrace& trace,
                            const SourcePool& pool) {
  out << "step,category_id,category_name,error,domain_name,original_label\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const CategoryId pooled = trace.ordering[i];
    const PooledLabel original = pool.original_of(pooled);
    const std::string name = pool.pooled().name_of(pooled);
    const std::string& domain = pool.domains()[original.domain].name;
    const std::string original_name =
        pool.domains()[original.domain].data.name_of(original.original);
    check_name(name);
    check_name(domain);
    out << (i + 1) << ',' << pooled << ',' << name << ','
        << format_double(trace.errors[i]) << ',' << domain << ','
        << original_name << '\n';
  }
}

EvolutionTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty trace CSV", 1, 0);
  const std::vector<std::string_view> header = split_commas(line);
  if (header.size() < 4 || header[0] != "step" || header[1] != "category_id" ||
      header[3] != "error") {
    throw ParseError("not a trace CSV header", 1, 0);
  }
  EvolutionTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string_view> fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw RaggedRows("trace row has wrong field count", line_no, 0);
    }
    double error = 0.0;
    std::uint32_t id = 0;
    const auto [ptr, ec] = std::from_chars(
        fields[1].data(), fields[1].data() + fields[1].size(), id);
    if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) {
      throw ParseError("bad category_id", line_no, 2);
    }
    if (!parse_double(fields[3], error)) {
      throw ParseError("bad error value", line_no, 4);
    }
    trace.ordering.push_back(id);
    trace.errors.push_back(error);
  }
  return trace;
}

}  // namespace subalign
