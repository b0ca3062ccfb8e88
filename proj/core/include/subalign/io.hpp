#ifndef SUBALIGN_IO_HPP
#define SUBALIGN_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "subalign/classifier.hpp"
#include "subalign/dataset.hpp"
#include "subalign/evolution.hpp"
#include "subalign/multi_source.hpp"

namespace subalign {

// ---------------------------------------------------------------------------
// Dataset CSV
//
// Header row with one column named "label" (any position) and D feature
// columns. Labels are strings, mapped to identifiers 0, 1, ... in order of
// first appearance; the names survive in Dataset::names().

Dataset read_csv(std::istream& in);
Dataset load_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::filesystem::path& path, const Dataset& data);

// ---------------------------------------------------------------------------
// "SADS" binary dataset container, all integers and floats little-endian:
//
//   char[4] "SADS" | u32 version | u64 N | u64 D
//   N*D features, row-major (f64 for version 1, f32 for version 2)
//   N * u32 labels
//   u32 name count, then per entry: u32 id | u32 byte length | bytes
//
// Writers always produce version 1. Version 2 is accepted on read and widened.

inline constexpr std::uint32_t kDatasetFormatVersion = 1;
inline constexpr std::uint32_t kDatasetFormatVersionF32 = 2;

Dataset read_matrix_bin(std::istream& in);
Dataset load_matrix_bin(const std::filesystem::path& path);
void write_matrix_bin(std::ostream& out, const Dataset& data,
                      std::uint32_t version = kDatasetFormatVersion);
void save_matrix_bin(const std::filesystem::path& path, const Dataset& data,
                     std::uint32_t version = kDatasetFormatVersion);

/// Dispatches on extension: ".csv" is CSV, anything else the binary format.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const Dataset& data);

// ---------------------------------------------------------------------------
// "SADM" classifier container:
//
//   char[4] "SADM" | u32 version | u64 D | u64 d | u64 C
//   C * u32 class ids | C*d f64 weights (row-major) | C f64 biases
//   D f64 source mean | D f64 source stddev | D f64 target mean | D f64 target stddev
//   D*d f64 source basis (row-major) | D*d f64 target basis (row-major)
//   name table as in "SADS"
//
// The alignment transform and Us are recomputed from the two bases on load.

inline constexpr std::uint32_t kModelFormatVersion = 1;

void write_model(std::ostream& out, const AdaptedClassifier& clf);
AdaptedClassifier read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const AdaptedClassifier& clf);
AdaptedClassifier load_model(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Trace CSV: step,category_id,category_name,error
// Pooled variant appends: domain_name,original_label

void write_trace_csv(std::ostream& out, const EvolutionTrace& trace,
                     const Dataset& source);
void write_pooled_trace_csv(std::ostream& out, const EvolutionTrace& trace,
                            const SourcePool& pool);
/// Reads back ordering and errors from either trace CSV variant.
EvolutionTrace read_trace_csv(std::istream& in);

/// Shortest decimal text that reads back as the same double.
std::string format_double(double value);

}  // namespace subalign

#endif  // SUBALIGN_IO_HPP
