#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "skinshape/matrix.hpp"

namespace skinshape {

enum class Label { Negative = 0, Positive = 1, Unlabeled = -1 };

std::string to_string(Label label);
/// Accepts positive/negative/unlabeled, 1/0/-1 and the empty string.
Label parse_label(std::string_view text);

struct ManifestEntry {
  std::string path;
  Label label = Label::Unlabeled;
  std::string split;
};

/// Rows of `path,label,split`. Paths are kept as written; resolve() joins
/// relative ones onto the manifest's directory.
struct CorpusManifest {
  std::filesystem::path base;
  std::vector<ManifestEntry> entries;
  std::filesystem::path resolve(const ManifestEntry& e) const;
};

/// Throws Error on a bad header, an invalid label or a duplicate path.
CorpusManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path);

/// Feature CSV: `path,label,no_skin,<feature names>`.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::string> paths;
  std::vector<Label> labels;
  std::vector<int> no_skin;
  Matrix values;
  std::size_t size() const { return paths.size(); }
  void append(std::string path, Label label, bool no_skin_row, std::span<const double> row);
};

FeatureTable read_feature_table(const std::filesystem::path& path);
void write_feature_table(const FeatureTable& table, const std::filesystem::path& path);

/// Shortest text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);
/// Quotes the field only when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);

/// Writes a numeric matrix with a header row.
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& m);

/// Whole file as bytes; throws Error when unreadable.
std::string read_file(const std::filesystem::path& path);
/// Replaces the file; throws Error when unwritable.
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace skinshape
