#include "skinshape/table.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "skinshape/error.hpp"

namespace skinshape {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string to_string(Label label) {
  switch (label) {
    case Label::Positive:
      return "positive";
    case Label::Negative:
      return "negative";
    case Label::Unlabeled:
      break;
  }
  return "unlabeled";
}

Label parse_label(std::string_view text) {
  if (text == "positive" || text == "1") return Label::Positive;
  if (text == "negative" || text == "0") return Label::Negative;
  if (text.empty() || text == "unlabeled" || text == "-1") return Label::Unlabeled;
  throw Error("invalid label '" + std::string(text) + "'");
}

std::filesystem::path CorpusManifest::resolve(const ManifestEntry& e) const {
  const std::filesystem::path p(e.path);
  return p.is_absolute() ? p : base / p;
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw Error("manifest " + path.string() + " has no header");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "path" || header[1] != "label") {
    throw Error("manifest header must start with path,label");
  }
  CorpusManifest m;
  m.base = path.parent_path();
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = split_csv_line(lines[i]);
    if (f.empty() || f[0].empty()) throw Error("manifest line " + std::to_string(i + 1) + ": empty path");
    ManifestEntry e;
    e.path = f[0];
    e.label = parse_label(f.size() > 1 ? f[1] : "");
    if (f.size() > 2) e.split = f[2];
    if (!seen.insert(e.path).second) throw Error("duplicate manifest path " + e.path);
    m.entries.push_back(std::move(e));
  }
  return m;
}

void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "path,label,split\n";
  for (const auto& e : manifest.entries) {
    out << csv_field(e.path) << ',' << to_string(e.label) << ',' << csv_field(e.split) << '\n';
  }
  write_file(path, out.str());
}

void FeatureTable::append(std::string path, Label label, bool no_skin_row, std::span<const double> row) {
  if (row.size() != names.size()) throw DimensionMismatch(names.size(), row.size());
  paths.push_back(std::move(path));
  labels.push_back(label);
  no_skin.push_back(no_skin_row ? 1 : 0);
  values.append_row(row);
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw Error("feature table " + path.string() + " is empty");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 4 || header[0] != "path" || header[1] != "label" || header[2] != "no_skin") {
    throw Error("feature table header must start with path,label,no_skin");
  }
  FeatureTable t;
  t.names.assign(header.begin() + 3, header.end());
  std::vector<double> row(t.names.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != header.size()) {
      throw Error("feature table line " + std::to_string(i + 1) + ": expected " +
                  std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    }
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = parse_double(f[k + 3]);
    t.append(f[0], parse_label(f[1]), f[2] == "1", row);
  }
  return t;
}

void write_feature_table(const FeatureTable& table, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "path,label,no_skin";
  for (const auto& n : table.names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << csv_field(table.paths[i]) << ',' << to_string(table.labels[i]) << ',' << table.no_skin[i];
    for (double v : table.values.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
  write_file(path, out.str());
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& m) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(r, c));
    out << '\n';
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace skinshape
