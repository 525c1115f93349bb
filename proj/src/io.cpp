// Copyright 2026 The skbmlfx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skbmlfx/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "skbmlfx/error.hpp"

namespace skbmlfx::io {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_integer(std::string_view text, Errc code) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(code, "bad integer '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoFailure, "cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoFailure, "cannot write " + path.string());
  return out;
}

struct Header {
  std::size_t d_v;
  std::size_t d_s;
  std::size_t n;
};

Header parse_header(const std::vector<std::string>& lines) {
  if (lines.empty() || trim(lines[0]).substr(0, 1) != "#") throw Error(Errc::kMalformedHeader, "missing '# dv= ds= n=' header");
  Header h{};
  bool seen[3] = {false, false, false};
  for (auto token : split(trim(std::string_view(lines[0]).substr(1)), ' ')) {
    token = trim(token);
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::kMalformedHeader, "bad header token");
    const auto key = token.substr(0, eq);
    const auto value = parse_integer<std::size_t>(token.substr(eq + 1), Errc::kMalformedHeader);
    if (key == "dv") {
      h.d_v = value;
      seen[0] = true;
    } else if (key == "ds") {
      h.d_s = value;
      seen[1] = true;
    } else if (key == "n") {
      h.n = value;
      seen[2] = true;
    }
  }
  if (!seen[0] || !seen[1] || !seen[2]) throw Error(Errc::kMalformedHeader, "header needs dv, ds and n");
  if (lines.size() - 1 != h.n) throw Error(Errc::kMalformedHeader, "row count disagrees with header n");
  return h;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error(Errc::kIoFailure, "number formatting failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::kMalformedHeader, "bad number '" + std::string(text) + "'");
  }
  return value;
}

void write_feature_table(const std::filesystem::path& path, const Matrix& visual, const std::vector<int>& labels,
                         std::size_t d_s) {
  if (labels.size() != visual.cols()) throw Error(Errc::kDimensionMismatch, "one label per column expected");
  auto out = open_out(path);
  out << "# dv=" << visual.rows() << " ds=" << d_s << " n=" << labels.size() << '\n';
  for (std::size_t n = 0; n < labels.size(); ++n) {
    out << labels[n];
    for (std::size_t r = 0; r < visual.rows(); ++r) out << ',' << format_double(visual(r, n));
    out << '\n';
  }
  if (!out) throw Error(Errc::kIoFailure, "write failed for " + path.string());
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const auto h = parse_header(lines);
  if (h.d_v == 0 || h.n == 0) throw Error(Errc::kMalformedHeader, "feature file needs dv > 0 and n > 0");
  FeatureTable table{h.d_v, h.d_s, Matrix(h.d_v, h.n), std::vector<int>(h.n)};
  for (std::size_t n = 0; n < h.n; ++n) {
    const auto fields = split(lines[n + 1], ',');
    if (fields.size() != h.d_v + 1) throw Error(Errc::kMalformedHeader, "row length disagrees with header dv");
    table.labels[n] = parse_integer<int>(fields[0], Errc::kMalformedHeader);
    for (std::size_t r = 0; r < h.d_v; ++r) table.visual(r, n) = parse_double(fields[r + 1]);
  }
  require_finite(table.visual, "feature file");
  return table;
}

void save_features(const std::filesystem::path& path, const TrainingSet& train) {
  write_feature_table(path, train.visual(), train.labels(), train.semantic_dim());
}

TrainingSet load_features(const std::filesystem::path& path, const SemanticPrototypes& prototypes) {
  auto table = read_feature_table(path);
  if (table.d_s != prototypes.dim()) throw Error(Errc::kDimensionMismatch, "feature file ds differs from prototypes");
  return TrainingSet(std::move(table.visual), std::move(table.labels), prototypes);
}

void save_prototypes(const std::filesystem::path& path, const SemanticPrototypes& prototypes) {
  auto out = open_out(path);
  out << "# dv=0 ds=" << prototypes.dim() << " n=" << prototypes.count() << '\n';
  for (std::size_t c = 0; c < prototypes.count(); ++c) {
    out << prototypes.class_ids()[c];
    for (const double x : prototypes.column(c)) out << ',' << format_double(x);
    out << '\n';
  }
  if (!out) throw Error(Errc::kIoFailure, "write failed for " + path.string());
}

SemanticPrototypes load_prototypes(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  const auto h = parse_header(lines);
  if (h.d_s == 0 || h.n == 0) throw Error(Errc::kMalformedHeader, "prototype file needs ds > 0 and n > 0");
  std::vector<int> ids(h.n);
  Matrix vectors(h.d_s, h.n);
  for (std::size_t c = 0; c < h.n; ++c) {
    const auto fields = split(lines[c + 1], ',');
    if (fields.size() != h.d_s + 1) throw Error(Errc::kMalformedHeader, "row length disagrees with header ds");
    ids[c] = parse_integer<int>(fields[0], Errc::kMalformedHeader);
    for (std::size_t r = 0; r < h.d_s; ++r) vectors(r, c) = parse_double(fields[r + 1]);
  }
  return SemanticPrototypes(std::move(ids), std::move(vectors));
}

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  auto out = open_out(path);
  out << "# tau=" << format_double(inst.tau()) << '\n';
  out << "m,loss1,loss2,loss3,loss4,latency1,latency2,latency3,latency4\n";
  for (std::size_t r = 0; r < inst.m(); ++r) {
    out << r;
    for (std::size_t l = 0; l < kLevels; ++l) out << ',' << format_double(inst.losses()(r, l));
    for (std::size_t l = 0; l < kLevels; ++l) out << ',' << format_double(inst.latencies()(r, l));
    out << '\n';
  }
  if (!out) throw Error(Errc::kIoFailure, "write failed for " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw Error(Errc::kMalformedHeader, "missing '# tau=' header");
  const auto head = trim(lines[0]);
  const auto eq = head.find("tau=");
  if (head.substr(0, 1) != "#" || eq == std::string_view::npos) throw Error(Errc::kMalformedHeader, "missing '# tau=' header");
  const double tau = parse_double(head.substr(eq + 4));

  std::size_t first = 1;
  if (lines.size() > 1 && trim(lines[1]).substr(0, 1) == "m") first = 2;
  const std::size_t m = lines.size() - first;
  if (m == 0) throw Error(Errc::kMalformedHeader, "instance has no rows");
  Matrix losses(m, kLevels);
  Matrix latencies(m, kLevels);
  for (std::size_t r = 0; r < m; ++r) {
    const auto fields = split(lines[first + r], ',');
    if (fields.size() != 1 + 2 * kLevels) throw Error(Errc::kMalformedHeader, "instance rows need 9 fields");
    for (std::size_t l = 0; l < kLevels; ++l) {
      losses(r, l) = parse_double(fields[1 + l]);
      latencies(r, l) = parse_double(fields[1 + kLevels + l]);
    }
  }
  return Instance(std::move(losses), std::move(latencies), tau);
}

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(), j.at("data").get<std::vector<double>>());
}

}  // namespace

nlohmann::json to_json(const ExtractorModel& model) {
  return {{"k", model.k},
          {"d_v", model.d_v},
          {"d_s", model.d_s},
          {"lambda", model.lambda},
          {"w_s", matrix_json(model.w_s)},
          {"w_v", matrix_json(model.w_v)},
          {"p_v", matrix_json(model.p_v)},
          {"p_s", matrix_json(model.p_s)}};
}

ExtractorModel model_from_json(const nlohmann::json& j) {
  try {
    ExtractorModel m{matrix_from_json(j.at("w_s")), matrix_from_json(j.at("w_v")), matrix_from_json(j.at("p_v")),
                     matrix_from_json(j.at("p_s")),  j.at("k").get<std::size_t>(),  j.at("d_v").get<std::size_t>(),
                     j.at("d_s").get<std::size_t>(), j.at("lambda").get<double>()};
    if (m.p_v.rows() != m.k || m.p_v.cols() != m.d_v || m.p_s.rows() != m.k || m.p_s.cols() != m.d_s) {
      throw Error(Errc::kDimensionMismatch, "model matrices disagree with k, d_v, d_s");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedHeader, std::string("model json: ") + e.what());
  }
}

nlohmann::json to_json(const PlannerReport& report) {
  std::vector<int> levels;
  for (auto l : report.assignment.levels()) levels.push_back(l + 1);
  return {{"planner", report.planner},
          {"assignment", levels},
          {"avg_loss", report.avg_loss},
          {"avg_latency", report.avg_latency},
          {"feasible", report.feasible},
          {"iterations", report.iterations},
          {"restarts_used", report.restarts_used},
          {"gamma_final", report.gamma_final},
          {"repaired", report.repaired},
          {"converged", report.converged}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw Error(Errc::kIoFailure, "write failed for " + path.string());
}

}  // namespace skbmlfx::io
