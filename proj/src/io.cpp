// src/io.cpp

// Copyright 2026  The cohortsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "cohortsv/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "cohortsv/error.hpp"

namespace cohortsv::io {

using nlohmann::json;

namespace {

constexpr std::array<char, 4> kMagic{'C', 'V', 'F', '1'};

std::ofstream open_out(const fs::path& path, bool binary = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in, const std::string& source, std::size_t offset) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw ParseError(source, offset, "truncated header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view chomp(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view tok, const std::string& source, std::size_t line) {
  T v{};
  while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(source, line, "bad number '" + std::string(tok) + "'");
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(v)) throw ParseError(source, line, "non-finite value");
  return v;
}

TrialLabel parse_label(std::string_view tok, const std::string& source, std::size_t line) {
  if (tok == "genuine") return TrialLabel::kGenuine;
  if (tok == "imposter") return TrialLabel::kImposter;
  throw ParseError(source, line, "unknown label '" + std::string(tok) + "'");
}

void check_id(const std::string& id) {
  if (id.empty() || id.find_first_of(",\n\r") != std::string::npos)
    throw InvalidInput("identifier '" + id + "' is empty or contains a separator");
}

void write_trial_columns(std::ostream& out, const TrialRecord& t) {
  check_id(t.utterance_id);
  check_id(t.claimed_speaker);
  out << t.utterance_id << ',' << t.claimed_speaker << ',' << to_string(t.label);
}

TrialRecord parse_trial_columns(const std::vector<std::string_view>& f, const std::string& source,
                                std::size_t line) {
  TrialRecord t{std::string(f[0]), std::string(f[1]), parse_label(f[2], source, line)};
  if (t.utterance_id.empty() || t.claimed_speaker.empty())
    throw ParseError(source, line, "empty identifier");
  return t;
}

// Reads lines, skipping blanks; `fn(line_number, fields)`.
template <typename Fn>
void for_each_row(std::istream& in, Fn fn) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto view = chomp(line);
    if (view.empty()) continue;
    fn(n, split(view));
  }
}

void expect_header(std::istream& in, std::string_view expected_prefix, const std::string& source,
                   std::string& header) {
  if (!std::getline(in, header)) throw ParseError(source, 1, "missing header");
  header = std::string(chomp(header));
  if (header.rfind(expected_prefix, 0) != 0)
    throw ParseError(source, 1, "expected header starting with '" + std::string(expected_prefix) + "'");
}

json header_json(const char* kind) {
  return json{{"format", kind}, {"version", kFormatVersion}};
}

void check_kind(const json& j, const char* kind, const fs::path& path) {
  if (!j.contains("format") || j["format"] != kind)
    throw ParseError(path.string(), 1, std::string("not a ") + kind + " file");
  if (!j.contains("version") || j["version"] != kFormatVersion)
    throw ParseError(path.string(), 1, "unsupported format version");
}

json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), e.byte, e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(1) << '\n';
}

json gmm_to_json(const DiagGmm& g) {
  return json{{"components", g.components()}, {"dim", g.dim()},         {"weights", g.weights()},
              {"means", g.means()},           {"variances", g.variances()}};
}

DiagGmm gmm_from_json(const json& j, const fs::path& path) {
  try {
    const auto m = j.at("components").get<std::size_t>();
    const auto d = j.at("dim").get<std::size_t>();
    auto w = j.at("weights").get<std::vector<double>>();
    auto mu = j.at("means").get<std::vector<double>>();
    auto var = j.at("variances").get<std::vector<double>>();
    if (w.size() != m || mu.size() != m * d || var.size() != m * d)
      throw ParseError(path.string(), 1, "GMM arrays do not match components x dim");
    return DiagGmm(std::move(w), std::move(mu), std::move(var));
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 1, e.what());
  } catch (const InvalidInput& e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

json standardizer_to_json(const Standardizer& s) {
  return json{{"mean", s.mean}, {"scale", s.scale}};
}

Standardizer standardizer_from_json(const json& j) {
  return Standardizer{j.at("mean").get<std::vector<double>>(),
                      j.at("scale").get<std::vector<double>>()};
}

double json_double(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

json double_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_features_binary(std::ostream& out, const FeatureMatrix& m) {
  out.write(kMagic.data(), 4);
  put_u32(out, static_cast<std::uint32_t>(m.frames()));
  put_u32(out, static_cast<std::uint32_t>(m.dim()));
  for (float v : m.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
}

FeatureMatrix read_features_binary(std::istream& in, const std::string& source) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kMagic)
    throw ParseError(source, 0, "missing CVF1 magic");
  const std::uint32_t frames = get_u32(in, source, 4);
  const std::uint32_t dim = get_u32(in, source, 8);
  if (frames == 0 || dim == 0) throw ParseError(source, 4, "frames and dim must be >= 1");
  const std::size_t count = static_cast<std::size_t>(frames) * dim;
  std::vector<unsigned char> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw ParseError(source, 12 + static_cast<std::size_t>(in.gcount()),
                     "truncated data: expected " + std::to_string(raw.size()) + " bytes");
  if (in.peek() != std::char_traits<char>::eof())
    throw ParseError(source, 12 + raw.size(), "trailing bytes after data");
  std::vector<float> values(count);
  for (std::size_t k = 0; k < count; ++k) {
    const unsigned char* b = raw.data() + 4 * k;
    const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) |
                               (static_cast<std::uint32_t>(b[1]) << 8) |
                               (static_cast<std::uint32_t>(b[2]) << 16) |
                               (static_cast<std::uint32_t>(b[3]) << 24);
    values[k] = std::bit_cast<float>(bits);
    if (!std::isfinite(values[k])) throw ParseError(source, 12 + 4 * k, "non-finite value");
  }
  return FeatureMatrix(frames, dim, std::move(values));
}

void write_features_csv(std::ostream& out, const FeatureMatrix& m) {
  for (std::size_t t = 0; t < m.frames(); ++t) {
    const auto r = m.row(t);
    for (std::size_t j = 0; j < r.size(); ++j) {
      char buf[32];
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r[j]);
      if (j) out << ',';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

FeatureMatrix read_features_csv(std::istream& in, const std::string& source) {
  std::vector<float> values;
  std::size_t dim = 0, frames = 0;
  for_each_row(in, [&](std::size_t line, const std::vector<std::string_view>& f) {
    if (dim == 0) dim = f.size();
    if (f.size() != dim)
      throw ParseError(source, line, "expected " + std::to_string(dim) + " columns, got " +
                                         std::to_string(f.size()));
    for (auto tok : f) values.push_back(parse_number<float>(tok, source, line));
    ++frames;
  });
  if (frames == 0) throw ParseError(source, 1, "no frames");
  return FeatureMatrix(frames, dim, std::move(values));
}

void save_features(const fs::path& path, const FeatureMatrix& m) {
  const bool csv = path.extension() == ".csv";
  auto out = open_out(path, !csv);
  csv ? write_features_csv(out, m) : write_features_binary(out, m);
}

FeatureMatrix load_features(const fs::path& path) {
  const bool csv = path.extension() == ".csv";
  auto in = open_in(path, !csv);
  return csv ? read_features_csv(in, path.string()) : read_features_binary(in, path.string());
}

void save_gmm(const fs::path& path, const DiagGmm& gmm) {
  json j = header_json("cohortsv-gmm");
  j["gmm"] = gmm_to_json(gmm);
  write_json(path, j);
}

DiagGmm load_gmm(const fs::path& path) {
  const json j = read_json(path);
  check_kind(j, "cohortsv-gmm", path);
  return gmm_from_json(j.at("gmm"), path);
}

void save_speaker(const fs::path& path, const SpeakerModel& model) {
  json j = header_json("cohortsv-speaker");
  j["ubm_ref"] = model.ubm_ref;
  j["gmm"] = gmm_to_json(model.gmm);
  write_json(path, j);
}

SpeakerModel load_speaker(const fs::path& path) {
  const json j = read_json(path);
  check_kind(j, "cohortsv-speaker", path);
  return SpeakerModel{gmm_from_json(j.at("gmm"), path), j.value("ubm_ref", "")};
}

void save_cohort(const fs::path& path, const Cohort& cohort) {
  json j = header_json("cohortsv-cohort");
  j["size"] = cohort.size();
  j["centroids"] = json::array();
  for (const auto& c : cohort.centroids) j["centroids"].push_back(gmm_to_json(c));
  write_json(path, j);
}

Cohort load_cohort(const fs::path& path) {
  const json j = read_json(path);
  check_kind(j, "cohortsv-cohort", path);
  Cohort c;
  for (const auto& g : j.at("centroids")) c.centroids.push_back(gmm_from_json(g, path));
  if (c.size() != j.at("size").get<std::size_t>() || c.size() == 0)
    throw ParseError(path.string(), 1, "cohort size field does not match centroids");
  return c;
}

void save_decider(const fs::path& path, const DecisionModel& model) {
  json j = header_json("cohortsv-decider");
  if (const auto* svm = std::get_if<LinearSvmModel>(&model)) {
    j["kind"] = "svm";
    j["dim"] = svm->weights.size();
    j["weights"] = svm->weights;
    j["bias"] = svm->bias;
    j["standardizer"] = standardizer_to_json(svm->standardizer);
    j["hyperparameters"] = {{"regularization", svm->options.regularization},
                            {"epochs", svm->options.epochs},
                            {"tolerance", svm->options.tolerance},
                            {"seed", svm->options.seed}};
  } else {
    const auto& mlp = std::get<MlpModel>(model);
    j["kind"] = "mlp";
    j["input_dim"] = mlp.input_dim;
    j["hidden_dim"] = mlp.hidden_dim;
    j["w1"] = mlp.w1;
    j["b1"] = mlp.b1;
    j["w2"] = mlp.w2;
    j["b2"] = mlp.b2;
    j["standardizer"] = standardizer_to_json(mlp.standardizer);
    j["hyperparameters"] = {{"epochs", mlp.options.epochs},
                            {"learning_rate", mlp.options.learning_rate},
                            {"batch_size", mlp.options.batch_size},
                            {"momentum", mlp.options.momentum},
                            {"seed", mlp.options.seed}};
  }
  write_json(path, j);
}

DecisionModel load_decider(const fs::path& path) {
  const json j = read_json(path);
  check_kind(j, "cohortsv-decider", path);
  try {
    const auto kind = j.at("kind").get<std::string>();
    const auto& hp = j.at("hyperparameters");
    if (kind == "svm") {
      LinearSvmModel m;
      m.weights = j.at("weights").get<std::vector<double>>();
      m.bias = j.at("bias").get<double>();
      m.standardizer = standardizer_from_json(j.at("standardizer"));
      m.options.regularization = hp.at("regularization").get<double>();
      m.options.epochs = hp.at("epochs").get<std::size_t>();
      m.options.tolerance = hp.at("tolerance").get<double>();
      m.options.seed = hp.at("seed").get<std::uint64_t>();
      if (m.weights.size() != j.at("dim").get<std::size_t>() ||
          m.standardizer.mean.size() != m.weights.size() ||
          m.standardizer.scale.size() != m.weights.size())
        throw ParseError(path.string(), 1, "svm shapes disagree");
      return m;
    }
    if (kind == "mlp") {
      MlpModel m;
      m.input_dim = j.at("input_dim").get<std::size_t>();
      m.hidden_dim = j.at("hidden_dim").get<std::size_t>();
      m.w1 = j.at("w1").get<std::vector<double>>();
      m.b1 = j.at("b1").get<std::vector<double>>();
      m.w2 = j.at("w2").get<std::vector<double>>();
      m.b2 = j.at("b2").get<std::vector<double>>();
      m.standardizer = standardizer_from_json(j.at("standardizer"));
      m.options.epochs = hp.at("epochs").get<std::size_t>();
      m.options.learning_rate = hp.at("learning_rate").get<double>();
      m.options.batch_size = hp.at("batch_size").get<std::size_t>();
      m.options.momentum = hp.at("momentum").get<double>();
      m.options.seed = hp.at("seed").get<std::uint64_t>();
      if (m.hidden_dim != MlpModel::kHiddenPerInput * m.input_dim ||
          m.w1.size() != m.hidden_dim * m.input_dim || m.b1.size() != m.hidden_dim ||
          m.w2.size() != 2 * m.hidden_dim || m.b2.size() != 2 ||
          m.standardizer.mean.size() != m.input_dim || m.standardizer.scale.size() != m.input_dim)
        throw ParseError(path.string(), 1, "mlp shapes disagree");
      return m;
    }
    throw ParseError(path.string(), 1, "unknown decider kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

void write_trials(std::ostream& out, const std::vector<TrialRecord>& trials) {
  out << "utterance_id,claimed_speaker,label\n";
  for (const auto& t : trials) {
    write_trial_columns(out, t);
    out << '\n';
  }
}

std::vector<TrialRecord> read_trials(std::istream& in, const std::string& source) {
  std::string header;
  expect_header(in, "utterance_id,claimed_speaker,label", source, header);
  if (header != "utterance_id,claimed_speaker,label")
    throw ParseError(source, 1, "unexpected trial header '" + header + "'");
  std::vector<TrialRecord> trials;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    const auto view = chomp(line);
    if (view.empty()) continue;
    const auto f = split(view);
    if (f.size() != 3) throw ParseError(source, n, "expected 3 columns");
    trials.push_back(parse_trial_columns(f, source, n));
  }
  return trials;
}

void save_trials(const fs::path& path, const std::vector<TrialRecord>& trials) {
  auto out = open_out(path);
  write_trials(out, trials);
}

std::vector<TrialRecord> load_trials(const fs::path& path) {
  auto in = open_in(path);
  return read_trials(in, path.string());
}

void write_scores(std::ostream& out, const std::vector<ScoreRow>& rows) {
  const std::size_t k = rows.empty() ? 0 : rows.front().scores.s_cohort.size();
  out << "utterance_id,claimed_speaker,label,s_claimed,s_ubm";
  for (std::size_t c = 0; c < k; ++c) out << ",s_cohort_" << c;
  out << '\n';
  for (const auto& r : rows) {
    if (r.scores.s_cohort.size() != k) throw InvalidInput("write_scores: ragged cohort scores");
    write_trial_columns(out, r.trial);
    out << ',' << format_double(r.scores.s_claimed) << ',' << format_double(r.scores.s_ubm);
    for (double s : r.scores.s_cohort) out << ',' << format_double(s);
    out << '\n';
  }
}

std::vector<ScoreRow> read_scores(std::istream& in, const std::string& source) {
  std::string header;
  expect_header(in, "utterance_id,claimed_speaker,label,s_claimed,s_ubm", source, header);
  const std::size_t cols = split(header).size();
  std::vector<ScoreRow> rows;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    const auto view = chomp(line);
    if (view.empty()) continue;
    const auto f = split(view);
    if (f.size() != cols)
      throw ParseError(source, n, "expected " + std::to_string(cols) + " columns");
    ScoreRow r;
    r.trial = parse_trial_columns(f, source, n);
    r.scores.s_claimed = parse_number<double>(f[3], source, n);
    r.scores.s_ubm = parse_number<double>(f[4], source, n);
    for (std::size_t c = 5; c < cols; ++c)
      r.scores.s_cohort.push_back(parse_number<double>(f[c], source, n));
    rows.push_back(std::move(r));
  }
  return rows;
}

void save_scores(const fs::path& path, const std::vector<ScoreRow>& rows) {
  auto out = open_out(path);
  write_scores(out, rows);
}

std::vector<ScoreRow> load_scores(const fs::path& path) {
  auto in = open_in(path);
  return read_scores(in, path.string());
}

void save_feature_rows(const fs::path& path, const std::vector<FeatureRow>& rows) {
  auto out = open_out(path);
  const std::size_t d = rows.empty() ? 0 : rows.front().values.size();
  out << "utterance_id,claimed_speaker,label,s_claimed";
  for (std::size_t j = 0; j < d; ++j) out << ",f" << j;
  out << '\n';
  for (const auto& r : rows) {
    if (r.values.size() != d) throw InvalidInput("save_feature_rows: ragged rows");
    write_trial_columns(out, r.trial);
    out << ',' << format_double(r.s_claimed);
    for (double v : r.values) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<FeatureRow> load_feature_rows(const fs::path& path) {
  auto in = open_in(path);
  const std::string source = path.string();
  std::string header;
  expect_header(in, "utterance_id,claimed_speaker,label,s_claimed", source, header);
  const std::size_t cols = split(header).size();
  std::vector<FeatureRow> rows;
  std::string line;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    const auto view = chomp(line);
    if (view.empty()) continue;
    const auto f = split(view);
    if (f.size() != cols)
      throw ParseError(source, n, "expected " + std::to_string(cols) + " columns");
    FeatureRow r;
    r.trial = parse_trial_columns(f, source, n);
    r.s_claimed = parse_number<double>(f[3], source, n);
    for (std::size_t c = 4; c < cols; ++c) r.values.push_back(parse_number<double>(f[c], source, n));
    rows.push_back(std::move(r));
  }
  return rows;
}

void save_report(const fs::path& path, const EvalReport& report) {
  json j = header_json("cohortsv-report");
  j["eer"] = report.eer;
  j["eer_threshold"] = report.eer_threshold;
  j["n_target"] = report.n_target;
  j["n_nontarget"] = report.n_nontarget;
  j["det_points"] = json::array();
  for (const auto& p : report.det_points)
    j["det_points"].push_back({double_json(p.threshold), p.far, p.frr});
  write_json(path, j);
}

EvalReport load_report(const fs::path& path) {
  const json j = read_json(path);
  check_kind(j, "cohortsv-report", path);
  try {
    EvalReport r;
    r.eer = j.at("eer").get<double>();
    r.eer_threshold = j.at("eer_threshold").get<double>();
    r.n_target = j.at("n_target").get<std::size_t>();
    r.n_nontarget = j.at("n_nontarget").get<std::size_t>();
    for (const auto& p : j.at("det_points"))
      r.det_points.push_back({json_double(p.at(0)), p.at(1).get<double>(), p.at(2).get<double>()});
    return r;
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

void save_det_csv(const fs::path& path, const std::vector<DetPoint>& points) {
  auto out = open_out(path);
  out << "threshold,far,frr\n";
  for (const auto& p : points)
    out << (std::isinf(p.threshold) ? std::string("inf") : format_double(p.threshold)) << ','
        << format_double(p.far) << ',' << format_double(p.frr) << '\n';
}

void save_histogram_csv(const fs::path& path, const std::vector<std::size_t>& genuine,
                        const std::vector<std::size_t>& imposter) {
  auto out = open_out(path);
  out << "rank,genuine,imposter\n";
  for (std::size_t r = 0; r < genuine.size(); ++r)
    out << r + 1 << ',' << genuine[r] << ',' << (r < imposter.size() ? imposter[r] : 0) << '\n';
}

void save_cost_curve_csv(const fs::path& path,
                         const std::vector<std::pair<std::size_t, double>>& curve) {
  auto out = open_out(path);
  out << "k,cost\n";
  for (const auto& [k, j] : curve) out << k << ',' << format_double(j) << '\n';
}

}  // namespace cohortsv::io
