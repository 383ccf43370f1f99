// src/pipeline.cpp

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

#include "cohortsv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "cohortsv/error.hpp"
#include "cohortsv/io.hpp"

namespace cohortsv {

namespace {

const char* const kParts[] = {"dev", "eval"};

void log(const ExperimentConfig& cfg, const std::string& msg) {
  if (cfg.verbose) std::clog << "[cohortsv] " << msg << '\n';
}

void require_file(const fs::path& p) {
  if (!fs::exists(p)) throw std::runtime_error("missing input: " + p.string());
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !(in >> std::ws).eof())
    throw InvalidInput("config: bad value '" + text + "' for " + key);
  if constexpr (std::is_unsigned_v<T>)
    if (text.find('-') != std::string::npos)
      throw InvalidInput("config: negative value '" + text + "' for " + key);
  return v;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

// "section.key" -> setter
std::map<std::string, Setter> setters() {
  std::map<std::string, Setter> s;
#define COHORTSV_KEY(name, field, type)                                     \
  s[name] = [](ExperimentConfig& c, const std::string& v) {                 \
    c.field = parse_value<type>(name, v);                                   \
  }
  COHORTSV_KEY("corpus.n_speakers", corpus.n_speakers, std::size_t);
  COHORTSV_KEY("corpus.dim", corpus.dim, std::size_t);
  COHORTSV_KEY("corpus.ubm_components", corpus.ubm_components, std::size_t);
  COHORTSV_KEY("corpus.ubm_speakers", corpus.ubm_speakers, std::size_t);
  COHORTSV_KEY("corpus.ubm_frames_per_speaker", corpus.ubm_frames_per_speaker, std::size_t);
  COHORTSV_KEY("corpus.frames_per_enroll", corpus.frames_per_enroll, std::size_t);
  COHORTSV_KEY("corpus.frames_per_test", corpus.frames_per_test, std::size_t);
  COHORTSV_KEY("corpus.tests_per_speaker", corpus.tests_per_speaker, std::size_t);
  COHORTSV_KEY("corpus.speaker_shift_scale", corpus.speaker_shift_scale, double);
  COHORTSV_KEY("corpus.session_shift_scale", corpus.session_shift_scale, double);
  COHORTSV_KEY("corpus.seed", corpus.seed, std::uint64_t);
  COHORTSV_KEY("ubm.components", ubm.components, std::size_t);
  COHORTSV_KEY("ubm.iterations", ubm.iterations, std::size_t);
  COHORTSV_KEY("ubm.min_gain", ubm.min_gain, double);
  COHORTSV_KEY("ubm.variance_floor_ratio", ubm.variance_floor_ratio, double);
  COHORTSV_KEY("ubm.seed", ubm.seed, std::uint64_t);
  COHORTSV_KEY("map.relevance", relevance, double);
  COHORTSV_KEY("cohort.k", cohort.k, std::size_t);
  COHORTSV_KEY("cohort.iterations", cohort.iterations, std::size_t);
  COHORTSV_KEY("cohort.restarts", cohort.restarts, std::size_t);
  COHORTSV_KEY("cohort.seed", cohort.seed, std::uint64_t);
  COHORTSV_KEY("cohort.cost_curve_k_max", cost_curve_k_max, std::size_t);
  COHORTSV_KEY("split.dev_fraction", dev_fraction, double);
  COHORTSV_KEY("features.imposters_per_utterance", imposters_per_utterance, std::size_t);
  COHORTSV_KEY("svm.regularization", svm.regularization, double);
  COHORTSV_KEY("svm.epochs", svm.epochs, std::size_t);
  COHORTSV_KEY("svm.tolerance", svm.tolerance, double);
  COHORTSV_KEY("svm.seed", svm.seed, std::uint64_t);
  COHORTSV_KEY("mlp.epochs", mlp.epochs, std::size_t);
  COHORTSV_KEY("mlp.learning_rate", mlp.learning_rate, double);
  COHORTSV_KEY("mlp.batch_size", mlp.batch_size, std::size_t);
  COHORTSV_KEY("mlp.momentum", mlp.momentum, double);
  COHORTSV_KEY("mlp.seed", mlp.seed, std::uint64_t);
#undef COHORTSV_KEY
  s["features.condition"] = [](ExperimentConfig& c, const std::string& v) {
    c.condition = parse_condition(v);
  };
  s["decider.kind"] = [](ExperimentConfig& c, const std::string& v) {
    c.decider = parse_decider(v);
  };
  s["output.dir"] = [](ExperimentConfig& c, const std::string& v) { c.out = v; };
  return s;
}

std::size_t dev_count(const ExperimentConfig& cfg) {
  return static_cast<std::size_t>(
      std::floor(cfg.dev_fraction * static_cast<double>(cfg.corpus.n_speakers)));
}

// Loads models for every speaker of one partition, in speakers.csv order.
std::vector<SpeakerModel> load_partition_models(const Workspace& ws,
                                                const std::vector<SpeakerEntry>& speakers,
                                                const std::string& part,
                                                std::vector<std::string>* ids = nullptr) {
  std::vector<SpeakerModel> models;
  for (const auto& s : speakers) {
    if (s.partition != part) continue;
    const fs::path p = ws.speaker_model(s.id);
    require_file(p);
    models.push_back(io::load_speaker(p));
    if (ids) ids->push_back(s.id);
  }
  return models;
}

std::vector<DiagGmm> gmms_of(const std::vector<SpeakerModel>& models) {
  std::vector<DiagGmm> g;
  g.reserve(models.size());
  for (const auto& m : models) g.push_back(m.gmm);
  return g;
}

// Runs body(i) for i in [0, n) across threads, rethrowing the first failure.
template <typename Fn>
void parallel_for(std::size_t n, Fn body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

LabeledSet labeled(const std::vector<io::FeatureRow>& rows) {
  LabeledSet set;
  for (const auto& r : rows) set.add(r.values, r.trial.label);
  return set;
}

}  // namespace

DeciderKind parse_decider(const std::string& name) {
  if (name == "svm") return DeciderKind::kSvm;
  if (name == "mlp") return DeciderKind::kMlp;
  throw InvalidInput("unknown decider '" + name + "' (expected svm or mlp)");
}

std::string to_string(DeciderKind kind) { return kind == DeciderKind::kSvm ? "svm" : "mlp"; }

void ExperimentConfig::validate() const {
  corpus.validate();
  if (ubm.components == 0 || ubm.iterations == 0)
    throw InvalidInput("config: ubm.components and ubm.iterations must be >= 1");
  if (ubm.components > corpus.ubm_speakers * corpus.ubm_frames_per_speaker)
    throw InvalidInput("config: more UBM components than UBM training frames");
  if (!(ubm.variance_floor_ratio > 0.0))
    throw InvalidInput("config: ubm.variance_floor_ratio must be > 0");
  if (!(relevance >= 0.0)) throw InvalidInput("config: map.relevance must be >= 0");
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0))
    throw InvalidInput("config: split.dev_fraction must be in (0, 1)");
  const std::size_t n_dev = dev_count(*this);
  const std::size_t n_eval = corpus.n_speakers - n_dev;
  if (n_dev < 2 || n_eval < 2)
    throw InvalidInput("config: dev and eval partitions need at least 2 speakers each");
  if (cohort.k < 2 || cohort.k > n_dev)
    throw InvalidInput("config: cohort.k must be in [2, " + std::to_string(n_dev) +
                       "] (dev speakers)");
  if (cost_curve_k_max < 1 || cost_curve_k_max > n_dev)
    throw InvalidInput("config: cohort.cost_curve_k_max must be in [1, dev speakers]");
  if (cohort.iterations == 0 || cohort.restarts == 0)
    throw InvalidInput("config: cohort.iterations and cohort.restarts must be >= 1");
  if (!(svm.regularization > 0.0) || svm.epochs == 0)
    throw InvalidInput("config: svm.regularization must be > 0 and svm.epochs >= 1");
  if (!(mlp.learning_rate > 0.0) || mlp.epochs == 0 || mlp.batch_size == 0)
    throw InvalidInput("config: mlp.learning_rate > 0, mlp.epochs and mlp.batch_size >= 1 required");
  if (out.empty()) throw InvalidInput("config: output.dir is empty");
}

void ExperimentConfig::reseed(std::uint64_t seed) {
  corpus.seed = seed;
  ubm.seed = seed + 1;
  cohort.seed = seed + 2;
  svm.seed = seed + 3;
  mlp.seed = seed + 4;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(source, e.line(), e.message());
  }
  ExperimentConfig cfg;
  const auto table = setters();
  for (const auto& [section, keys] : tree) {
    if (keys.empty()) throw InvalidInput("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : keys) {
      const std::string name = section + "." + key;
      const auto it = table.find(name);
      if (it == table.end()) throw InvalidInput("config: unknown key " + name);
      it->second(cfg, value.data());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_config(in, path.string());
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << std::setprecision(17);
  o << "[corpus]\nn_speakers=" << c.corpus.n_speakers << "\ndim=" << c.corpus.dim
    << "\nubm_components=" << c.corpus.ubm_components << "\nubm_speakers=" << c.corpus.ubm_speakers
    << "\nubm_frames_per_speaker=" << c.corpus.ubm_frames_per_speaker
    << "\nframes_per_enroll=" << c.corpus.frames_per_enroll
    << "\nframes_per_test=" << c.corpus.frames_per_test
    << "\ntests_per_speaker=" << c.corpus.tests_per_speaker
    << "\nspeaker_shift_scale=" << c.corpus.speaker_shift_scale
    << "\nsession_shift_scale=" << c.corpus.session_shift_scale
    << "\nseed=" << c.corpus.seed
    << "\n\n[ubm]\ncomponents=" << c.ubm.components << "\niterations=" << c.ubm.iterations
    << "\nmin_gain=" << c.ubm.min_gain << "\nvariance_floor_ratio=" << c.ubm.variance_floor_ratio
    << "\nseed=" << c.ubm.seed << "\n\n[map]\nrelevance=" << c.relevance
    << "\n\n[cohort]\nk=" << c.cohort.k << "\niterations=" << c.cohort.iterations
    << "\nrestarts=" << c.cohort.restarts << "\nseed=" << c.cohort.seed
    << "\ncost_curve_k_max=" << c.cost_curve_k_max << "\n\n[split]\ndev_fraction=" << c.dev_fraction
    << "\n\n[features]\ncondition=" << to_string(c.condition)
    << "\nimposters_per_utterance=" << c.imposters_per_utterance
    << "\n\n[decider]\nkind=" << to_string(c.decider)
    << "\n\n[svm]\nregularization=" << c.svm.regularization << "\nepochs=" << c.svm.epochs
    << "\ntolerance=" << c.svm.tolerance << "\nseed=" << c.svm.seed
    << "\n\n[mlp]\nepochs=" << c.mlp.epochs << "\nlearning_rate=" << c.mlp.learning_rate
    << "\nbatch_size=" << c.mlp.batch_size << "\nmomentum=" << c.mlp.momentum
    << "\nseed=" << c.mlp.seed
    << "\n\n[output]\ndir=" << c.out.string() << "\n";
  return o.str();
}

std::vector<SpeakerEntry> load_speakers(const fs::path& path) {
  require_file(path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  if (line != "speaker_id,partition") throw ParseError(path.string(), 1, "bad speakers header");
  std::vector<SpeakerEntry> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(path.string(), n, "expected 2 columns");
    SpeakerEntry e{line.substr(0, comma), line.substr(comma + 1)};
    if (e.partition != "dev" && e.partition != "eval")
      throw ParseError(path.string(), n, "unknown partition '" + e.partition + "'");
    out.push_back(std::move(e));
  }
  return out;
}

void stage_synth(const ExperimentConfig& cfg, const Workspace& ws) {
  log(cfg, "synth: generating corpus (seed " + std::to_string(cfg.corpus.seed) + ")");
  const Corpus corpus = generate_corpus(cfg.corpus);
  io::save_features(ws.ubm_train(), corpus.ubm_train);
  const std::size_t n_dev = dev_count(cfg);
  {
    std::ofstream out(ws.speakers());
    out << "speaker_id,partition\n";
    for (std::size_t s = 0; s < corpus.speakers.size(); ++s) {
      out << corpus.speakers[s] << ',' << (s < n_dev ? "dev" : "eval") << '\n';
      io::save_features(ws.enroll(corpus.speakers[s]), corpus.enrollments[s]);
    }
  }
  {
    std::ofstream out(ws.utterances());
    out << "utterance_id,speaker_id\n";
    for (const auto& t : corpus.tests) {
      out << t.id << ',' << t.speaker << '\n';
      io::save_features(ws.test(t.id), t.features);
    }
  }
  io::save_trials(ws.trials(), corpus.trials);
}

void stage_train_ubm(const ExperimentConfig& cfg, const Workspace& ws) {
  require_file(ws.ubm_train());
  const FeatureMatrix data = io::load_features(ws.ubm_train());
  log(cfg, "train-ubm: " + std::to_string(cfg.ubm.components) + " components on " +
               std::to_string(data.frames()) + " frames");
  std::vector<double> trace;
  const DiagGmm ubm = em_train(data, cfg.ubm, &trace);
  io::save_gmm(ws.ubm(), ubm);
  std::ofstream out(ws.models() / "ubm_loglik.csv");
  out << "iteration,total_loglik\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << i << ',' << io::format_double(trace[i]) << '\n';
}

void stage_adapt(const ExperimentConfig& cfg, const Workspace& ws) {
  require_file(ws.ubm());
  const DiagGmm ubm = io::load_gmm(ws.ubm());
  const auto speakers = load_speakers(ws.speakers());
  log(cfg, "adapt: " + std::to_string(speakers.size()) + " speakers, relevance " +
               io::format_double(cfg.relevance));
  std::vector<SpeakerModel> models(speakers.size());
  for (const auto& s : speakers) require_file(ws.enroll(s.id));
  parallel_for(speakers.size(), [&](std::size_t i) {
    models[i] = map_adapt(ubm, io::load_features(ws.enroll(speakers[i].id)), cfg.relevance,
                          ws.ubm().filename().string());
  });
  for (std::size_t i = 0; i < speakers.size(); ++i)
    io::save_speaker(ws.speaker_model(speakers[i].id), models[i]);
}

double stage_cluster(const ExperimentConfig& cfg, const Workspace& ws) {
  const auto speakers = load_speakers(ws.speakers());
  std::vector<std::string> ids;
  const auto models = gmms_of(load_partition_models(ws, speakers, "dev", &ids));
  KmeansOptions opt = cfg.cohort;
  log(cfg, "cluster: " + std::to_string(models.size()) + " dev models into K=" +
               std::to_string(opt.k));
  const KmeansResult result = kmeans_gmm(models, opt);
  io::save_cohort(ws.cohort(), result.cohort);
  std::ofstream out(ws.cluster_assignment());
  out << "speaker_id,cluster\n";
  for (std::size_t i = 0; i < ids.size(); ++i)
    out << ids[i] << ',' << result.assignment.labels[i] << '\n';
  out << "# J=" << io::format_double(result.assignment.cost) << '\n';
  log(cfg, "cluster: J = " + io::format_double(result.assignment.cost));
  return result.assignment.cost;
}

void stage_cost_curve(const ExperimentConfig& cfg, const Workspace& ws) {
  const auto speakers = load_speakers(ws.speakers());
  const auto models = gmms_of(load_partition_models(ws, speakers, "dev"));
  log(cfg, "cost-curve: k = 1.." + std::to_string(cfg.cost_curve_k_max));
  io::save_cost_curve_csv(ws.cost_curve(), cost_curve(models, cfg.cost_curve_k_max, cfg.cohort));
}

void stage_score(const ExperimentConfig& cfg, const Workspace& ws) {
  for (const auto& p : {ws.ubm(), ws.cohort(), ws.trials(), ws.utterances()}) require_file(p);
  const DiagGmm ubm = io::load_gmm(ws.ubm());
  const Cohort cohort = io::load_cohort(ws.cohort());
  const auto speakers = load_speakers(ws.speakers());
  const auto trials = io::load_trials(ws.trials());

  std::map<std::string, std::string> part_of;
  for (const auto& s : speakers) part_of[s.id] = s.partition;
  std::map<std::string, std::string> owner;  // utterance -> speaker
  {
    std::ifstream in(ws.utterances());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      owner[line.substr(0, comma)] = line.substr(comma + 1);
    }
  }

  for (const char* part : kParts) {
    std::vector<std::string> spk_ids;
    const auto models = load_partition_models(ws, speakers, part, &spk_ids);
    std::map<std::string, std::size_t> spk_index;
    for (std::size_t i = 0; i < spk_ids.size(); ++i) spk_index[spk_ids[i]] = i;

    std::vector<std::string> utts;
    std::map<std::string, std::size_t> utt_index;
    for (const auto& [utt, spk] : owner)
      if (part_of.at(spk) == part) {
        utt_index[utt] = utts.size();
        utts.push_back(utt);
      }
    log(cfg, std::string("score: ") + part + " partition, " + std::to_string(utts.size()) +
                 " utterances x " + std::to_string(models.size()) + " speakers");

    // Per utterance: UBM, cohort, then every speaker of the partition.
    std::vector<ScoreVector> base(utts.size());
    std::vector<std::vector<double>> claimed(utts.size());
    parallel_for(utts.size(), [&](std::size_t u) {
      const fs::path p = ws.test(utts[u]);
      require_file(p);
      const FeatureMatrix x = io::load_features(p);
      base[u].s_ubm = avg_loglik(ubm, x);
      for (const auto& c : cohort.centroids) base[u].s_cohort.push_back(avg_loglik(c, x));
      claimed[u].reserve(models.size());
      for (const auto& m : models) claimed[u].push_back(avg_loglik(m.gmm, x));
    });

    std::vector<io::ScoreRow> rows;
    for (const auto& t : trials) {
      const auto u = utt_index.find(t.utterance_id);
      const auto s = spk_index.find(t.claimed_speaker);
      if (u == utt_index.end() || s == spk_index.end()) continue;
      ScoreVector sv = base[u->second];
      sv.s_claimed = claimed[u->second][s->second];
      rows.push_back({t, std::move(sv)});
    }
    io::save_scores(ws.scores(part), rows);
  }
}

void stage_features(const ExperimentConfig& cfg, const Workspace& ws, Condition condition) {
  for (const char* part : kParts) {
    require_file(ws.scores(part));
    std::vector<io::FeatureRow> rows;
    for (const auto& r : io::load_scores(ws.scores(part)))
      rows.push_back({r.trial, r.scores.s_claimed, assemble(r.scores, condition).values});
    io::save_feature_rows(ws.features(part, condition), rows);
  }
  log(cfg, "features: " + to_string(condition));
}

void stage_train_decider(const ExperimentConfig& cfg, const Workspace& ws, Condition condition,
                         DeciderKind kind) {
  const fs::path in = ws.features("dev", condition);
  require_file(in);
  std::vector<FeatureTrial> trials;
  for (auto& r : io::load_feature_rows(in))
    trials.push_back({r.trial, {condition, std::move(r.values)}, r.s_claimed});
  const auto kept = imbalance_filter(trials, cfg.imposters_per_utterance);
  LabeledSet set;
  for (const auto& t : kept) set.add(t.feature.values, t.trial.label);
  log(cfg, "train-decider: " + to_string(kind) + " " + to_string(condition) + " on " +
               std::to_string(set.rows()) + " dev trials");
  if (kind == DeciderKind::kSvm)
    io::save_decider(ws.decider(kind, condition), train_svm(set, cfg.svm).model);
  else
    io::save_decider(ws.decider(kind, condition), train_mlp(set, cfg.mlp));
}

std::pair<double, double> stage_evaluate(const ExperimentConfig& cfg, const Workspace& ws,
                                         Condition condition, DeciderKind kind) {
  const fs::path model_path = ws.decider(kind, condition);
  const fs::path feat_path = ws.features("eval", condition);
  require_file(model_path);
  require_file(feat_path);
  const DecisionModel model = io::load_decider(model_path);
  const auto rows = io::load_feature_rows(feat_path);
  std::vector<double> scores;
  std::vector<TrialLabel> labels;
  for (const auto& r : rows) {
    scores.push_back(predict_score(model, r.values));
    labels.push_back(r.trial.label);
  }
  const EvalReport report = compute_eer(scores, labels);
  const std::string stem = to_string(kind) + "_" + to_string(condition);
  io::save_report(ws.reports() / (stem + ".json"), report);
  io::save_det_csv(ws.reports() / (stem + "_det.csv"), report.det_points);

  // Baseline, rank histograms and r-diff vectors from the raw scores.
  require_file(ws.scores("eval"));
  const auto eval_scores = io::load_scores(ws.scores("eval"));
  std::vector<double> llrs;
  std::vector<TrialLabel> llr_labels;
  std::vector<std::size_t> pos_gen, pos_imp;
  std::size_t k = 0;
  {
    std::ofstream rd(ws.reports() / "rank_diff_eval.csv");
    for (const auto& r : eval_scores) {
      k = r.scores.s_cohort.size();
      llrs.push_back(r.scores.llr());
      llr_labels.push_back(r.trial.label);
      (r.trial.label == TrialLabel::kGenuine ? pos_gen : pos_imp)
          .push_back(feat_rank_position(r.scores));
      rd << r.trial.utterance_id << ',' << r.trial.claimed_speaker << ',' << to_string(r.trial.label);
      for (double v : feat_rank_diff(r.scores)) rd << ',' << io::format_double(v);
      rd << '\n';
    }
  }
  const EvalReport baseline = compute_eer(llrs, llr_labels);
  io::save_report(ws.reports() / "baseline.json", baseline);
  io::save_det_csv(ws.reports() / "baseline_det.csv", baseline.det_points);
  io::save_histogram_csv(ws.reports() / "rank_histogram_eval.csv", rank_histogram(pos_gen, k + 1),
                         rank_histogram(pos_imp, k + 1));

  if (!fs::exists(ws.cost_curve()) && fs::exists(ws.speakers())) {
    const auto speakers = load_speakers(ws.speakers());
    const bool have_models = std::all_of(speakers.begin(), speakers.end(), [&](const auto& s) {
      return s.partition != "dev" || fs::exists(ws.speaker_model(s.id));
    });
    if (have_models) stage_cost_curve(cfg, ws);
  }

  log(cfg, "evaluate: " + stem + " EER " + io::format_double(report.eer) + ", baseline " +
               io::format_double(baseline.eer));
  return {report.eer, baseline.eer};
}

std::vector<SummaryRow> run_all(const ExperimentConfig& cfg, const Workspace& ws) {
  cfg.validate();
  fs::create_directories(ws.root);
  {
    std::ofstream out(ws.root / "config.ini");
    out << dump_config(cfg);
  }
  stage_synth(cfg, ws);
  stage_train_ubm(cfg, ws);
  stage_adapt(cfg, ws);
  stage_cluster(cfg, ws);
  stage_cost_curve(cfg, ws);
  stage_score(cfg, ws);

  std::vector<SummaryRow> summary;
  for (Condition c : kAllConditions) {
    stage_features(cfg, ws, c);
    for (DeciderKind kind : {DeciderKind::kSvm, DeciderKind::kMlp}) {
      stage_train_decider(cfg, ws, c, kind);
      const auto [eer, base] = stage_evaluate(cfg, ws, c, kind);
      summary.push_back({c, kind, eer, base});
    }
  }
  {
    std::ofstream out(ws.summary());
    out << "condition,decider,eer,baseline_eer\n";
    for (const auto& r : summary)
      out << to_string(r.condition) << ',' << to_string(r.decider) << ','
          << io::format_double(r.eer) << ',' << io::format_double(r.baseline_eer) << '\n';
  }

  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(ws.root))
    if (e.is_regular_file() && e.path() != ws.manifest()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::ofstream out(ws.manifest());
  for (const auto& f : files)
    out << sha256_file(f) << "  " << fs::relative(f, ws.root).generic_string() << '\n';
  log(cfg, "run-all: " + std::to_string(files.size()) + " outputs hashed into " +
               ws.manifest().string());
  return summary;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace cohortsv
