// Copyright 2026 The KBQA Authors.
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

#include "kbqa/pipeline.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kbqa {

namespace fs = std::filesystem;

// ----------------------------------------------------------------------------
// Config.

namespace {

int ToInt(const std::string &key, const std::string &v) {
  try {
    size_t used = 0;
    int x = std::stoi(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception &) {
  }
  throw Error("config key '" + key + "' expects an integer, got '" + v + "'");
}

double ToDouble(const std::string &key, const std::string &v) {
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception &) {
  }
  throw Error("config key '" + key + "' expects a number, got '" + v + "'");
}

std::string Fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

void Config::Set(const std::string &key, const std::string &value) {
  if (key == "kb") kb = value;
  else if (key == "train_questions") train_questions = value;
  else if (key == "test_questions") test_questions = value;
  else if (key == "corpus") corpus = value;
  else if (key == "model_dir") model_dir = value;
  else if (key == "embeddings") embeddings = value;
  else if (key == "decomposition_rules") decomposition_rules = value;
  else if (key == "seed") {
    try {
      seed = std::stoull(value);
    } catch (const std::exception &) {
      throw Error("config key 'seed' expects a non-negative integer, got '" + value + "'");
    }
    mccnn.seed = rank.seed = refine.seed = seed;
  } else if (key == "dev_fraction") {
    dev_fraction = ToDouble(key, value);
    if (dev_fraction < 0 || dev_fraction >= 1) throw Error("dev_fraction must be in [0, 1)");
  } else if (key == "linker_top_k") linker.top_k = ToInt(key, value);
  else if (key == "linker_alpha") linker.alpha = ToDouble(key, value);
  else if (key == "mccnn_embedding_dim") mccnn.embedding_dim = ToInt(key, value);
  else if (key == "mccnn_window") mccnn.window = ToInt(key, value);
  else if (key == "mccnn_hidden1") mccnn.hidden1 = ToInt(key, value);
  else if (key == "mccnn_hidden2") mccnn.hidden2 = ToInt(key, value);
  else if (key == "mccnn_channels") mccnn.channels = ParseChannels(value);
  else if (key == "mccnn_learning_rate") mccnn.learning_rate = ToDouble(key, value);
  else if (key == "mccnn_l2") mccnn.l2 = ToDouble(key, value);
  else if (key == "mccnn_epochs") mccnn.epochs = ToInt(key, value);
  else if (key == "max_relations") pairs.max_relations = ToInt(key, value);
  else if (key == "rank_C") rank.C = ToDouble(key, value);
  else if (key == "rank_epochs") rank.epochs = ToInt(key, value);
  else if (key == "refine_C") refine.C = ToDouble(key, value);
  else if (key == "refine_epochs") refine.epochs = ToInt(key, value);
  else if (key == "refine_min_pair_count") refine.min_pair_count = ToInt(key, value);
  else if (key == "union_top_pairs") union_top_pairs = ToInt(key, value);
  else throw Error("unknown config key '" + key + "'");
}

Config Config::Parse(const std::string &text, const std::string &base_dir) {
  static const std::set<std::string> kPathKeys = {"kb", "train_questions", "test_questions", "corpus",
                                                  "model_dir", "embeddings", "decomposition_rules"};
  Config c;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (Trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + " has no '='");
    std::string key = Trim(line.substr(0, eq)), value = Trim(line.substr(eq + 1));
    if (kPathKeys.count(key) && !value.empty() && !base_dir.empty() && fs::path(value).is_relative()) {
      value = (fs::path(base_dir) / value).lexically_normal().string();
    }
    c.Set(key, value);
  }
  return c;
}

Config Config::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string base = fs::path(path).parent_path().string();
  return Parse(buf.str(), base.empty() ? "." : base);
}

std::string Config::ToString() const {
  std::ostringstream o;
  o << "kb = " << kb << "\ntrain_questions = " << train_questions << "\ntest_questions = " << test_questions
    << "\ncorpus = " << corpus << "\nmodel_dir = " << model_dir << "\nembeddings = " << embeddings
    << "\ndecomposition_rules = " << decomposition_rules << "\nseed = " << seed
    << "\ndev_fraction = " << Fmt(dev_fraction) << "\nlinker_top_k = " << linker.top_k
    << "\nlinker_alpha = " << Fmt(linker.alpha) << "\nmccnn_embedding_dim = " << mccnn.embedding_dim
    << "\nmccnn_window = " << mccnn.window << "\nmccnn_hidden1 = " << mccnn.hidden1
    << "\nmccnn_hidden2 = " << mccnn.hidden2 << "\nmccnn_channels = " << ChannelsName(mccnn.channels)
    << "\nmccnn_learning_rate = " << Fmt(mccnn.learning_rate) << "\nmccnn_l2 = " << Fmt(mccnn.l2)
    << "\nmccnn_epochs = " << mccnn.epochs << "\nmax_relations = " << pairs.max_relations
    << "\nrank_C = " << Fmt(rank.C) << "\nrank_epochs = " << rank.epochs << "\nrefine_C = " << Fmt(refine.C)
    << "\nrefine_epochs = " << refine.epochs << "\nrefine_min_pair_count = " << refine.min_pair_count
    << "\nunion_top_pairs = " << union_top_pairs << "\n";
  return o.str();
}

// ----------------------------------------------------------------------------
// Data.

std::vector<Question> LoadDataset(const std::string &path) {
  if (fs::path(path).extension() == ".conll") return LoadQuestions(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::map<std::string, Question> parsed;
  std::string conll = fs::path(path).replace_extension(".conll").string();
  if (fs::exists(conll)) {
    for (auto &q : LoadQuestions(conll)) {
      std::string id = q.qid;
      if (!parsed.emplace(id, std::move(q)).second) throw Error("duplicate qid " + id + " in " + conll);
    }
  }
  std::vector<Question> all;
  for (const auto &[id, q] : parsed) all.push_back(q);
  auto lexicon = BuildPosLexicon(all);

  std::vector<Question> out;
  std::set<std::string> seen;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (Trim(line).empty() || line[0] == '#') continue;
    auto f = Split(line, '\t');
    auto where = path + ":" + std::to_string(lineno);
    if (f.size() != 4 || f[0].empty()) throw Error("malformed line at " + where);
    if (!seen.insert(f[0]).second) throw Error("duplicate qid " + f[0] + " at " + where);
    auto it = parsed.find(f[0]);
    Question q = it != parsed.end() ? it->second : RuleBasedParse(f[0], f[1], lexicon);
    if (Trim(f[2]) == "-") {
      q.gold_answers.reset();
    } else {
      EntitySet gold;
      for (const auto &g : Split(f[2], ',')) {
        if (!Trim(g).empty()) gold.insert(Trim(g));
      }
      q.gold_answers = gold;
    }
    if (Trim(f[3]).empty() || Trim(f[3]) == "-") {
      q.gold_topic.reset();
    } else {
      q.gold_topic = Trim(f[3]);
    }
    out.push_back(std::move(q));
  }
  return out;
}

void SaveDataset(const std::string &records_path, const std::vector<Question> &questions) {
  std::ofstream out(records_path);
  if (!out) throw Error("cannot write " + records_path);
  for (const auto &q : questions) {
    std::string gold = "-";
    if (q.gold_answers) gold = Join(std::vector<std::string>(q.gold_answers->begin(), q.gold_answers->end()), ",");
    out << q.qid << '\t' << q.raw << '\t' << gold << '\t' << q.gold_topic.value_or("-") << '\n';
  }
  SaveQuestions(fs::path(records_path).replace_extension(".conll").string(), questions);
}

bool IsDevQuestion(const std::string &qid, double dev_fraction) {
  return static_cast<double>(StableHash(qid) % 100) < dev_fraction * 100;
}

// ----------------------------------------------------------------------------
// Modes.

std::string ModeName(Mode m) {
  switch (m) {
    case Mode::kStructured: return "structured";
    case Mode::kStructuredJoint: return "structured_joint";
    case Mode::kStructuredUnstructured: return "structured_unstructured";
    case Mode::kStructuredJointUnstructured: return "structured_joint_unstructured";
  }
  return "?";
}

Mode ParseMode(const std::string &name) {
  for (Mode m : {Mode::kStructured, Mode::kStructuredJoint, Mode::kStructuredUnstructured,
                 Mode::kStructuredJointUnstructured}) {
    if (ModeName(m) == name) return m;
  }
  throw Error("unknown mode '" + name +
              "' (structured, structured_joint, structured_unstructured, structured_joint_unstructured)");
}

bool UsesJoint(Mode m) { return m == Mode::kStructuredJoint || m == Mode::kStructuredJointUnstructured; }
bool UsesText(Mode m) { return m == Mode::kStructuredUnstructured || m == Mode::kStructuredJointUnstructured; }

System LoadSystem(const Config &config) {
  System s;
  s.config = config;
  s.kb = LoadKBDir(config.kb);
  if (!config.corpus.empty()) s.corpus = LoadCorpus(config.corpus);
  if (!config.decomposition_rules.empty()) s.rules = DecompositionRules::Load(config.decomposition_rules);
  fs::path dir(config.model_dir);
  if (fs::exists(dir / "mccnn.model")) s.models.relations = RelationExtractor::Load((dir / "mccnn.model").string());
  if (fs::exists(dir / "ranker.model")) s.models.joint = JointModel::Load((dir / "ranker.model").string());
  if (fs::exists(dir / "refine.model")) s.models.refine = RefineModel::Load((dir / "refine.model").string());
  if (!config.train_questions.empty() && fs::exists(config.train_questions)) {
    s.lexicon = BuildPosLexicon(LoadDataset(config.train_questions));
  }
  return s;
}

void RequireModels(const System &system, Mode mode) {
  if (!system.models.relations) throw Error("mode " + ModeName(mode) + " needs mccnn.model; run train-re");
  if (UsesJoint(mode) && !system.models.joint) {
    throw Error("mode " + ModeName(mode) + " needs ranker.model; run train-joint");
  }
  if (UsesText(mode) && !system.models.refine) {
    throw Error("mode " + ModeName(mode) + " needs refine.model; run train-refine");
  }
}

namespace {

const RelationDocModel &Docs(const System &s) {
  static const RelationDocModel kEmpty;
  return s.models.joint ? s.models.joint->docs : kEmpty;
}

SubQuestionTrace AnswerSubQuestion(const System &system, const Question &q, Mode mode) {
  SubQuestionTrace t;
  t.qid = q.qid;
  t.text = q.raw;
  if (!q.answerable()) {
    t.reason = kNoQword;
    return t;
  }
  if (FindMentionSpans(q).empty()) {
    t.reason = kNoMention;
    return t;
  }
  auto entities = LinkAll(system.kb, q, MentionPatterns::Default(), system.config.linker);
  if (entities.empty()) {
    t.reason = kNoLink;
    return t;
  }
  const RelationExtractor &rx = *system.models.relations;
  int keep = 1;
  if (UsesJoint(mode)) {
    auto pairs = GeneratePairs(system.kb, Docs(system), rx, q, entities, system.config.pairs);
    t.pairs = RankPairs(system.models.joint->ranker, pairs);
    if (UsesText(mode)) keep = system.config.union_top_pairs;
  } else {
    // Pipeline: best-linked entity, then its best relation.
    auto top = std::max_element(entities.begin(), entities.end(), [](const auto &a, const auto &b) {
      return a.link_score < b.link_score;
    });
    auto best = *top;
    for (const auto &e : entities) {
      if (e.link_score == best.link_score) {
        best = e;
        break;
      }
    }
    t.pairs = GeneratePairs(system.kb, Docs(system), rx, q, {best}, system.config.pairs);
  }
  if (t.pairs.empty()) {
    t.reason = kNoRelation;
    return t;
  }
  t.chosen = std::min<int>(keep, t.pairs.size());
  for (int i = 0; i < t.chosen; ++i) t.candidates.insert(t.pairs[i].answers.begin(), t.pairs[i].answers.end());
  if (UsesText(mode)) {
    // Evidence comes from the best pair's topic. Its answers are filtered
    // with the usual fallbacks; answers only lower-ranked pairs contribute
    // need a positive sentence.
    const auto &best = t.pairs[0];
    const EntityId &topic = best.entity.entity;
    t.refine = RefineAnswers(*system.models.refine, system.kb, system.corpus, q, best.answers, topic);
    t.answers = t.refine->kept;
    for (int i = 1; i < t.chosen; ++i) {
      EntitySet extra;
      for (const auto &c : t.pairs[i].answers) {
        if (!best.answers.count(c) && !t.refine->decisions.count(c)) extra.insert(c);
      }
      if (extra.empty()) continue;
      auto r = RefineAnswers(*system.models.refine, system.kb, system.corpus, q, extra, topic);
      for (const auto &[c, d] : r.decisions) {
        t.refine->decisions.emplace(c, d);
        if (d == EvidenceDecision::kPositive) t.answers.insert(c);
      }
    }
  } else {
    t.answers = t.candidates;
  }
  return t;
}

}  // namespace

AnswerSet Answer(const System &system, const Question &q, Mode mode) {
  RequireModels(system, mode);
  AnswerSet a;
  a.qid = q.qid;
  if (!q.answerable()) {
    a.reason = kNoQword;
    return a;
  }
  std::optional<EntitySet> result;
  for (const auto &sub : Decompose(q, system.rules)) {
    a.subquestions.push_back(AnswerSubQuestion(system, sub, mode));
    const auto &t = a.subquestions.back();
    if (!t.reason.empty()) continue;  // imposes no constraint
    if (!result) {
      result = t.answers;
    } else {
      EntitySet both;
      std::set_intersection(result->begin(), result->end(), t.answers.begin(), t.answers.end(),
                            std::inserter(both, both.end()));
      result = std::move(both);
    }
  }
  if (result) {
    a.predicted = std::move(*result);
  } else {
    a.reason = a.subquestions.empty() ? kNoMention : a.subquestions.front().reason;
  }
  return a;
}

double AverageF1(const std::vector<double> &scores) {
  if (scores.empty()) return 0.0;
  double sum = 0;
  for (double s : scores) sum += s;
  return sum / scores.size();
}

EvalReport Evaluate(const System &system, const std::vector<Question> &questions, Mode mode) {
  RequireModels(system, mode);
  EvalReport r;
  r.mode = mode;
  std::vector<double> scores;
  for (const auto &q : questions) {
    EvalRecord rec;
    rec.qid = q.qid;
    if (!q.gold_answers) {
      rec.excluded = true;
      rec.reason = "NO_GOLD";
      r.records.push_back(rec);
      continue;
    }
    AnswerSet a = Answer(system, q, mode);
    rec.predicted = a.predicted;
    rec.gold = *q.gold_answers;
    rec.f1 = F1Score(rec.predicted, rec.gold);
    rec.reason = a.reason;
    scores.push_back(rec.f1);
    r.records.push_back(rec);
  }
  r.evaluated = static_cast<int>(scores.size());
  r.average_f1 = AverageF1(scores);
  return r;
}

std::string EvalReport::ToJsonLines() const {
  using nlohmann::json;
  int excluded = 0;
  for (const auto &r : records) excluded += r.excluded;
  std::string out = json{{"mode", ModeName(mode)}, {"average_f1", average_f1}, {"evaluated", evaluated},
                         {"excluded", excluded}}
                        .dump() +
                    "\n";
  for (const auto &r : records) {
    json j = {{"qid", r.qid}, {"predicted", r.predicted}, {"gold", r.gold}, {"f1", r.f1}, {"reason", r.reason}};
    if (r.excluded) j["excluded"] = true;
    out += j.dump() + "\n";
  }
  return out;
}

// ----------------------------------------------------------------------------
// Training.

std::string StageName(Stage s) {
  switch (s) {
    case Stage::kSurrogate: return "surrogate";
    case Stage::kRelations: return "relations";
    case Stage::kJoint: return "joint";
    case Stage::kRefine: return "refine";
  }
  return "?";
}

std::vector<Question> TrainingQuestions(const Config &config) {
  std::vector<Question> out;
  for (auto &q : LoadDataset(config.train_questions)) {
    if (!IsDevQuestion(q.qid, config.dev_fraction)) out.push_back(std::move(q));
  }
  return out;
}

namespace {

struct SurrogateLabel {
  std::string qid;
  EntityId topic;
  int start = 0, end = 0;
  RelationPath relation;
};

// The gold topic (or, failing that, the linked entity with the best
// surrogate relation) with the longest mention that links to it.
std::optional<SurrogateLabel> LabelQuestion(const KBGraph &kb, const Config &config, const Question &q) {
  if (!q.gold_answers || !q.answerable()) return std::nullopt;
  LinkerOptions wide = config.linker;
  wide.top_k = std::max(wide.top_k, 1000);
  auto linked = LinkAll(kb, q, MentionPatterns::Default(), wide);
  std::optional<SurrogateLabel> best;
  double best_f1 = -1;
  for (const auto &c : linked) {
    if (q.gold_topic && c.entity != *q.gold_topic) continue;
    auto rel = SurrogateGoldRelation(kb, c.entity, *q.gold_answers);
    if (!rel) continue;
    double f1 = F1Score(kb.Query(c.entity, *rel), *q.gold_answers);
    int len = c.mention.end - c.mention.start;
    if (!best || f1 > best_f1 || (f1 == best_f1 && best->topic == c.entity && len > best->end - best->start)) {
      best = SurrogateLabel{q.qid, c.entity, c.mention.start, c.mention.end, *rel};
      best_f1 = f1;
    }
  }
  return best;
}

void WriteSurrogates(const std::string &path, const std::vector<SurrogateLabel> &labels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto &l : labels) {
    out << l.qid << '\t' << l.topic << '\t' << l.start << '-' << l.end << '\t' << l.relation.ToString() << '\n';
  }
}

std::vector<SurrogateLabel> ReadSurrogates(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<SurrogateLabel> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    auto f = Split(line, '\t');
    auto dash = f.size() == 4 ? f[2].find('-') : std::string::npos;
    if (dash == std::string::npos) throw Error("malformed line at " + path + ":" + std::to_string(lineno));
    out.push_back({f[0], f[1], std::stoi(f[2].substr(0, dash)), std::stoi(f[2].substr(dash + 1)),
                   RelationPath::Parse(f[3])});
  }
  return out;
}

template <typename Fn>
void RunStage(Stage stage, Fn &&fn) {
  try {
    fn();
  } catch (const std::exception &e) {
    throw Error("stage " + StageName(stage) + " failed: " + e.what());
  }
}

std::string Fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

void TrainAll(const Config &config, const TrainOptions &options) {
  auto forced = [&](Stage s) { return std::find(options.force.begin(), options.force.end(), s) != options.force.end(); };
  auto done = [&](Stage s) { return options.until && *options.until == s; };
  const fs::path dir(config.model_dir);
  fs::create_directories(dir);
  const std::string surrogate_path = (dir / "surrogate.tsv").string();
  const std::string mccnn_path = (dir / "mccnn.model").string();
  const std::string ranker_path = (dir / "ranker.model").string();
  const std::string refine_path = (dir / "refine.model").string();

  KBGraph kb = LoadKBDir(config.kb);
  std::vector<Question> train = TrainingQuestions(config);
  std::map<std::string, const Question *> by_id;
  for (const auto &q : train) by_id[q.qid] = &q;
  std::vector<std::string> report = {"training questions: " + std::to_string(train.size())};

  std::vector<SurrogateLabel> labels;
  RunStage(Stage::kSurrogate, [&] {
    if (!forced(Stage::kSurrogate) && fs::exists(surrogate_path)) {
      labels = ReadSurrogates(surrogate_path);
      options.log("surrogate: reusing " + surrogate_path);
    } else {
      for (const auto &q : train) {
        if (auto l = LabelQuestion(kb, config, q)) {
          labels.push_back(*l);
        } else {
          options.log("surrogate: no usable topic/relation for " + q.qid + ", skipped");
        }
      }
      WriteSurrogates(surrogate_path, labels);
      options.log("surrogate: labelled " + std::to_string(labels.size()) + " questions");
    }
    std::erase_if(labels, [&](const SurrogateLabel &l) { return !by_id.count(l.qid); });
    if (labels.empty()) throw Error("no training question could be labelled");
  });
  report.push_back("surrogate labels: " + std::to_string(labels.size()));

  if (done(Stage::kSurrogate)) return;

  RelationExtractor rx;
  RunStage(Stage::kRelations, [&] {
    if (!forced(Stage::kRelations) && fs::exists(mccnn_path)) {
      rx = RelationExtractor::Load(mccnn_path);
      options.log("relations: reusing " + mccnn_path);
      report.push_back("mccnn: reused");
      return;
    }
    std::vector<RelationExample> examples;
    for (const auto &l : labels) {
      const Question &q = *by_id.at(l.qid);
      examples.push_back({q, MakeSpan(q, l.start, l.end), l.relation});
    }
    std::map<std::string, std::vector<double>> pretrained;
    bool have_embeddings = !config.embeddings.empty() && fs::exists(config.embeddings);
    if (have_embeddings) {
      pretrained = LoadEmbeddings(config.embeddings, config.mccnn.embedding_dim);
    } else {
      options.log("relations: no embeddings file" +
                  (config.embeddings.empty() ? std::string() : " at " + config.embeddings) +
                  "; using random initialisation");
    }
    MccnnTrainReport r;
    rx = RelationExtractor::Train(examples, config.mccnn, have_embeddings ? &pretrained : nullptr, &r);
    rx.Save(mccnn_path);
    std::string last = r.epoch_loss.empty() ? "n/a" : Fixed(r.epoch_loss.back());
    std::string acc = r.epoch_accuracy.empty() ? "n/a" : Fixed(r.epoch_accuracy.back());
    options.log("relations: " + std::to_string(examples.size()) + " examples, " +
                std::to_string(rx.labels().size()) + " relation paths, final loss " + last);
    report.push_back("mccnn: examples " + std::to_string(examples.size()) + ", classes " +
                     std::to_string(rx.labels().size()) + ", final loss " + last + ", train accuracy " + acc);
  });

  if (done(Stage::kRelations)) return;

  JointModel joint;
  RunStage(Stage::kJoint, [&] {
    if (!forced(Stage::kJoint) && fs::exists(ranker_path)) {
      joint = JointModel::Load(ranker_path);
      options.log("joint: reusing " + ranker_path);
      report.push_back("ranker: reused");
      return;
    }
    std::vector<RelationDocExample> doc_examples;
    for (const auto &l : labels) doc_examples.push_back({by_id.at(l.qid), l.relation});
    joint.docs = RelationDocModel::Build(kb, doc_examples);
    std::vector<std::vector<ScoredPair>> groups;
    for (const auto &l : labels) {
      const Question &q = *by_id.at(l.qid);
      auto entities = LinkAll(kb, q, MentionPatterns::Default(), config.linker);
      auto pairs = GeneratePairs(kb, joint.docs, rx, q, entities, config.pairs);
      MakeRankLabels(&pairs, l.topic, l.relation);
      groups.push_back(std::move(pairs));
    }
    joint.ranker = TrainRankSvm(groups, config.rank);
    joint.Save(ranker_path);
    std::string acc = Fixed(PairwiseAccuracy(joint.ranker, groups));
    options.log("joint: " + std::to_string(groups.size()) + " groups, pairwise accuracy " + acc);
    report.push_back("ranker: groups " + std::to_string(groups.size()) + ", pairwise accuracy " + acc);
  });

  if (done(Stage::kJoint)) return;

  RunStage(Stage::kRefine, [&] {
    if (!forced(Stage::kRefine) && fs::exists(refine_path)) {
      options.log("refine: reusing " + refine_path);
      report.push_back("refine: reused");
      return;
    }
    Corpus corpus = config.corpus.empty() ? Corpus{} : LoadCorpus(config.corpus);
    std::vector<LabeledEvidence> examples;
    for (const auto &l : labels) {
      const Question &q = *by_id.at(l.qid);
      // The candidates inference would produce, plus the gold pair's.
      auto entities = LinkAll(kb, q, MentionPatterns::Default(), config.linker);
      auto ranked = RankPairs(joint.ranker, GeneratePairs(kb, joint.docs, rx, q, entities, config.pairs));
      EntitySet candidates = kb.Query(l.topic, l.relation);
      for (int i = 0; i < std::min<int>(config.union_top_pairs, ranked.size()); ++i) {
        candidates.insert(ranked[i].answers.begin(), ranked[i].answers.end());
      }
      auto ev = CollectEvidence(kb, corpus, q, l.topic, candidates);
      examples.insert(examples.end(), ev.begin(), ev.end());
    }
    RefineModel model = TrainRefine(examples, config.refine);
    model.Save(refine_path);
    std::string acc = Fixed(EvidenceAccuracy(model, examples));
    options.log("refine: " + std::to_string(examples.size()) + " evidence sentences, accuracy " + acc);
    report.push_back("refine: sentences " + std::to_string(examples.size()) + ", pairs " +
                     std::to_string(model.dictionary().size()) + ", train accuracy " + acc);
  });

  std::ofstream out((dir / "training_report.txt").string());
  for (const auto &line : report) out << line << '\n';
}

}  // namespace kbqa
