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

#include "kbqa/joint.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace kbqa {

const std::array<std::string, kNumPairFeatures> &PairFeatureNames() {
  static const std::array<std::string, kNumPairFeatures> names = {
      "el_score", "mention_name_overlap", "desc_overlap", "re_score",
      "tfidf_sum", "frag3_in_question", "qword_anstype_cooc", "answer_count"};
  return names;
}

namespace {

bool IsContentTag(const std::string &pos) {
  return StartsWith(pos, "NN") || StartsWith(pos, "VB") || StartsWith(pos, "JJ");
}

bool IsStopword(const std::string &w) {
  static const std::set<std::string> kStop = {
      "be", "is", "am", "are", "was", "were", "been", "being", "do", "does", "did", "have", "has", "had",
      "get", "got", "the", "a", "an", "of", "in", "on", "for", "to", "'s", "s"};
  return kStop.count(w) > 0;
}

std::string QuestionWord(const Question &q) {
  return q.qword_index > 0 ? Lowercase(q.tree.token(q.qword_index).surface) : "";
}

}  // namespace

std::vector<std::string> DocumentWords(const Question &q) {
  std::vector<std::string> out;
  for (const auto &t : q.tree.tokens()) {
    if (NormalizeToken(t.surface).empty()) continue;
    out.push_back(Lowercase(t.lemma));
  }
  return out;
}

std::string DominantAnswerType(const KBGraph &kb, const EntitySet &answers) {
  std::map<std::string, int> count;
  for (const auto &a : answers) {
    std::string t = kb.AnswerType(a);
    if (!t.empty()) ++count[t];
  }
  std::string best;
  int best_count = 0;
  for (const auto &[t, c] : count) {
    if (c > best_count) {
      best = t;
      best_count = c;
    }
  }
  return best;
}

// ----------------------------------------------------------------------------
// Relation documents.

RelationDocModel RelationDocModel::Build(const KBGraph &kb, const std::vector<RelationDocExample> &examples) {
  if (examples.empty()) throw Error("cannot build relation documents from an empty training set");
  RelationDocModel m;
  for (const auto &ex : examples) {
    const Question &q = *ex.question;
    auto &doc = m.tf_[ex.relation];
    for (const auto &w : DocumentWords(q)) ++doc[w];
    std::string qw = QuestionWord(q);
    if (qw.empty() || !q.gold_answers) continue;
    std::string type = DominantAnswerType(kb, *q.gold_answers);
    if (type.empty()) continue;
    ++m.cooc_[qw][type];
    ++m.qword_count_[qw];
    m.types_.insert(type);
  }
  for (const auto &[r, doc] : m.tf_) {
    for (const auto &[w, c] : doc) ++m.df_[w];
  }
  return m;
}

int RelationDocModel::tf(const RelationPath &r, const std::string &word) const {
  auto it = tf_.find(r);
  if (it == tf_.end()) return 0;
  auto jt = it->second.find(word);
  return jt == it->second.end() ? 0 : jt->second;
}

int RelationDocModel::df(const std::string &word) const {
  auto it = df_.find(word);
  return it == df_.end() ? 0 : it->second;
}

double RelationDocModel::idf(const std::string &word) const {
  return std::max(0.0, std::log((1.0 + num_docs()) / (1.0 + df(word))));
}

double RelationDocModel::TfIdfSum(const Question &q, const RelationPath &r) const {
  double sum = 0;
  for (const auto &w : DocumentWords(q)) sum += tf(r, w) * idf(w);
  return sum;
}

double RelationDocModel::Cooccurrence(const std::string &qword, const std::string &answer_type) const {
  double types = std::max<size_t>(1, types_.size());
  int joint = 0, marginal = 0;
  if (auto it = qword_count_.find(qword); it != qword_count_.end()) marginal = it->second;
  if (auto it = cooc_.find(qword); it != cooc_.end()) {
    if (auto jt = it->second.find(answer_type); jt != it->second.end()) joint = jt->second;
  }
  return (joint + 1.0) / (marginal + types);
}

void RelationDocModel::Write(std::ostream &out) const {
  out << "relation_docs\n";
  for (const auto &[r, doc] : tf_) {
    out << "doc " << r.ToString() << ' ' << doc.size() << '\n';
    for (const auto &[w, c] : doc) out << w << ' ' << c << '\n';
  }
  for (const auto &[qw, row] : cooc_) {
    for (const auto &[t, c] : row) out << "cooc " << qw << ' ' << t << ' ' << c << '\n';
  }
  out << "end_relation_docs\n";
}

RelationDocModel RelationDocModel::Read(std::istream &in) {
  RelationDocModel m;
  std::string line;
  if (!std::getline(in, line) || line != "relation_docs") throw Error("expected relation_docs section");
  while (std::getline(in, line)) {
    if (line == "end_relation_docs") {
      for (const auto &[r, doc] : m.tf_) {
        for (const auto &[w, c] : doc) ++m.df_[w];
      }
      return m;
    }
    auto f = SplitWhitespace(line);
    if (f.size() == 3 && f[0] == "doc") {
      auto &doc = m.tf_[RelationPath::Parse(f[1])];
      int n = std::stoi(f[2]);
      for (int i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw Error("truncated relation document");
        auto g = SplitWhitespace(line);
        if (g.size() != 2) throw Error("bad relation document line '" + line + "'");
        doc[g[0]] = std::stoi(g[1]);
      }
    } else if (f.size() == 4 && f[0] == "cooc") {
      int c = std::stoi(f[3]);
      m.cooc_[f[1]][f[2]] = c;
      m.qword_count_[f[1]] += c;
      m.types_.insert(f[2]);
    } else {
      throw Error("bad relation_docs line '" + line + "'");
    }
  }
  throw Error("unterminated relation_docs section");
}

// ----------------------------------------------------------------------------
// Features.

PairFeatures FeaturizePair(const KBGraph &kb, const RelationDocModel &docs, const Question &q,
                           const EntityCandidate &e, const RelationPath &r, double re_score,
                           EntitySet *answers) {
  PairFeatures f{};
  const Entity &entity = kb.Get(e.entity);
  f[kElScore] = e.link_score;

  std::set<std::string> name_tokens;
  for (const auto &t : SplitWhitespace(entity.name)) name_tokens.insert(NormalizeToken(t));
  std::set<std::string> mention_tokens;
  for (int i = e.mention.start; i <= e.mention.end && i <= q.tree.size(); ++i) {
    std::string t = NormalizeToken(q.tree.token(i).surface);
    if (!t.empty()) mention_tokens.insert(t);
  }
  f[kMentionNameOverlap] = std::count_if(mention_tokens.begin(), mention_tokens.end(),
                                         [&](const std::string &t) { return name_tokens.count(t) > 0; });

  // Each distinct question content word contributes every occurrence of it
  // in the description.
  std::map<std::string, int> desc_count;
  for (const auto &t : SplitWhitespace(entity.description)) ++desc_count[NormalizeToken(t)];
  std::set<std::pair<std::string, std::string>> content;
  for (const auto &t : q.tree.tokens()) {
    if (t.index == q.qword_index || e.mention.Contains(t.index) || !IsContentTag(t.pos)) continue;
    std::string form = NormalizeToken(t.surface), lemma = Lowercase(t.lemma);
    if (IsStopword(form) || IsStopword(lemma)) continue;
    content.emplace(form, lemma);
  }
  std::set<std::string> counted;
  for (const auto &[form, lemma] : content) {
    for (const auto &w : {form, lemma}) {
      if (counted.insert(w).second && desc_count.count(w)) f[kDescOverlap] += desc_count[w];
    }
  }

  f[kReScore] = re_score;
  f[kTfidfSum] = docs.TfIdfSum(q, r);

  std::vector<std::string> frag = Split(r.last().LastFragment(), '_');
  const auto &toks = q.tree.tokens();
  for (size_t s = 0; !frag.empty() && s + frag.size() <= toks.size() && f[kFrag3InQuestion] == 0; ++s) {
    bool match = true;
    for (size_t k = 0; k < frag.size() && match; ++k) {
      const Token &t = toks[s + k];
      match = NormalizeToken(t.surface) == frag[k] || Lowercase(t.lemma) == frag[k];
    }
    if (match) f[kFrag3InQuestion] = 1;
  }

  EntitySet result = kb.Query(e.entity, r);
  f[kQwordAnstypeCooc] = docs.Cooccurrence(QuestionWord(q), DominantAnswerType(kb, result));
  f[kAnswerCount] = std::log1p(static_cast<double>(result.size()));
  if (answers != nullptr) *answers = std::move(result);
  return f;
}

std::vector<ScoredPair> GeneratePairs(const KBGraph &kb, const RelationDocModel &docs,
                                      const RelationExtractor &rx, const Question &q,
                                      const std::vector<EntityCandidate> &entities,
                                      const PairGenerationOptions &options) {
  std::vector<ScoredPair> out;
  for (const auto &e : entities) {
    auto ranked = rx.PredictRelations(q, e.mention, kb.CandidateRelationPaths(e.entity));
    if (static_cast<int>(ranked.size()) > options.max_relations) ranked.resize(options.max_relations);
    for (const auto &[path, score] : ranked) {
      ScoredPair p;
      p.entity = e;
      p.relation = path;
      p.features = FeaturizePair(kb, docs, q, e, path, score, &p.answers);
      out.push_back(std::move(p));
    }
  }
  return out;
}

void MakeRankLabels(std::vector<ScoredPair> *pairs, const EntityId &gold_entity,
                    const std::optional<RelationPath> &gold_relation) {
  for (auto &p : *pairs) {
    int hits = (p.entity.entity == gold_entity) + (gold_relation && p.relation == *gold_relation);
    p.label = 1 + hits;
  }
}

// ----------------------------------------------------------------------------
// Ranker.

RankSvmModel::RankSvmModel(const std::vector<double> &weights, const std::vector<double> &mean,
                           const std::vector<double> &stddev, double C)
    : weights_(weights), mean_(mean), stddev_(stddev), C_(C) {
  if (weights_.size() != kNumPairFeatures || mean_.size() != kNumPairFeatures ||
      stddev_.size() != kNumPairFeatures) {
    throw Error("ranker needs " + std::to_string(kNumPairFeatures) + " weights");
  }
}

double RankSvmModel::Score(const PairFeatures &f) const {
  double s = 0;
  for (int i = 0; i < kNumPairFeatures; ++i) s += weights_[i] * (f[i] - mean_[i]) / stddev_[i];
  return s;
}

void RankSvmModel::Write(std::ostream &out) const {
  out << "ranker " << EncodeDouble(C_) << '\n';
  for (int i = 0; i < kNumPairFeatures; ++i) {
    out << PairFeatureNames()[i] << ' ' << EncodeDouble(weights_[i]) << ' ' << EncodeDouble(mean_[i]) << ' '
        << EncodeDouble(stddev_[i]) << '\n';
  }
}

RankSvmModel RankSvmModel::Read(std::istream &in) {
  std::string line;
  std::getline(in, line);
  auto f = SplitWhitespace(line);
  if (f.size() != 2 || f[0] != "ranker") throw Error("expected ranker section");
  RankSvmModel m;
  m.C_ = DecodeDouble(f[1]);
  for (int i = 0; i < kNumPairFeatures; ++i) {
    if (!std::getline(in, line)) throw Error("truncated ranker section");
    f = SplitWhitespace(line);
    if (f.size() != 4 || f[0] != PairFeatureNames()[i]) throw Error("expected feature " + PairFeatureNames()[i]);
    m.weights_[i] = DecodeDouble(f[1]);
    m.mean_[i] = DecodeDouble(f[2]);
    m.stddev_[i] = DecodeDouble(f[3]);
  }
  return m;
}

namespace {

struct Constraint {
  size_t group, better, worse;
};

std::vector<Constraint> Constraints(const std::vector<std::vector<ScoredPair>> &groups) {
  std::vector<Constraint> out;
  for (size_t g = 0; g < groups.size(); ++g) {
    for (size_t a = 0; a < groups[g].size(); ++a) {
      for (size_t b = 0; b < groups[g].size(); ++b) {
        if (groups[g][a].label > groups[g][b].label) out.push_back({g, a, b});
      }
    }
  }
  return out;
}

}  // namespace

RankSvmModel TrainRankSvm(const std::vector<std::vector<ScoredPair>> &groups, const RankSvmOptions &options) {
  if (options.C <= 0) throw Error("rank-SVM C must be positive");
  auto constraints = Constraints(groups);
  if (constraints.empty()) throw Error("no ranking signal");

  std::vector<double> mean(kNumPairFeatures, 0.0), sd(kNumPairFeatures, 0.0);
  size_t n = 0;
  for (const auto &g : groups) {
    for (const auto &p : g) {
      ++n;
      for (int i = 0; i < kNumPairFeatures; ++i) mean[i] += p.features[i];
    }
  }
  for (double &m : mean) m /= n;
  for (const auto &g : groups) {
    for (const auto &p : g) {
      for (int i = 0; i < kNumPairFeatures; ++i) sd[i] += (p.features[i] - mean[i]) * (p.features[i] - mean[i]);
    }
  }
  for (double &s : sd) s = std::sqrt(s / n) < 1e-12 ? 1.0 : std::sqrt(s / n);

  auto diff = [&](const Constraint &c) {
    std::array<double, kNumPairFeatures> d;
    const auto &fa = groups[c.group][c.better].features, &fb = groups[c.group][c.worse].features;
    for (int i = 0; i < kNumPairFeatures; ++i) d[i] = (fa[i] - fb[i]) / sd[i];
    return d;
  };

  // Pegasos on lambda/2 |w|^2 + mean hinge(1 - w . d); lambda = 1/(C n) is
  // the usual 1/2 |w|^2 + C * sum hinge scaled by 1/(C n).
  const double lambda = 1.0 / (options.C * constraints.size());
  const double radius = 1.0 / std::sqrt(lambda);
  std::vector<double> w(kNumPairFeatures, 0.0);
  std::mt19937_64 rng(options.seed);
  std::vector<size_t> order(constraints.size());
  std::iota(order.begin(), order.end(), 0);
  long t = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t idx : order) {
      ++t;
      double eta = 1.0 / (lambda * t);
      auto d = diff(constraints[idx]);
      double margin = 0;
      for (int i = 0; i < kNumPairFeatures; ++i) margin += w[i] * d[i];
      for (int i = 0; i < kNumPairFeatures; ++i) {
        w[i] *= 1.0 - eta * lambda;
        if (margin < 1.0) w[i] += eta * d[i];
      }
      double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
      if (norm > radius) {
        for (double &v : w) v *= radius / norm;
      }
    }
  }
  return RankSvmModel(w, mean, sd, options.C);
}

double PairwiseAccuracy(const RankSvmModel &model, const std::vector<std::vector<ScoredPair>> &groups) {
  auto constraints = Constraints(groups);
  if (constraints.empty()) return 1.0;
  size_t ok = 0;
  for (const auto &c : constraints) {
    ok += model.Score(groups[c.group][c.better].features) > model.Score(groups[c.group][c.worse].features);
  }
  return static_cast<double>(ok) / constraints.size();
}

std::vector<ScoredPair> RankPairs(const RankSvmModel &model, const std::vector<ScoredPair> &pairs) {
  std::vector<ScoredPair> out = pairs;
  for (auto &p : out) p.rank_score = model.Score(p.features);
  std::sort(out.begin(), out.end(), [](const ScoredPair &a, const ScoredPair &b) {
    if (a.rank_score != b.rank_score) return a.rank_score > b.rank_score;
    if (a.features[kElScore] != b.features[kElScore]) return a.features[kElScore] > b.features[kElScore];
    if (a.features[kReScore] != b.features[kReScore]) return a.features[kReScore] > b.features[kReScore];
    if (a.entity.entity != b.entity.entity) return a.entity.entity < b.entity.entity;
    return a.relation < b.relation;
  });
  return out;
}

void JointModel::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "kbqa-joint 1\n";
  ranker.Write(out);
  docs.Write(out);
}

JointModel JointModel::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "kbqa-joint 1") throw Error("bad ranker file " + path);
  JointModel m;
  try {
    m.ranker = RankSvmModel::Read(in);
    m.docs = RelationDocModel::Read(in);
  } catch (const Error &e) {
    throw Error("bad ranker file " + path + ": " + e.what());
  }
  return m;
}

}  // namespace kbqa
