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

#include "kbqa/refine.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace kbqa {

WikiDoc ParseDoc(const EntityId &entity, const std::string &text, const std::string &source) {
  WikiDoc doc;
  doc.entity = entity;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    auto where = [&] { return source + ":" + std::to_string(lineno); };
    std::string body = line, notes;
    if (auto bar = line.find("|||"); bar != std::string::npos) {
      body = line.substr(0, bar);
      notes = line.substr(bar + 3);
    }
    DocSentence s;
    s.tokens = SplitWhitespace(body);
    if (s.tokens.empty()) {
      if (!Trim(notes).empty()) throw Error("annotations on an empty sentence at " + where());
      continue;
    }
    for (const auto &item : Split(notes, ';')) {
      std::string a = Trim(item);
      if (a.empty()) continue;
      auto colon = a.rfind(':');
      auto dash = colon == std::string::npos ? std::string::npos : a.find('-', colon);
      if (colon == std::string::npos || colon == 0 || dash == std::string::npos) {
        throw Error("bad annotation '" + a + "' at " + where());
      }
      DocAnnotation ann;
      ann.entity = a.substr(0, colon);
      try {
        ann.start = std::stoi(a.substr(colon + 1, dash - colon - 1));
        ann.end = std::stoi(a.substr(dash + 1));
      } catch (const std::exception &) {
        throw Error("bad annotation '" + a + "' at " + where());
      }
      if (ann.start < 0 || ann.end < ann.start || ann.end >= static_cast<int>(s.tokens.size())) {
        throw Error("annotation span out of range at " + where());
      }
      s.annotations.push_back(ann);
    }
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

Corpus LoadCorpus(const std::string &mapping) {
  std::ifstream in(mapping);
  if (!in) throw Error("cannot open " + mapping);
  std::filesystem::path base = std::filesystem::path(mapping).parent_path();
  Corpus corpus;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (Trim(line).empty() || line[0] == '#') continue;
    auto f = Split(line, '\t');
    if (f.size() != 2 || f[0].empty() || f[1].empty()) {
      throw Error("malformed line at " + mapping + ":" + std::to_string(lineno));
    }
    std::string path = (base / f[1]).string();
    std::ifstream doc(path);
    if (!doc) throw Error("missing document " + path);
    std::stringstream text;
    text << doc.rdbuf();
    corpus[f[0]] = ParseDoc(f[0], text.str(), path);
  }
  return corpus;
}

std::vector<EvidenceSentence> FindEvidence(const WikiDoc &doc, const Entity &candidate) {
  std::vector<std::vector<std::string>> aliases;
  for (const auto &a : candidate.aliases) {
    std::vector<std::string> toks;
    for (const auto &t : SplitWhitespace(a)) {
      std::string n = NormalizeToken(t);
      if (!n.empty()) toks.push_back(n);
    }
    if (!toks.empty()) aliases.push_back(std::move(toks));
  }
  std::vector<EvidenceSentence> out;
  for (const auto &s : doc.sentences) {
    EvidenceSentence ev;
    ev.sentence = &s;
    ev.candidate = candidate.id;
    bool found = false;
    for (const auto &a : s.annotations) {
      if (a.entity == candidate.id) {
        ev.start = a.start;
        ev.end = a.end;
        found = true;
        break;
      }
    }
    if (!found) {
      std::vector<std::string> norm;
      for (const auto &t : s.tokens) norm.push_back(NormalizeToken(t));
      // Earliest start wins, then the longest alias.
      for (size_t i = 0; i < norm.size() && !found; ++i) {
        size_t best = 0;
        for (const auto &alias : aliases) {
          if (alias.size() <= best || i + alias.size() > norm.size()) continue;
          if (std::equal(alias.begin(), alias.end(), norm.begin() + i)) best = alias.size();
        }
        if (best > 0) {
          ev.start = static_cast<int>(i);
          ev.end = static_cast<int>(i + best - 1);
          found = true;
        }
      }
    }
    if (found) out.push_back(ev);
  }
  return out;
}

std::map<std::string, int> FeaturizeEvidence(const Question &q, const EvidenceSentence &s) {
  std::map<std::string, int> qc, sc, out;
  for (const auto &t : q.tree.tokens()) {
    if (t.index == q.qword_index) continue;
    std::string n = NormalizeToken(t.surface);
    if (!n.empty()) ++qc[n];
  }
  for (int j = 0; j < static_cast<int>(s.sentence->tokens.size()); ++j) {
    if (j >= s.start && j <= s.end) continue;
    std::string n = NormalizeToken(s.sentence->tokens[j]);
    if (!n.empty()) ++sc[n];
  }
  for (const auto &[a, ca] : qc) {
    for (const auto &[b, cb] : sc) out[a + "|" + b] = ca * cb;
  }
  return out;
}

std::vector<LabeledEvidence> CollectEvidence(const KBGraph &kb, const Corpus &corpus, const Question &q,
                                             const EntityId &topic, const EntitySet &candidates) {
  std::vector<LabeledEvidence> out;
  auto doc = corpus.find(topic);
  if (doc == corpus.end() || !q.gold_answers) return out;
  for (const auto &c : candidates) {
    // The topic's own page mentions it everywhere; that says nothing.
    if (!kb.Has(c) || c == topic) continue;
    for (const auto &ev : FindEvidence(doc->second, kb.Get(c))) {
      out.push_back({&q, ev, q.gold_answers->count(c) > 0});
    }
  }
  return out;
}

// ----------------------------------------------------------------------------
// Classifier.

namespace {

using SparseVector = std::vector<std::pair<int, double>>;

// Known pairs, L2-normalised.
SparseVector Vectorize(const std::map<std::string, int> &dictionary, const std::map<std::string, int> &features) {
  SparseVector v;
  double norm = 0;
  for (const auto &[key, count] : features) {
    auto it = dictionary.find(key);
    if (it == dictionary.end()) continue;
    v.emplace_back(it->second, count);
    norm += static_cast<double>(count) * count;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto &[id, x] : v) x /= norm;
  }
  return v;
}

}  // namespace

double RefineModel::Score(const std::map<std::string, int> &features) const {
  double s = bias_;
  for (const auto &[id, x] : Vectorize(dictionary_, features)) s += weights_[id] * x;
  return s;
}

double RefineModel::Weight(const std::string &q_token, const std::string &s_token) const {
  auto it = dictionary_.find(q_token + "|" + s_token);
  return it == dictionary_.end() ? 0.0 : weights_[it->second];
}

RefineModel TrainRefine(const std::vector<LabeledEvidence> &examples, const RefineOptions &options) {
  if (examples.empty()) throw Error("empty refinement training set");
  if (options.C <= 0) throw Error("refinement C must be positive");
  std::vector<std::map<std::string, int>> raw;
  std::map<std::string, int> pair_count;
  for (const auto &ex : examples) {
    raw.push_back(FeaturizeEvidence(*ex.question, ex.evidence));
    for (const auto &[k, c] : raw.back()) pair_count[k] += c;
  }
  RefineModel m;
  for (const auto &[k, c] : pair_count) {
    if (c >= options.min_pair_count) m.dictionary_.emplace(k, static_cast<int>(m.dictionary_.size()));
  }
  std::vector<SparseVector> xs;
  for (const auto &r : raw) xs.push_back(Vectorize(m.dictionary_, r));

  // Pegasos with the bias as an extra, regularised coordinate. w = scale * v
  // keeps the per-step decay O(1).
  const double lambda = 1.0 / (options.C * examples.size());
  std::vector<double> v(m.dictionary_.size(), 0.0);
  double vb = 0.0, scale = 1.0;
  std::mt19937_64 rng(options.seed);
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  long t = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * t);
      const double y = examples[i].positive ? 1.0 : -1.0;
      double margin = vb;
      for (const auto &[id, x] : xs[i]) margin += v[id] * x;
      margin *= scale * y;
      double decay = 1.0 - eta * lambda;
      if (decay <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        vb = 0.0;
        scale = 1.0;
      } else {
        scale *= decay;
      }
      if (margin < 1.0) {
        double step = eta * y / scale;
        for (const auto &[id, x] : xs[i]) v[id] += step * x;
        vb += step;
      }
      if (scale < 1e-9) {
        for (double &w : v) w *= scale;
        vb *= scale;
        scale = 1.0;
      }
    }
  }
  m.weights_.resize(v.size());
  for (size_t k = 0; k < v.size(); ++k) m.weights_[k] = v[k] * scale;
  m.bias_ = vb * scale;
  return m;
}

double EvidenceAccuracy(const RefineModel &model, const std::vector<LabeledEvidence> &examples) {
  if (examples.empty()) return 1.0;
  size_t ok = 0;
  for (const auto &ex : examples) ok += model.Positive(*ex.question, ex.evidence) == ex.positive;
  return static_cast<double>(ok) / examples.size();
}

void RefineModel::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "kbqa-refine 1\nbias " << EncodeDouble(bias_) << "\npairs " << dictionary_.size() << '\n';
  std::vector<const std::string *> by_id(dictionary_.size());
  for (const auto &[k, id] : dictionary_) by_id[id] = &k;
  for (size_t id = 0; id < by_id.size(); ++id) out << *by_id[id] << ' ' << EncodeDouble(weights_[id]) << '\n';
}

RefineModel RefineModel::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  auto fail = [&](const std::string &what) { return Error("bad refine model " + path + ": " + what); };
  std::string line;
  if (!std::getline(in, line) || line != "kbqa-refine 1") throw fail("unknown header");
  RefineModel m;
  std::getline(in, line);
  auto f = SplitWhitespace(line);
  if (f.size() != 2 || f[0] != "bias") throw fail("missing bias");
  m.bias_ = DecodeDouble(f[1]);
  std::getline(in, line);
  f = SplitWhitespace(line);
  if (f.size() != 2 || f[0] != "pairs") throw fail("missing pair count");
  size_t n = std::stoul(f[1]);
  for (size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw fail("truncated");
    f = SplitWhitespace(line);
    if (f.size() != 2) throw fail("bad pair line '" + line + "'");
    if (!m.dictionary_.emplace(f[0], static_cast<int>(i)).second) throw fail("duplicate pair " + f[0]);
    m.weights_.push_back(DecodeDouble(f[1]));
  }
  return m;
}

std::string EvidenceDecisionName(EvidenceDecision d) {
  switch (d) {
    case EvidenceDecision::kPositive: return "positive";
    case EvidenceDecision::kNegative: return "negative";
    case EvidenceDecision::kNoEvidence: return "no_evidence";
  }
  return "?";
}

RefineResult RefineAnswers(const RefineModel &model, const KBGraph &kb, const Corpus &corpus, const Question &q,
                           const EntitySet &candidates, const EntityId &topic) {
  RefineResult r;
  auto doc = corpus.find(topic);
  if (doc == corpus.end()) {
    r.no_document = true;
    r.kept = candidates;
    return r;
  }
  for (const auto &c : candidates) {
    std::vector<EvidenceSentence> evidence;
    if (kb.Has(c) && c != topic) evidence = FindEvidence(doc->second, kb.Get(c));
    EvidenceDecision d = EvidenceDecision::kNoEvidence;
    if (!evidence.empty()) {
      bool positive = std::any_of(evidence.begin(), evidence.end(),
                                  [&](const EvidenceSentence &s) { return model.Positive(q, s); });
      d = positive ? EvidenceDecision::kPositive : EvidenceDecision::kNegative;
    }
    r.decisions[c] = d;
    if (d != EvidenceDecision::kNegative) r.kept.insert(c);
  }
  return r;
}

}  // namespace kbqa
