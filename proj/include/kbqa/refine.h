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

// Answer validation against text. Candidate answers are looked up in the
// topic entity's document; each sentence mentioning a candidate is classified
// by a linear model over (question token, sentence token) pairs.

#ifndef KBQA_REFINE_H_
#define KBQA_REFINE_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kbqa/kb.h"
#include "kbqa/linguistics.h"

namespace kbqa {

struct DocAnnotation {
  EntityId entity;
  int start = 0;  // token offsets, 0-based inclusive
  int end = 0;
  bool operator==(const DocAnnotation &) const = default;
};

struct DocSentence {
  std::vector<std::string> tokens;
  std::vector<DocAnnotation> annotations;
};

struct WikiDoc {
  EntityId entity;
  std::vector<DocSentence> sentences;
};

using Corpus = std::map<EntityId, WikiDoc>;

// One sentence per line, tokens separated by spaces, optionally followed by
// "|||ent:start-end;ent:start-end". Blank lines are skipped.
WikiDoc ParseDoc(const EntityId &entity, const std::string &text, const std::string &source = "<doc>");

// `mapping` lines are "entity_id<TAB>relative/path.txt", resolved against
// the mapping file's directory. A missing document is an error naming it.
Corpus LoadCorpus(const std::string &mapping);

// Points into the corpus it was found in.
struct EvidenceSentence {
  const DocSentence *sentence = nullptr;
  EntityId candidate;
  int start = 0;  // matched span, 0-based inclusive
  int end = 0;
};

// Sentences of `doc` that mention `candidate` through an annotation or a
// case-insensitive alias match; one item per sentence (first match).
std::vector<EvidenceSentence> FindEvidence(const WikiDoc &doc, const Entity &candidate);

// Token pair "q|s" -> count, pairing every question token except the
// question word with every sentence token outside the matched span.
std::map<std::string, int> FeaturizeEvidence(const Question &q, const EvidenceSentence &s);

struct LabeledEvidence {
  const Question *question = nullptr;
  EvidenceSentence evidence;
  bool positive = false;
};

// Evidence for each candidate, labelled by membership in q's gold answers.
// The topic itself never has evidence in its own document.
std::vector<LabeledEvidence> CollectEvidence(const KBGraph &kb, const Corpus &corpus, const Question &q,
                                             const EntityId &topic, const EntitySet &candidates);

struct RefineOptions {
  double C = 10.0;  // 1/2 |w|^2 + C * sum of hinges
  int epochs = 50;
  int min_pair_count = 2;
  uint64_t seed = 1;
};

class RefineModel {
 public:
  // Feature vectors are L2-normalised over the known pairs before scoring.
  double Score(const std::map<std::string, int> &features) const;
  bool Positive(const Question &q, const EvidenceSentence &s) const {
    return Score(FeaturizeEvidence(q, s)) > 0;
  }

  const std::map<std::string, int> &dictionary() const { return dictionary_; }
  const std::vector<double> &weights() const { return weights_; }
  double bias() const { return bias_; }
  // Weight of a token pair; 0 for pairs outside the dictionary.
  double Weight(const std::string &q_token, const std::string &s_token) const;

  void Save(const std::string &path) const;
  static RefineModel Load(const std::string &path);
  bool operator==(const RefineModel &) const = default;

 private:
  friend RefineModel TrainRefine(const std::vector<LabeledEvidence> &, const RefineOptions &);
  std::map<std::string, int> dictionary_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

// Binary hinge-loss SVM by subgradient descent. Throws "empty refinement
// training set" without examples.
RefineModel TrainRefine(const std::vector<LabeledEvidence> &examples, const RefineOptions &options = {});

double EvidenceAccuracy(const RefineModel &model, const std::vector<LabeledEvidence> &examples);

enum class EvidenceDecision { kPositive, kNegative, kNoEvidence };

std::string EvidenceDecisionName(EvidenceDecision d);

struct RefineResult {
  EntitySet kept;
  bool no_document = false;  // topic has no document; candidates returned as is
  std::map<EntityId, EvidenceDecision> decisions;
};

// Keeps candidates with a positive sentence or with no sentence at all;
// drops those whose every sentence is negative. A candidate equal to the
// topic counts as having no sentence.
RefineResult RefineAnswers(const RefineModel &model, const KBGraph &kb, const Corpus &corpus, const Question &q,
                           const EntitySet &candidates, const EntityId &topic);

}  // namespace kbqa

#endif  // KBQA_REFINE_H_
