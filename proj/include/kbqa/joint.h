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

// Joint entity / relation inference. Every (entity candidate, relation path)
// pair of a question is described by eight clues about the entity, the
// relation and the answers the pair retrieves, and a linear ranker trained on
// pairwise preferences picks the best combination.

#ifndef KBQA_JOINT_H_
#define KBQA_JOINT_H_

#include <array>
#include <cstdint>
#include <map>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kbqa/kb.h"
#include "kbqa/linguistics.h"
#include "kbqa/linker.h"
#include "kbqa/mccnn.h"

namespace kbqa {

enum PairFeature {
  kElScore,
  kMentionNameOverlap,
  kDescOverlap,
  kReScore,
  kTfidfSum,
  kFrag3InQuestion,
  kQwordAnstypeCooc,
  kAnswerCount,
  kNumPairFeatures
};

using PairFeatures = std::array<double, kNumPairFeatures>;

const std::array<std::string, kNumPairFeatures> &PairFeatureNames();

struct ScoredPair {
  EntityCandidate entity;
  RelationPath relation;
  PairFeatures features{};
  double rank_score = 0.0;
  int label = 0;      // 3/2/1 at training time, 0 otherwise
  EntitySet answers;  // Query(entity, relation)
};

// A training question together with the relation it is taken to express.
struct RelationDocExample {
  const Question *question = nullptr;
  RelationPath relation;
};

// Each relation is treated as a document made of the training questions
// labelled with it. Also holds question-word / answer-type co-occurrences.
class RelationDocModel {
 public:
  static RelationDocModel Build(const KBGraph &kb, const std::vector<RelationDocExample> &examples);

  int tf(const RelationPath &r, const std::string &word) const;
  int df(const std::string &word) const;
  int num_docs() const { return static_cast<int>(tf_.size()); }
  // max(0, ln((1 + N) / (1 + df))).
  double idf(const std::string &word) const;
  // Sum over question words (with repetition) of tf * idf for relation r.
  double TfIdfSum(const Question &q, const RelationPath &r) const;
  // (count(qword, type) + 1) / (count(qword) + T), T distinct answer types.
  double Cooccurrence(const std::string &qword, const std::string &answer_type) const;

  void Write(std::ostream &out) const;
  static RelationDocModel Read(std::istream &in);
  bool operator==(const RelationDocModel &) const = default;

 private:
  std::map<RelationPath, std::map<std::string, int>> tf_;
  std::map<std::string, int> df_;
  std::map<std::string, std::map<std::string, int>> cooc_;
  std::map<std::string, int> qword_count_;
  std::set<std::string> types_;
};

// Lowercased lemmas the relation documents are made of.
std::vector<std::string> DocumentWords(const Question &q);

// Most common answer type among `answers` (ties lexicographic); "" if none.
std::string DominantAnswerType(const KBGraph &kb, const EntitySet &answers);

// The eight clues for one pair. Pure; `answers` receives Query(e, r) when
// non-null.
PairFeatures FeaturizePair(const KBGraph &kb, const RelationDocModel &docs, const Question &q,
                           const EntityCandidate &e, const RelationPath &r, double re_score,
                           EntitySet *answers = nullptr);

struct PairGenerationOptions {
  int max_relations = 10;  // per entity, after MCCNN ranking
};

// Pairs for every entity candidate x its top KB-attested relations.
std::vector<ScoredPair> GeneratePairs(const KBGraph &kb, const RelationDocModel &docs,
                                      const RelationExtractor &rx, const Question &q,
                                      const std::vector<EntityCandidate> &entities,
                                      const PairGenerationOptions &options = {});

// 3 when both entity and relation are gold, 2 when one is, 1 otherwise.
void MakeRankLabels(std::vector<ScoredPair> *pairs, const EntityId &gold_entity,
                    const std::optional<RelationPath> &gold_relation);

struct RankSvmOptions {
  double C = 10.0;  // 1/2 |w|^2 + C * sum of pairwise hinges
  int epochs = 50;
  uint64_t seed = 1;
};

class RankSvmModel {
 public:
  RankSvmModel() = default;
  RankSvmModel(const std::vector<double> &weights, const std::vector<double> &mean,
               const std::vector<double> &stddev, double C);

  const std::vector<double> &weights() const { return weights_; }
  std::vector<double> &mutable_weights() { return weights_; }
  const std::vector<double> &mean() const { return mean_; }
  const std::vector<double> &stddev() const { return stddev_; }
  double C() const { return C_; }

  // w . z(f) with z the stored standardisation.
  double Score(const PairFeatures &f) const;

  void Write(std::ostream &out) const;
  static RankSvmModel Read(std::istream &in);
  bool operator==(const RankSvmModel &) const = default;

 private:
  std::vector<double> weights_ = std::vector<double>(kNumPairFeatures, 0.0);
  std::vector<double> mean_ = std::vector<double>(kNumPairFeatures, 0.0);
  std::vector<double> stddev_ = std::vector<double>(kNumPairFeatures, 1.0);
  double C_ = 1.0;
};

// Pairwise hinge subgradient descent. Groups are questions; only pairs with
// different labels inside a group form constraints. Throws "no ranking
// signal" when there are none.
RankSvmModel TrainRankSvm(const std::vector<std::vector<ScoredPair>> &groups,
                          const RankSvmOptions &options = {});

// Fraction of within-group label-ordered pairs scored in the right order
// (ties count as wrong). 1 when there are no such pairs.
double PairwiseAccuracy(const RankSvmModel &model, const std::vector<std::vector<ScoredPair>> &groups);

// Copy sorted by rank_score, then el_score, then re_score (all descending),
// then entity id and relation path.
std::vector<ScoredPair> RankPairs(const RankSvmModel &model, const std::vector<ScoredPair> &pairs);

// Relation documents and ranker, stored together in one file.
struct JointModel {
  RelationDocModel docs;
  RankSvmModel ranker;

  void Save(const std::string &path) const;
  static JointModel Load(const std::string &path);
  bool operator==(const JointModel &) const = default;
};

}  // namespace kbqa

#endif  // KBQA_JOINT_H_
