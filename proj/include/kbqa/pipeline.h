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

// End-to-end question answering: configuration, data loading, the four
// answering modes, evaluation and the staged training driver.

#ifndef KBQA_PIPELINE_H_
#define KBQA_PIPELINE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kbqa/joint.h"
#include "kbqa/kb.h"
#include "kbqa/linguistics.h"
#include "kbqa/linker.h"
#include "kbqa/mccnn.h"
#include "kbqa/refine.h"

namespace kbqa {

// Flat "key = value" settings; '#' starts a comment. Paths are relative to
// the directory of the config file they were read from.
struct Config {
  std::string kb = "data/desk/kb";
  std::string train_questions = "data/desk/train.tsv";
  std::string test_questions = "data/desk/test.tsv";
  std::string corpus = "data/desk/corpus/mapping.tsv";
  std::string model_dir = "models";
  std::string embeddings;           // optional "word v1 .. vd" file
  std::string decomposition_rules;  // optional; built-in patterns otherwise
  uint64_t seed = 1;
  double dev_fraction = 0.2;

  LinkerOptions linker;
  MccnnConfig mccnn;
  PairGenerationOptions pairs;
  RankSvmOptions rank;
  RefineOptions refine;
  int union_top_pairs = 2;  // joint + unstructured mode only

  // Throws on unknown keys and malformed values.
  void Set(const std::string &key, const std::string &value);
  static Config Parse(const std::string &text, const std::string &base_dir = "");
  static Config Load(const std::string &path);
  // Every key with its current value, in Parse() syntax.
  std::string ToString() const;
};

// Questions from a ".conll" file, or from a records file
// "qid<TAB>raw<TAB>gold ids (comma-separated, '-' if unknown)<TAB>topic id"
// whose parses live in the sibling file with extension ".conll". Records
// without a parse fall back to RuleBasedParse.
std::vector<Question> LoadDataset(const std::string &path);
void SaveDataset(const std::string &records_path, const std::vector<Question> &questions);

// True for the held-out development share of the training file.
bool IsDevQuestion(const std::string &qid, double dev_fraction);

enum class Mode { kStructured, kStructuredJoint, kStructuredUnstructured, kStructuredJointUnstructured };

std::string ModeName(Mode m);
Mode ParseMode(const std::string &name);
bool UsesJoint(Mode m);
bool UsesText(Mode m);

// Empty when a question was answered.
inline constexpr const char *kNoQword = "NO_QWORD";
inline constexpr const char *kNoMention = "NO_MENTION";
inline constexpr const char *kNoLink = "NO_LINK";
inline constexpr const char *kNoRelation = "NO_RELATION";

struct SubQuestionTrace {
  std::string qid;
  std::string text;
  std::vector<ScoredPair> pairs;  // everything considered, in decision order
  int chosen = 0;                 // how many leading pairs were used
  EntitySet candidates;           // union of the chosen pairs' answers
  std::optional<RefineResult> refine;
  EntitySet answers;
  std::string reason;
};

struct AnswerSet {
  std::string qid;
  EntitySet predicted;
  std::string reason;
  std::vector<SubQuestionTrace> subquestions;
};

struct Models {
  std::optional<RelationExtractor> relations;
  std::optional<JointModel> joint;
  std::optional<RefineModel> refine;
};

// Everything answer() reads; immutable once built.
struct System {
  Config config;
  KBGraph kb;
  Corpus corpus;
  Models models;
  DecompositionRules rules = DecompositionRules::Default();
  std::map<std::string, std::string> lexicon;  // for raw-text questions
};

// Loads the KB, corpus, rules and whichever model files exist.
System LoadSystem(const Config &config);

// Checks that the models a mode needs are present; throws otherwise.
void RequireModels(const System &system, Mode mode);

AnswerSet Answer(const System &system, const Question &q, Mode mode);

struct EvalRecord {
  std::string qid;
  EntitySet predicted;
  EntitySet gold;
  double f1 = 0;
  std::string reason;
  bool excluded = false;  // no gold answers
};

struct EvalReport {
  Mode mode = Mode::kStructuredJointUnstructured;
  double average_f1 = 0;
  int evaluated = 0;
  std::vector<EvalRecord> records;

  // One JSON object per line: a summary line, then the records.
  std::string ToJsonLines() const;
};

EvalReport Evaluate(const System &system, const std::vector<Question> &questions, Mode mode);

// Mean of per-question F1 scores (0 for an empty list).
double AverageF1(const std::vector<double> &scores);

enum class Stage { kSurrogate, kRelations, kJoint, kRefine };

std::string StageName(Stage s);

struct TrainOptions {
  // Stages retrained even when their artefact already exists.
  std::vector<Stage> force;
  // Last stage to run; later stages are left untouched.
  std::optional<Stage> until;
  std::function<void(const std::string &)> log = [](const std::string &) {};
};

// Runs surrogate labelling, relation classifier, ranker and refinement
// training in order, writing <model_dir>/{surrogate.tsv, mccnn.model,
// ranker.model, refine.model, training_report.txt}. Existing artefacts are
// reused unless forced. A failing stage throws with its name; earlier
// artefacts stay on disk.
void TrainAll(const Config &config, const TrainOptions &options = {});

// Training questions that survive the dev split.
std::vector<Question> TrainingQuestions(const Config &config);

}  // namespace kbqa

#endif  // KBQA_PIPELINE_H_
