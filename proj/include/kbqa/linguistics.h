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

// Pre-parsed questions: CoNLL loading, mention spans from POS patterns,
// dependency paths between the question word and a mention, sentential
// context, and syntactic decomposition into sub-questions.

#ifndef KBQA_LINGUISTICS_H_
#define KBQA_LINGUISTICS_H_

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kbqa/base.h"

namespace kbqa {

struct Token {
  int index = 0;  // 1-based
  std::string surface;
  std::string lemma;
  std::string pos;
};

// A dependency tree over 1-based token indices; head 0 is ROOT. Construction
// validates contiguity, a single root and acyclicity.
class DepTree {
 public:
  DepTree() = default;
  DepTree(std::vector<Token> tokens, std::vector<int> heads, std::vector<std::string> labels);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<Token> &tokens() const { return tokens_; }
  const Token &token(int index) const { return tokens_.at(index - 1); }
  int head(int index) const { return heads_.at(index - 1); }
  const std::string &label(int index) const { return labels_.at(index - 1); }
  int root() const { return root_; }

  std::vector<int> Children(int index) const;
  // `index` and all its descendants, ascending.
  std::set<int> Subtree(int index) const;
  bool Dominates(int ancestor, int index) const;
  int Depth(int index) const;

 private:
  std::vector<Token> tokens_;
  std::vector<int> heads_;
  std::vector<std::string> labels_;
  int root_ = 0;
};

bool IsQuestionWord(const std::string &word);

struct Question {
  std::string qid;
  std::string raw;
  DepTree tree;
  int qword_index = 0;  // 0 when the sentence has no question word
  std::optional<EntitySet> gold_answers;
  std::optional<EntityId> gold_topic;

  bool answerable() const { return qword_index > 0; }
};

// Fills raw (surfaces joined by spaces) and qword_index from the tree.
Question MakeQuestion(std::string qid, DepTree tree);

// Reads blank-line separated CoNLL blocks. Each block starts with a header
// "#qid <id> [gold: a,b,...] [topic: id]" (brackets optional).
std::vector<Question> LoadQuestions(const std::string &path);
std::vector<Question> ParseQuestions(const std::string &text, const std::string &source = "<text>");
std::string FormatQuestion(const Question &q);
void SaveQuestions(const std::string &path, const std::vector<Question> &questions);

struct MentionSpan {
  int start = 0;  // inclusive, 1-based
  int end = 0;    // inclusive
  std::string surface;
  int head_index = 0;

  bool Contains(int index) const { return start <= index && index <= end; }
  auto operator<=>(const MentionSpan &) const = default;
};

MentionSpan MakeSpan(const Question &q, int start, int end);

// POS sequence patterns such as "NNP+" or "DT-JJ-NN". An atom matches every
// tag it prefixes ("NN" matches NN, NNS, NNP, NNPS); a trailing '+' repeats.
struct MentionPatterns {
  std::vector<std::string> patterns;
  static MentionPatterns Default();
};

// Maximal matches of every pattern; spans from different patterns may
// overlap. Spans never contain the question word. Sorted by (start, end).
std::vector<MentionSpan> FindMentionSpans(const Question &q,
                                          const MentionPatterns &patterns = MentionPatterns::Default());

enum class EdgeDirection { kUp, kDown };  // toward / away from the root

struct DepPathElement {
  enum class Kind { kWord, kEdge };
  Kind kind = Kind::kWord;
  std::string value;  // lemma, or dependency label for edges
  EdgeDirection direction = EdgeDirection::kUp;

  // "play" for words, "dobj/up" or "nsubj/down" for edges.
  std::string ToString() const;
  bool operator==(const DepPathElement &) const = default;
};

// Tree path from the question word to the mention head with both endpoints
// left out. Empty when the mention head is the question word.
std::vector<DepPathElement> ShortestDepPath(const Question &q, const MentionSpan &m);

// Lemmas in order without the question word and the mention tokens.
std::vector<std::string> SententialContext(const Question &q, const std::optional<MentionSpan> &m);

// One decomposition rule. Kinds:
//   args   root children labelled in labels_a / labels_b, split one per entity
//          argument (needs a distinct pair from the two sets)
//   coord  node with entity-bearing children labelled in labels_a
//          (conjuncts, appositions); one sub-question per alternative
//   relcl  entity with a clause child labelled in labels_a; matrix + clause
//   advcl  root with a clause child labelled in labels_a introduced by a
//          marker lemma from labels_b; matrix + clause
struct DecompositionPattern {
  std::string name;
  std::string kind;
  std::set<std::string> labels_a;
  std::set<std::string> labels_b;
};

struct DecompositionRules {
  std::vector<DecompositionPattern> patterns;

  static DecompositionRules Default();
  // Tab-separated "name kind labels_a [labels_b]", comma-separated labels,
  // '#' comments.
  static DecompositionRules Parse(const std::string &text);
  static DecompositionRules Load(const std::string &path);
};

// Splits a multi-relation question by the first pattern that fires and
// recurses into the parts; returns {q} when nothing fires. Sub-questions keep
// q's question word, carry ids "<qid>.<k>" and no gold annotations.
std::vector<Question> Decompose(const Question &q,
                                const DecompositionRules &rules = DecompositionRules::Default());

// Word -> most frequent POS tag over a set of parsed questions.
std::map<std::string, std::string> BuildPosLexicon(const std::vector<Question> &questions);

// Heuristic tagger and attachment rules for raw text that has no CoNLL parse.
// Good enough for interactive use; the learned components expect real parses.
Question RuleBasedParse(const std::string &qid, const std::string &raw,
                        const std::map<std::string, std::string> &lexicon);

}  // namespace kbqa

#endif  // KBQA_LINGUISTICS_H_
