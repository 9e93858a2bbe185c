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

#include "kbqa/linguistics.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace kbqa {

DepTree::DepTree(std::vector<Token> tokens, std::vector<int> heads, std::vector<std::string> labels)
    : tokens_(std::move(tokens)), heads_(std::move(heads)), labels_(std::move(labels)) {
  const int n = size();
  if (n == 0) throw Error("empty dependency tree");
  if (static_cast<int>(heads_.size()) != n || static_cast<int>(labels_.size()) != n) {
    throw Error("dependency tree arrays differ in length");
  }
  for (int i = 0; i < n; ++i) {
    if (tokens_[i].index != i + 1) throw Error("token indices are not contiguous from 1");
    if (heads_[i] < 0 || heads_[i] > n || heads_[i] == i + 1) {
      throw Error("bad head for token " + std::to_string(i + 1));
    }
    if (heads_[i] == 0) {
      if (root_ != 0) throw Error("more than one root");
      root_ = i + 1;
    } else if (labels_[i].empty()) {
      throw Error("missing label for token " + std::to_string(i + 1));
    }
  }
  if (root_ == 0) throw Error("no root");
  for (int i = 1; i <= n; ++i) {
    int node = i;
    for (int steps = 0; node != 0; ++steps) {
      if (steps > n) throw Error("cycle in head links");
      node = heads_[node - 1];
    }
  }
}

std::vector<int> DepTree::Children(int index) const {
  std::vector<int> kids;
  for (int i = 1; i <= size(); ++i) {
    if (head(i) == index) kids.push_back(i);
  }
  return kids;
}

std::set<int> DepTree::Subtree(int index) const {
  std::set<int> nodes;
  for (int i = 1; i <= size(); ++i) {
    if (Dominates(index, i)) nodes.insert(i);
  }
  return nodes;
}

bool DepTree::Dominates(int ancestor, int index) const {
  for (int node = index; node != 0; node = head(node)) {
    if (node == ancestor) return true;
  }
  return false;
}

int DepTree::Depth(int index) const {
  int depth = 0;
  for (int node = head(index); node != 0; node = head(node)) ++depth;
  return depth;
}

bool IsQuestionWord(const std::string &word) {
  static const std::set<std::string> kWords = {"who",   "when", "what", "where", "how",
                                               "which", "why",  "whom", "whose"};
  return kWords.count(Lowercase(word)) > 0;
}

Question MakeQuestion(std::string qid, DepTree tree) {
  Question q;
  q.qid = std::move(qid);
  std::vector<std::string> words;
  for (const auto &t : tree.tokens()) {
    words.push_back(t.surface);
    if (q.qword_index == 0 && IsQuestionWord(t.surface)) q.qword_index = t.index;
  }
  q.raw = Join(words, " ");
  q.tree = std::move(tree);
  return q;
}

namespace {

void ParseHeader(const std::string &line, Question *q) {
  std::string text = line;
  for (char &c : text) {
    if (c == '[' || c == ']') c = ' ';
  }
  auto words = SplitWhitespace(text);
  if (words.size() < 2 || words[0] != "#qid") throw Error("bad header '" + line + "'");
  q->qid = words[1];
  for (size_t i = 2; i < words.size(); ++i) {
    if (words[i] == "gold:") {
      EntitySet gold;
      if (i + 1 < words.size() && words[i + 1] != "topic:") {
        for (auto &id : Split(words[++i], ',')) {
          if (!id.empty()) gold.insert(id);
        }
      }
      q->gold_answers = gold;
    } else if (words[i] == "topic:") {
      if (i + 1 >= words.size()) throw Error("missing topic id in '" + line + "'");
      q->gold_topic = words[++i];
    } else {
      throw Error("unexpected field '" + words[i] + "' in header");
    }
  }
}

Question ParseBlock(const std::vector<std::string> &lines, const std::string &where) {
  Question header;
  std::vector<Token> tokens;
  std::vector<int> heads;
  std::vector<std::string> labels;
  for (const auto &line : lines) {
    if (StartsWith(line, "#qid")) {
      ParseHeader(line, &header);
      continue;
    }
    if (StartsWith(line, "#")) continue;
    auto f = Split(line, '\t');
    if (f.size() != 6) throw Error("expected 6 columns in " + where + ": '" + line + "'");
    Token t;
    try {
      t.index = std::stoi(f[0]);
      heads.push_back(std::stoi(f[4]));
    } catch (const std::exception &) {
      throw Error("bad index or head in " + where + ": '" + line + "'");
    }
    t.surface = f[1];
    t.lemma = f[2];
    t.pos = f[3];
    tokens.push_back(std::move(t));
    labels.push_back(f[5]);
  }
  if (header.qid.empty()) throw Error("missing #qid header in " + where);
  DepTree tree;
  try {
    tree = DepTree(std::move(tokens), std::move(heads), std::move(labels));
  } catch (const Error &e) {
    throw Error(where + ": " + e.what());
  }
  Question q = MakeQuestion(header.qid, std::move(tree));
  q.gold_answers = header.gold_answers;
  q.gold_topic = header.gold_topic;
  return q;
}

}  // namespace

std::vector<Question> ParseQuestions(const std::string &text, const std::string &source) {
  std::vector<Question> questions;
  std::vector<std::string> block;
  int block_no = 0;
  auto flush = [&]() {
    if (block.empty()) return;
    ++block_no;
    questions.push_back(ParseBlock(block, source + " block " + std::to_string(block_no)));
    block.clear();
  };
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) {
      flush();
    } else {
      block.push_back(line);
    }
  }
  flush();
  return questions;
}

std::vector<Question> LoadQuestions(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseQuestions(buf.str(), path);
}

std::string FormatQuestion(const Question &q) {
  std::ostringstream out;
  out << "#qid " << q.qid;
  if (q.gold_answers) {
    out << " gold: " << Join(std::vector<std::string>(q.gold_answers->begin(), q.gold_answers->end()), ",");
  }
  if (q.gold_topic) out << " topic: " << *q.gold_topic;
  out << '\n';
  for (const auto &t : q.tree.tokens()) {
    out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t' << t.pos << '\t'
        << q.tree.head(t.index) << '\t' << q.tree.label(t.index) << '\n';
  }
  return out.str();
}

void SaveQuestions(const std::string &path, const std::vector<Question> &questions) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto &q : questions) out << FormatQuestion(q) << '\n';
}

// ----------------------------------------------------------------------------
// Mention spans.

MentionPatterns MentionPatterns::Default() {
  return MentionPatterns{{"NNP+", "NN+", "DT-JJ-NN", "NN-IN-NN", "JJ-NN+"}};
}

namespace {

struct PatternAtom {
  std::string tag;
  bool repeat = false;
};

std::vector<PatternAtom> ParsePattern(const std::string &pattern) {
  std::vector<PatternAtom> atoms;
  for (auto &part : Split(pattern, '-')) {
    PatternAtom atom;
    if (!part.empty() && part.back() == '+') {
      atom.repeat = true;
      part.pop_back();
    }
    if (part.empty()) throw Error("bad mention pattern '" + pattern + "'");
    atom.tag = part;
    atoms.push_back(atom);
  }
  return atoms;
}

// Longest end index (exclusive) of a match of atoms[a..] starting at token
// position pos, or -1.
int LongestMatch(const std::vector<PatternAtom> &atoms, size_t a, const std::vector<Token> &tokens,
                 int pos, int forbidden) {
  if (a == atoms.size()) return pos;
  auto matches = [&](int i) {
    return i < static_cast<int>(tokens.size()) && tokens[i].index != forbidden &&
           StartsWith(tokens[i].pos, atoms[a].tag);
  };
  if (!matches(pos)) return -1;
  if (!atoms[a].repeat) return LongestMatch(atoms, a + 1, tokens, pos + 1, forbidden);
  int run = pos;
  while (matches(run)) ++run;
  for (int stop = run; stop > pos; --stop) {
    int end = LongestMatch(atoms, a + 1, tokens, stop, forbidden);
    if (end >= 0) return end;
  }
  return -1;
}

bool IsNounTag(const std::string &pos) { return StartsWith(pos, "NN"); }

}  // namespace

MentionSpan MakeSpan(const Question &q, int start, int end) {
  MentionSpan span;
  span.start = start;
  span.end = end;
  std::vector<std::string> words;
  std::vector<int> attached;  // tokens whose head lies outside the span
  int last_noun = 0;
  for (int i = start; i <= end; ++i) {
    words.push_back(q.tree.token(i).surface);
    if (IsNounTag(q.tree.token(i).pos)) last_noun = i;
    if (!span.Contains(q.tree.head(i))) attached.push_back(i);
  }
  span.surface = Join(words, " ");
  if (attached.size() == 1) {
    span.head_index = attached[0];
  } else {
    span.head_index = last_noun != 0 ? last_noun : end;
  }
  return span;
}

std::vector<MentionSpan> FindMentionSpans(const Question &q, const MentionPatterns &patterns) {
  const auto &tokens = q.tree.tokens();
  std::set<std::pair<int, int>> found;
  for (const auto &pattern : patterns.patterns) {
    auto atoms = ParsePattern(pattern);
    std::vector<std::pair<int, int>> matches;
    for (int pos = 0; pos < static_cast<int>(tokens.size()); ++pos) {
      int end = LongestMatch(atoms, 0, tokens, pos, q.qword_index);
      if (end > pos) matches.emplace_back(pos + 1, end);
    }
    // Keep maximal matches: drop any contained in another match of the same
    // pattern.
    for (const auto &m : matches) {
      bool contained = std::any_of(matches.begin(), matches.end(), [&](const auto &o) {
        return o != m && o.first <= m.first && m.second <= o.second;
      });
      if (!contained) found.insert(m);
    }
  }
  std::vector<MentionSpan> spans;
  for (const auto &[start, end] : found) spans.push_back(MakeSpan(q, start, end));
  return spans;
}

// ----------------------------------------------------------------------------
// Dependency paths and context.

std::string DepPathElement::ToString() const {
  if (kind == Kind::kWord) return value;
  return value + (direction == EdgeDirection::kUp ? "/up" : "/down");
}

std::vector<DepPathElement> ShortestDepPath(const Question &q, const MentionSpan &m) {
  const DepTree &tree = q.tree;
  const int from = q.qword_index;
  const int to = m.head_index;
  if (from == 0 || from == to) return {};
  std::vector<int> up_from, up_to;
  for (int n = from; n != 0; n = tree.head(n)) up_from.push_back(n);
  for (int n = to; n != 0; n = tree.head(n)) up_to.push_back(n);
  // Lowest common ancestor: first node of up_from that also dominates `to`.
  size_t lca_pos = 0;
  while (!tree.Dominates(up_from[lca_pos], to)) ++lca_pos;
  const int lca = up_from[lca_pos];
  std::vector<int> nodes(up_from.begin(), up_from.begin() + lca_pos + 1);
  auto it = std::find(up_to.begin(), up_to.end(), lca);
  for (auto r = std::make_reverse_iterator(it); r != up_to.rend(); ++r) nodes.push_back(*r);

  std::vector<DepPathElement> path;
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    DepPathElement edge;
    edge.kind = DepPathElement::Kind::kEdge;
    if (tree.head(nodes[i]) == nodes[i + 1]) {
      edge.value = tree.label(nodes[i]);
      edge.direction = EdgeDirection::kUp;
    } else {
      edge.value = tree.label(nodes[i + 1]);
      edge.direction = EdgeDirection::kDown;
    }
    path.push_back(edge);
    if (i + 2 < nodes.size()) {
      DepPathElement word;
      word.kind = DepPathElement::Kind::kWord;
      word.value = Lowercase(tree.token(nodes[i + 1]).lemma);
      path.push_back(word);
    }
  }
  return path;
}

std::vector<std::string> SententialContext(const Question &q, const std::optional<MentionSpan> &m) {
  std::vector<std::string> words;
  for (const auto &t : q.tree.tokens()) {
    if (t.index == q.qword_index) continue;
    if (m && m->Contains(t.index)) continue;
    words.push_back(Lowercase(t.lemma));
  }
  return words;
}

// ----------------------------------------------------------------------------
// Decomposition.

namespace {

std::set<std::string> LabelSet(const std::string &csv) {
  std::set<std::string> out;
  for (auto &l : Split(csv, ',')) {
    auto t = Trim(l);
    if (!t.empty()) out.insert(t);
  }
  return out;
}

bool EntityBearing(const DepTree &tree, const std::set<int> &nodes) {
  return std::any_of(nodes.begin(), nodes.end(),
                     [&](int i) { return StartsWith(tree.token(i).pos, "NNP"); });
}

std::set<int> Minus(std::set<int> a, const std::set<int> &b) {
  for (int x : b) a.erase(x);
  return a;
}

struct Reattach {
  int head = 0;  // original index; 0 makes the token the root
  std::string label;
};

// Builds a question from the kept tokens. Tokens whose head was dropped climb
// to the nearest kept ancestor unless an explicit reattachment is given. If
// several tokens end up headless, the shallowest (then leftmost) becomes the
// root and the rest attach to it.
Question Restrict(const Question &q, const std::set<int> &keep, const std::map<int, Reattach> &moves,
                  const std::string &qid) {
  const DepTree &tree = q.tree;
  std::map<int, int> new_index;
  for (int i : keep) new_index[i] = static_cast<int>(new_index.size()) + 1;
  std::map<int, int> head_of;
  std::map<int, std::string> label_of;
  std::vector<int> orphans;
  for (int i : keep) {
    int h;
    std::string label = tree.label(i);
    if (auto mv = moves.find(i); mv != moves.end()) {
      h = mv->second.head;
      label = mv->second.label;
    } else {
      h = tree.head(i);
      while (h != 0 && !keep.count(h)) h = tree.head(h);
    }
    if (h == 0) orphans.push_back(i);
    head_of[i] = h;
    label_of[i] = label;
  }
  if (orphans.empty()) throw Error("restricted tree has no root");
  int root = *std::min_element(orphans.begin(), orphans.end(), [&](int a, int b) {
    return std::pair(tree.Depth(a), a) < std::pair(tree.Depth(b), b);
  });
  std::vector<Token> tokens;
  std::vector<int> heads;
  std::vector<std::string> labels;
  for (int i : keep) {
    Token t = tree.token(i);
    t.index = new_index[i];
    tokens.push_back(t);
    if (i == root) {
      heads.push_back(0);
      labels.push_back("root");
    } else {
      int h = head_of[i] == 0 ? root : head_of[i];
      heads.push_back(new_index.at(h));
      labels.push_back(label_of[i] == "root" ? "dep" : label_of[i]);
    }
  }
  Question sub = MakeQuestion(qid, DepTree(std::move(tokens), std::move(heads), std::move(labels)));
  sub.qword_index = new_index.at(q.qword_index);
  return sub;
}

std::set<int> AllTokens(const DepTree &tree) {
  std::set<int> all;
  for (int i = 1; i <= tree.size(); ++i) all.insert(i);
  return all;
}

using Split_ = std::vector<std::pair<std::set<int>, std::map<int, Reattach>>>;

Split_ ApplyArgs(const Question &q, const DecompositionPattern &p) {
  const DepTree &tree = q.tree;
  std::vector<int> in_a, in_b, args;
  for (int c : tree.Children(tree.root())) {
    auto sub = tree.Subtree(c);
    if (sub.count(q.qword_index) || !EntityBearing(tree, sub)) continue;
    bool a = p.labels_a.count(tree.label(c)) > 0;
    bool b = p.labels_b.count(tree.label(c)) > 0;
    if (a) in_a.push_back(c);
    if (b) in_b.push_back(c);
    if (a || b) args.push_back(c);
  }
  bool fires = false;
  for (int x : in_a) {
    for (int y : in_b) fires |= x != y;
  }
  if (!fires) return {};
  Split_ out;
  for (int keep_arg : args) {
    std::set<int> keep = AllTokens(tree);
    for (int other : args) {
      if (other != keep_arg) keep = Minus(keep, tree.Subtree(other));
    }
    out.push_back({keep, {}});
  }
  return out;
}

Split_ ApplyCoord(const Question &q, const DecompositionPattern &p) {
  const DepTree &tree = q.tree;
  for (int x = 1; x <= tree.size(); ++x) {
    std::vector<int> alts;
    std::set<int> glue;  // coordinators and punctuation between alternatives
    for (int c : tree.Children(x)) {
      if (p.labels_a.count(tree.label(c)) && EntityBearing(tree, tree.Subtree(c))) alts.push_back(c);
      if (tree.label(c) == "cc" || tree.label(c) == "punct") glue.insert(c);
    }
    if (alts.empty()) continue;
    std::set<int> region = Minus(tree.Subtree(x), glue);
    for (int y : alts) region = Minus(region, tree.Subtree(y));
    if (region.count(q.qword_index) || !EntityBearing(tree, region)) continue;
    for (int y : alts) {
      if (tree.Subtree(y).count(q.qword_index)) return {};
    }
    Split_ out;
    std::set<int> first = Minus(AllTokens(tree), glue);
    for (int y : alts) first = Minus(first, tree.Subtree(y));
    out.push_back({first, {}});
    for (int y : alts) {
      std::set<int> keep = Minus(Minus(AllTokens(tree), glue), region);
      for (int other : alts) {
        if (other != y) keep = Minus(keep, tree.Subtree(other));
      }
      out.push_back({keep, {{y, Reattach{tree.head(x), tree.label(x)}}}});
    }
    return out;
  }
  return {};
}

Split_ ApplyRelcl(const Question &q, const DecompositionPattern &p) {
  static const std::set<std::string> kRelativizers = {"that", "who", "which", "whom"};
  const DepTree &tree = q.tree;
  for (int x = 1; x <= tree.size(); ++x) {
    for (int r : tree.Children(x)) {
      if (!p.labels_a.count(tree.label(r))) continue;
      auto clause = tree.Subtree(r);
      if (clause.count(q.qword_index) || !tree.Subtree(x).count(q.qword_index)) continue;
      std::set<int> matrix = Minus(AllTokens(tree), clause);
      if (!EntityBearing(tree, clause) || !EntityBearing(tree, matrix)) continue;
      int rel = 0;
      for (int c : tree.Children(r)) {
        if (kRelativizers.count(Lowercase(tree.token(c).lemma))) {
          rel = c;
          break;
        }
      }
      std::set<int> keep = tree.Subtree(x);
      std::map<int, Reattach> moves;
      moves[r] = Reattach{0, "root"};
      moves[x] = Reattach{r, rel ? tree.label(rel) : std::string("nsubj")};
      if (rel) keep.erase(rel);
      return {{matrix, {}}, {keep, moves}};
    }
  }
  return {};
}

Split_ ApplyAdvcl(const Question &q, const DecompositionPattern &p) {
  const DepTree &tree = q.tree;
  for (int c : tree.Children(tree.root())) {
    if (!p.labels_a.count(tree.label(c))) continue;
    auto clause = tree.Subtree(c);
    if (clause.count(q.qword_index)) continue;
    int marker = 0;
    for (int k : tree.Children(c)) {
      if (p.labels_b.count(Lowercase(tree.token(k).lemma))) marker = k;
    }
    if (marker == 0) continue;
    std::set<int> matrix = Minus(AllTokens(tree), clause);
    if (!EntityBearing(tree, clause) || !EntityBearing(tree, matrix)) continue;
    std::set<int> keep = clause;
    keep.erase(marker);
    keep.insert(q.qword_index);
    std::map<int, Reattach> moves;
    moves[c] = Reattach{0, "root"};
    moves[q.qword_index] = Reattach{c, tree.label(q.qword_index)};
    return {{matrix, {}}, {keep, moves}};
  }
  return {};
}

}  // namespace

DecompositionRules DecompositionRules::Default() {
  return Parse(
      "P1\targs\tnsubj,nsubjpass,dobj,iobj,attr\tnsubj,nsubjpass,dobj,iobj,attr\n"
      "P2\tcoord\tconj\n"
      "P3\targs\tnsubj,nsubjpass,dobj,iobj,attr\tprep,obl,nmod\n"
      "P4\tcoord\tappos\n"
      "P5\trelcl\trcmod,acl:relcl,acl\n"
      "P6\tadvcl\tadvcl\twhen,where\n");
}

DecompositionRules DecompositionRules::Parse(const std::string &text) {
  static const std::set<std::string> kKinds = {"args", "coord", "relcl", "advcl"};
  DecompositionRules rules;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (Trim(line).empty() || line[0] == '#') continue;
    auto f = Split(line, '\t');
    if (f.size() < 3 || f.size() > 4 || !kKinds.count(f[1])) {
      throw Error("bad decomposition pattern at line " + std::to_string(lineno));
    }
    DecompositionPattern p;
    p.name = f[0];
    p.kind = f[1];
    p.labels_a = LabelSet(f[2]);
    if (f.size() == 4) p.labels_b = LabelSet(f[3]);
    if ((p.kind == "args" || p.kind == "advcl") && p.labels_b.empty()) {
      throw Error("pattern " + p.name + " needs a second label set");
    }
    rules.patterns.push_back(std::move(p));
  }
  return rules;
}

DecompositionRules DecompositionRules::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::vector<Question> Decompose(const Question &q, const DecompositionRules &rules) {
  if (!q.answerable()) return {q};
  for (const auto &p : rules.patterns) {
    Split_ parts;
    if (p.kind == "args") parts = ApplyArgs(q, p);
    if (p.kind == "coord") parts = ApplyCoord(q, p);
    if (p.kind == "relcl") parts = ApplyRelcl(q, p);
    if (p.kind == "advcl") parts = ApplyAdvcl(q, p);
    if (parts.size() < 2) continue;
    std::vector<Question> out;
    for (size_t k = 0; k < parts.size(); ++k) {
      Question sub = Restrict(q, parts[k].first, parts[k].second, q.qid + "." + std::to_string(k + 1));
      for (auto &leaf : Decompose(sub, rules)) out.push_back(std::move(leaf));
    }
    return out;
  }
  return {q};
}

// ----------------------------------------------------------------------------
// Fallback parser.

std::map<std::string, std::string> BuildPosLexicon(const std::vector<Question> &questions) {
  std::map<std::string, std::map<std::string, int>> counts;
  for (const auto &q : questions) {
    for (const auto &t : q.tree.tokens()) ++counts[Lowercase(t.surface)][t.pos];
  }
  std::map<std::string, std::string> lexicon;
  for (const auto &[word, tags] : counts) {
    auto best = std::max_element(tags.begin(), tags.end(),
                                 [](const auto &a, const auto &b) { return a.second < b.second; });
    lexicon[word] = best->first;
  }
  return lexicon;
}

Question RuleBasedParse(const std::string &qid, const std::string &raw,
                        const std::map<std::string, std::string> &lexicon) {
  static const std::map<std::string, std::string> kClosed = {
      {"who", "WP"},    {"whom", "WP"},  {"what", "WP"},  {"which", "WDT"}, {"whose", "WP$"},
      {"when", "WRB"},  {"where", "WRB"}, {"how", "WRB"}, {"why", "WRB"},   {"the", "DT"},
      {"a", "DT"},      {"an", "DT"},    {"is", "VBZ"},   {"was", "VBD"},   {"are", "VBP"},
      {"did", "VBD"},   {"does", "VBZ"}, {"do", "VBP"},   {"in", "IN"},     {"of", "IN"},
      {"for", "IN"},    {"to", "TO"},    {"at", "IN"},    {"on", "IN"},     {"by", "IN"},
      {"from", "IN"},   {"with", "IN"},  {"and", "CC"},   {"or", "CC"}};
  auto words = SplitWhitespace(raw);
  if (words.empty()) throw Error("empty question");
  const int n = static_cast<int>(words.size());
  std::vector<Token> tokens;
  for (int i = 0; i < n; ++i) {
    Token t;
    t.index = i + 1;
    t.surface = NormalizeToken(words[i]);
    t.lemma = t.surface;
    if (auto it = lexicon.find(t.surface); it != lexicon.end()) {
      t.pos = it->second;
    } else if (auto c = kClosed.find(t.surface); c != kClosed.end()) {
      t.pos = c->second;
    } else {
      t.pos = "NN";
    }
    tokens.push_back(t);
  }
  auto is = [&](int i, const char *prefix) { return StartsWith(tokens[i].pos, prefix); };
  auto is_aux = [&](int i) {
    static const std::set<std::string> kAux = {"did", "does", "do", "is", "was", "are"};
    return kAux.count(tokens[i].surface) > 0;
  };
  // Root: first non-auxiliary verb, else the last auxiliary, else the first noun.
  int root = -1;
  for (int i = 0; i < n && root < 0; ++i) {
    if (is(i, "VB") && !is_aux(i)) root = i;
  }
  for (int i = 0; i < n && root < 0; ++i) {
    if (is(i, "VB")) root = i;
  }
  for (int i = 0; i < n && root < 0; ++i) {
    if (is(i, "NN")) root = i;
  }
  if (root < 0) root = 0;

  std::vector<int> heads(n, root + 1);
  std::vector<std::string> labels(n, "dep");
  heads[root] = 0;
  labels[root] = "root";
  int i = 0;
  while (i < n) {
    if (i == root || !is(i, "NN")) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && j + 1 != root && is(j + 1, "NN")) ++j;
    for (int k = i; k < j; ++k) {
      heads[k] = j + 1;
      labels[k] = "compound";
    }
    // Determiners and adjectives directly before the run attach to its head.
    for (int k = i - 1; k >= 0 && k != root && (is(k, "DT") || is(k, "JJ")); --k) {
      heads[k] = j + 1;
      labels[k] = is(k, "DT") ? "det" : "amod";
    }
    if (i > 0 && (is(i - 1, "IN") || is(i - 1, "TO")) && i - 1 != root) {
      heads[j] = i;
      labels[j] = "pobj";
    } else {
      labels[j] = j < root ? "nsubj" : "dobj";
    }
    i = j + 1;
  }
  for (int k = 0; k < n; ++k) {
    if (k == root) continue;
    if (labels[k] == "dep") {
      if (is(k, "IN") || is(k, "TO")) labels[k] = "prep";
      else if (is(k, "VB")) labels[k] = "aux";
      else if (is(k, "W")) labels[k] = k < root ? "dobj" : "dep";
    }
  }
  return MakeQuestion(qid, DepTree(std::move(tokens), std::move(heads), std::move(labels)));
}

}  // namespace kbqa
