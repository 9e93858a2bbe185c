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

#include "kbqa/kb.h"

#include <algorithm>
#include <fstream>

namespace kbqa {

namespace {

const std::vector<std::pair<RelationId, EntityId>> kNoEdges;

std::string Location(const std::string &path, int line) {
  return path + ":" + std::to_string(line);
}

std::ifstream OpenOrThrow(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

bool SkipLine(const std::string &line) {
  return line.empty() || line[0] == '#' || Trim(line).empty();
}

}  // namespace

RelationId::RelationId(std::string id) : id_(std::move(id)) {
  if (!IsValid(id_)) throw Error("malformed relation id '" + id_ + "'");
}

bool RelationId::IsValid(const std::string &id) {
  auto parts = Split(id, '.');
  if (parts.size() < 3) return false;
  return std::none_of(parts.begin(), parts.end(), [](const std::string &p) { return p.empty(); });
}

std::string RelationId::LastFragment() const {
  auto pos = id_.rfind('.');
  return pos == std::string::npos ? id_ : id_.substr(pos + 1);
}

RelationPath::RelationPath(RelationId hop) { hops_.push_back(std::move(hop)); }

RelationPath::RelationPath(RelationId first, RelationId second) {
  hops_.push_back(std::move(first));
  hops_.push_back(std::move(second));
}

std::string RelationPath::ToString() const {
  std::string out;
  for (size_t i = 0; i < hops_.size(); ++i) {
    if (i > 0) out += '>';
    out += hops_[i].str();
  }
  return out;
}

RelationPath RelationPath::Parse(const std::string &text) {
  auto parts = Split(text, '>');
  if (parts.size() == 1) return RelationPath(RelationId(parts[0]));
  if (parts.size() == 2) return RelationPath(RelationId(parts[0]), RelationId(parts[1]));
  throw Error("malformed relation path '" + text + "'");
}

std::strong_ordering RelationPath::operator<=>(const RelationPath &other) const {
  if (auto c = hops_.size() <=> other.hops_.size(); c != 0) return c;
  for (size_t i = 0; i < hops_.size(); ++i) {
    if (auto c = hops_[i] <=> other.hops_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

KBGraph::KBGraph(std::vector<Entity> entities, std::vector<Triple> triples,
                 const std::vector<std::tuple<std::string, EntityId, int>> &alias_counts) {
  for (auto &e : entities) {
    if (e.id.empty()) throw Error("empty entity id");
    if (entities_.count(e.id)) throw Error("duplicate entity " + e.id);
    if (e.is_mediator) {
      if (!e.aliases.empty()) throw Error("mediator " + e.id + " has aliases");
    } else if (std::find(e.aliases.begin(), e.aliases.end(), e.name) == e.aliases.end()) {
      e.aliases.insert(e.aliases.begin(), e.name);
    }
    entities_.emplace(e.id, std::move(e));
  }
  for (auto &t : triples) {
    if (!entities_.count(t.subject)) throw Error("unknown entity " + t.subject);
    if (!entities_.count(t.object)) throw Error("unknown entity " + t.object);
    edges_.insert(std::move(t));
  }
  for (const auto &t : edges_) {
    out_[t.subject].emplace_back(t.relation, t.object);
    in_[t.object].emplace_back(t.relation, t.subject);
  }
  for (auto &[id, list] : in_) std::sort(list.begin(), list.end());

  std::map<std::pair<std::string, EntityId>, int> counts;
  for (const auto &[id, e] : entities_) {
    for (const auto &alias : e.aliases) counts[{Lowercase(alias), id}] = 1;
  }
  for (const auto &[surface, id, count] : alias_counts) {
    if (!entities_.count(id)) throw Error("unknown entity " + id);
    if (entities_.at(id).is_mediator) throw Error("alias count for mediator " + id);
    if (count < 1) throw Error("alias count must be >= 1 for " + surface);
    counts[{Lowercase(surface), id}] = count;
  }
  for (const auto &[key, count] : counts) {
    alias_index_[key.first].push_back(AliasEntry{key.second, count});
  }
}

const Entity &KBGraph::Get(const EntityId &id) const {
  auto it = entities_.find(id);
  if (it == entities_.end()) throw Error("unknown entity " + id);
  return it->second;
}

const std::vector<std::pair<RelationId, EntityId>> &KBGraph::Out(const EntityId &id) const {
  auto it = out_.find(id);
  return it == out_.end() ? kNoEdges : it->second;
}

const std::vector<std::pair<RelationId, EntityId>> &KBGraph::In(const EntityId &id) const {
  auto it = in_.find(id);
  return it == in_.end() ? kNoEdges : it->second;
}

EntitySet KBGraph::Query(const EntityId &e, const RelationPath &path) const {
  Get(e);
  EntitySet answers;
  if (path.size() == 0) return answers;
  for (const auto &[rel, obj] : Out(e)) {
    if (rel != path.hops()[0]) continue;
    const Entity &target = Get(obj);
    if (!path.two_hop()) {
      if (!target.is_mediator) answers.insert(obj);
      continue;
    }
    if (!target.is_mediator) continue;
    for (const auto &[rel2, obj2] : Out(obj)) {
      if (rel2 == path.hops()[1] && !Get(obj2).is_mediator) answers.insert(obj2);
    }
  }
  return answers;
}

std::vector<RelationPath> KBGraph::CandidateRelationPaths(const EntityId &e) const {
  Get(e);
  std::set<RelationPath> paths;
  for (const auto &[rel, obj] : Out(e)) {
    if (!Get(obj).is_mediator) {
      paths.insert(RelationPath(rel));
      continue;
    }
    for (const auto &[rel2, obj2] : Out(obj)) {
      if (!Get(obj2).is_mediator) paths.insert(RelationPath(rel, rel2));
    }
  }
  return {paths.begin(), paths.end()};
}

std::string KBGraph::AnswerType(const EntityId &id) const {
  std::map<std::string, int> freq;
  for (const auto &[rel, subj] : In(id)) ++freq[rel.LastFragment()];
  std::string best;
  int best_count = 0;
  for (const auto &[frag, count] : freq) {
    if (count > best_count) {
      best = frag;
      best_count = count;
    }
  }
  return best;
}

void KBGraph::SaveTriples(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto &t : edges_) {
    out << t.subject << '\t' << t.relation.str() << '\t' << t.object << '\n';
  }
}

KBGraph LoadKB(const std::string &triples_path, const std::string &entities_path,
               const std::string &alias_counts_path) {
  std::vector<Entity> entities;
  {
    auto in = OpenOrThrow(entities_path);
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (SkipLine(line)) continue;
      auto f = Split(line, '\t');
      if (f.size() < 4 || f.size() > 5 || f[0].empty() || (f[3] != "0" && f[3] != "1")) {
        throw Error("malformed line at " + Location(entities_path, lineno));
      }
      Entity e;
      e.id = f[0];
      e.name = f[1];
      if (!f[2].empty()) {
        for (auto &a : Split(f[2], '|')) {
          if (a.empty()) throw Error("empty alias at " + Location(entities_path, lineno));
          e.aliases.push_back(a);
        }
      }
      e.is_mediator = f[3] == "1";
      if (f.size() == 5) e.description = f[4];
      entities.push_back(std::move(e));
    }
  }
  std::vector<Triple> triples;
  {
    auto in = OpenOrThrow(triples_path);
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (SkipLine(line)) continue;
      auto f = Split(line, '\t');
      if (f.size() != 3 || f[0].empty() || f[2].empty() || !RelationId::IsValid(f[1])) {
        throw Error("malformed line at " + Location(triples_path, lineno));
      }
      triples.push_back(Triple{f[0], RelationId(f[1]), f[2]});
    }
  }
  std::vector<std::tuple<std::string, EntityId, int>> counts;
  if (!alias_counts_path.empty()) {
    auto in = OpenOrThrow(alias_counts_path);
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (SkipLine(line)) continue;
      auto f = Split(line, '\t');
      int count = 0;
      try {
        if (f.size() == 3) count = std::stoi(f[2]);
      } catch (const std::exception &) {
      }
      if (f.size() != 3 || f[0].empty() || count < 1) {
        throw Error("malformed line at " + Location(alias_counts_path, lineno));
      }
      counts.emplace_back(f[0], f[1], count);
    }
  }
  return KBGraph(std::move(entities), std::move(triples), counts);
}

KBGraph LoadKBDir(const std::string &dir) {
  std::string counts = dir + "/aliases_counts.tsv";
  if (!std::ifstream(counts)) counts.clear();
  return LoadKB(dir + "/triples.tsv", dir + "/entities.tsv", counts);
}

double F1Score(const EntitySet &predicted, const EntitySet &gold) {
  if (predicted.empty() && gold.empty()) return 1.0;
  if (predicted.empty() || gold.empty()) return 0.0;
  size_t hit = 0;
  for (const auto &p : predicted) hit += gold.count(p);
  if (hit == 0) return 0.0;
  double precision = static_cast<double>(hit) / predicted.size();
  double recall = static_cast<double>(hit) / gold.size();
  return 2 * precision * recall / (precision + recall);
}

std::optional<RelationPath> SurrogateGoldRelation(const KBGraph &kb, const EntityId &e,
                                                  const EntitySet &gold) {
  std::optional<RelationPath> best;
  double best_f1 = 0.0;
  // Candidates arrive in tie-break order, so a strict '>' keeps the first.
  for (const auto &path : kb.CandidateRelationPaths(e)) {
    double f1 = F1Score(kb.Query(e, path), gold);
    if (f1 > best_f1) {
      best_f1 = f1;
      best = path;
    }
  }
  return best;
}

}  // namespace kbqa
