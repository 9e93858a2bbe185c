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

// In-memory triple store with mediator-aware 1-hop/2-hop querying, the
// question-wise F1 metric and surrogate gold relation labeling.

#ifndef KBQA_KB_H_
#define KBQA_KB_H_

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kbqa/base.h"

namespace kbqa {

struct Entity {
  EntityId id;
  std::string name;
  std::vector<std::string> aliases;
  std::string description;
  bool is_mediator = false;
};

// Dotted relation name with at least three non-empty fragments, e.g.
// "people.person.parents".
class RelationId {
 public:
  RelationId() = default;
  explicit RelationId(std::string id);  // throws Error on a malformed id

  const std::string &str() const { return id_; }
  std::vector<std::string> Fragments() const { return Split(id_, '.'); }
  // The final fragment; names the object (answer) type.
  std::string LastFragment() const;

  static bool IsValid(const std::string &id);

  auto operator<=>(const RelationId &) const = default;

 private:
  std::string id_;
};

// One relation (1-hop) or two relations through a mediator node (2-hop).
// Ordering puts 1-hop paths before 2-hop ones, then compares hops
// lexicographically; every materialized list of paths uses it.
class RelationPath {
 public:
  RelationPath() = default;
  explicit RelationPath(RelationId hop);
  RelationPath(RelationId first, RelationId second);

  const std::vector<RelationId> &hops() const { return hops_; }
  size_t size() const { return hops_.size(); }
  bool two_hop() const { return hops_.size() == 2; }
  const RelationId &last() const { return hops_.back(); }

  // Hops joined by '>' ("a.b.c>d.e.f"). Parse() is the inverse.
  std::string ToString() const;
  static RelationPath Parse(const std::string &text);

  bool operator==(const RelationPath &other) const { return hops_ == other.hops_; }
  std::strong_ordering operator<=>(const RelationPath &other) const;

 private:
  std::vector<RelationId> hops_;
};

struct Triple {
  EntityId subject;
  RelationId relation;
  EntityId object;
  auto operator<=>(const Triple &) const = default;
};

struct AliasEntry {
  EntityId entity;
  int count = 1;
};

// Immutable after construction; all queries are const and side-effect free.
class KBGraph {
 public:
  KBGraph() = default;

  // Builds a graph from already-parsed records. Validates every invariant:
  // unique non-empty ids, names among aliases, alias-free mediators, edge
  // endpoints declared. alias_counts entries override the default count of 1.
  KBGraph(std::vector<Entity> entities, std::vector<Triple> triples,
          const std::vector<std::tuple<std::string, EntityId, int>> &alias_counts = {});

  bool Has(const EntityId &id) const { return entities_.count(id) > 0; }
  const Entity &Get(const EntityId &id) const;  // throws "unknown entity <id>"
  const std::map<EntityId, Entity> &entities() const { return entities_; }
  const std::set<Triple> &edges() const { return edges_; }

  // Outgoing (relation, object) pairs of an entity, sorted.
  const std::vector<std::pair<RelationId, EntityId>> &Out(const EntityId &id) const;
  // Incoming (relation, subject) pairs of an entity, sorted.
  const std::vector<std::pair<RelationId, EntityId>> &In(const EntityId &id) const;

  // Lowercased alias surface -> (entity, count), sorted by entity id.
  const std::map<std::string, std::vector<AliasEntry>> &alias_index() const {
    return alias_index_;
  }

  // Answers of the triple (e, path, ?). Never contains mediators.
  EntitySet Query(const EntityId &e, const RelationPath &path) const;

  // All 1-hop relations out of e plus all 2-hop paths through its mediator
  // neighbours, in RelationPath order. Enumerates everything; callers that
  // need a bound cap the result themselves.
  std::vector<RelationPath> CandidateRelationPaths(const EntityId &e) const;

  // Most frequent final fragment of relations entering `id` (ties go to the
  // lexicographically smaller fragment); empty when nothing points at it.
  std::string AnswerType(const EntityId &id) const;

  // Writes edges back in triples.tsv format, sorted.
  void SaveTriples(const std::string &path) const;

 private:
  std::map<EntityId, Entity> entities_;
  std::set<Triple> edges_;
  std::map<EntityId, std::vector<std::pair<RelationId, EntityId>>> out_;
  std::map<EntityId, std::vector<std::pair<RelationId, EntityId>>> in_;
  std::map<std::string, std::vector<AliasEntry>> alias_index_;
};

// Loads triples.tsv and entities.tsv, plus an optional aliases_counts.tsv
// (pass an empty path to skip it).
KBGraph LoadKB(const std::string &triples_path, const std::string &entities_path,
               const std::string &alias_counts_path = "");

// Loads <dir>/triples.tsv, <dir>/entities.tsv and, when present,
// <dir>/aliases_counts.tsv.
KBGraph LoadKBDir(const std::string &dir);

// F1 between two answer sets. Two empty sets score 1; one empty side scores 0.
double F1Score(const EntitySet &predicted, const EntitySet &gold);

// Candidate path whose answers have the highest F1 against gold; ties prefer
// 1-hop, then the lexicographically smaller path. nullopt when every
// candidate scores 0.
std::optional<RelationPath> SurrogateGoldRelation(const KBGraph &kb, const EntityId &e,
                                                  const EntitySet &gold);

}  // namespace kbqa

#endif  // KBQA_KB_H_
