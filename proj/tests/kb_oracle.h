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

// Brute-force reference implementations for the triple store, written
// directly against the edge list so they share no code with KBGraph's
// adjacency-based queries.

#ifndef KBQA_TESTS_KB_ORACLE_H_
#define KBQA_TESTS_KB_ORACLE_H_

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kbqa/kb.h"

namespace kbqa::testing {

struct OracleEdge {
  std::string s, r, o;
};

inline std::vector<OracleEdge> EdgeList(const KBGraph &kb) {
  std::vector<OracleEdge> out;
  for (const auto &t : kb.edges()) out.push_back({t.subject, t.relation.str(), t.object});
  return out;
}

inline std::set<std::string> OracleAnswers(const KBGraph &kb, const std::string &e,
                                           const std::vector<std::string> &hops) {
  auto edges = EdgeList(kb);
  auto mediator = [&](const std::string &id) { return kb.entities().at(id).is_mediator; };
  std::set<std::string> out;
  for (const auto &a : edges) {
    if (a.s != e || a.r != hops[0]) continue;
    if (hops.size() == 1) {
      if (!mediator(a.o)) out.insert(a.o);
      continue;
    }
    if (!mediator(a.o)) continue;
    for (const auto &b : edges) {
      if (b.s == a.o && b.r == hops[1] && !mediator(b.o)) out.insert(b.o);
    }
  }
  return out;
}

inline double OracleF1(const std::set<std::string> &pred, const std::set<std::string> &gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  int hit = 0;
  for (const auto &p : pred) hit += gold.count(p) ? 1 : 0;
  if (hit == 0) return 0.0;
  double p = double(hit) / pred.size(), r = double(hit) / gold.size();
  return 2 * p * r / (p + r);
}

// Scores every 1-hop and 2-hop path independently and picks the best by
// (F1 desc, hop count asc, hop strings asc).
inline std::optional<std::vector<std::string>> OracleSurrogate(const KBGraph &kb, const std::string &e,
                                                               const std::set<std::string> &gold) {
  auto edges = EdgeList(kb);
  auto mediator = [&](const std::string &id) { return kb.entities().at(id).is_mediator; };
  std::set<std::vector<std::string>> paths;
  for (const auto &a : edges) {
    if (a.s != e) continue;
    if (!mediator(a.o)) paths.insert({a.r});
    for (const auto &b : edges) {
      if (mediator(a.o) && b.s == a.o && !mediator(b.o)) paths.insert({a.r, b.r});
    }
  }
  std::optional<std::vector<std::string>> best;
  double best_f1 = 0;
  for (const auto &p : paths) {
    double f1 = OracleF1(OracleAnswers(kb, e, p), gold);
    bool better = false;
    if (!best) {
      better = f1 > 0;
    } else if (f1 > best_f1) {
      better = true;
    } else if (f1 == best_f1) {
      better = p.size() < best->size() || (p.size() == best->size() && p < *best);
    }
    if (better) {
      best = p;
      best_f1 = f1;
    }
  }
  return best;
}

// Random graph: `n` entities (about a quarter mediators), `edges` triples
// over a small relation vocabulary so paths collide often.
inline KBGraph RandomGraph(std::mt19937_64 &rng, int n, int edges) {
  std::vector<Entity> entities;
  for (int i = 0; i < n; ++i) {
    Entity e;
    e.id = "m.e" + std::to_string(i);
    e.is_mediator = (i % 4 == 3);
    if (!e.is_mediator) {
      e.name = "entity " + std::to_string(i);
      e.aliases = {e.name};
    }
    entities.push_back(e);
  }
  const std::vector<std::string> rels = {"a.b.c", "a.b.d", "x.y.z", "p.q.r", "p.q.s"};
  std::uniform_int_distribution<int> pick_e(0, n - 1);
  std::uniform_int_distribution<int> pick_r(0, static_cast<int>(rels.size()) - 1);
  std::vector<Triple> triples;
  for (int i = 0; i < edges; ++i) {
    int s = pick_e(rng), o = pick_e(rng);
    if (s == o) continue;
    triples.push_back({entities[s].id, RelationId(rels[pick_r(rng)]), entities[o].id});
  }
  return KBGraph(entities, triples);
}

}  // namespace kbqa::testing

#endif  // KBQA_TESTS_KB_ORACLE_H_
