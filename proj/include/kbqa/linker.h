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

// Count-based entity linker: surface matching against the alias index,
// ranked by a Laplace-smoothed conditional probability of entity given
// surface.

#ifndef KBQA_LINKER_H_
#define KBQA_LINKER_H_

#include <vector>

#include "kbqa/kb.h"
#include "kbqa/linguistics.h"

namespace kbqa {

struct EntityCandidate {
  EntityId entity;
  MentionSpan mention;
  double link_score = 0.0;  // in [0, 1]
};

struct LinkerOptions {
  int top_k = 5;
  double alpha = 1.0;  // additive smoothing on alias counts
};

// Exact match of the lowercased surface against aliases; if nothing matches,
// aliases whose tokens include every mention token. score(e) =
// (count(s, e) + alpha) / sum_e' (count(s, e') + alpha) over the matched
// entities. Sorted by score, then entity id; truncated to top_k.
std::vector<EntityCandidate> Link(const KBGraph &kb, const MentionSpan &m,
                                  const LinkerOptions &options = {});

// Link() over every mention span of the question, ordered by mention
// (start, end) then rank. One candidate per (mention, entity).
std::vector<EntityCandidate> LinkAll(const KBGraph &kb, const Question &q,
                                     const MentionPatterns &patterns = MentionPatterns::Default(),
                                     const LinkerOptions &options = {});

}  // namespace kbqa

#endif  // KBQA_LINKER_H_
