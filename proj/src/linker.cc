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

#include "kbqa/linker.h"

#include <algorithm>
#include <map>
#include <set>

namespace kbqa {

std::vector<EntityCandidate> Link(const KBGraph &kb, const MentionSpan &m,
                                  const LinkerOptions &options) {
  const std::string surface = Lowercase(m.surface);
  std::map<EntityId, int> counts;
  const auto &index = kb.alias_index();
  if (auto it = index.find(surface); it != index.end()) {
    for (const auto &entry : it->second) counts[entry.entity] += entry.count;
  } else {
    auto wanted = SplitWhitespace(surface);
    if (wanted.empty()) return {};
    for (const auto &[alias, entries] : index) {
      auto words = SplitWhitespace(alias);
      std::set<std::string> have(words.begin(), words.end());
      bool all = std::all_of(wanted.begin(), wanted.end(),
                             [&](const std::string &w) { return have.count(w) > 0; });
      if (!all) continue;
      // An entity reached through several aliases keeps its best count.
      for (const auto &entry : entries) {
        counts[entry.entity] = std::max(counts[entry.entity], entry.count);
      }
    }
  }
  double total = 0.0;
  for (const auto &[id, c] : counts) total += c + options.alpha;
  std::vector<EntityCandidate> out;
  for (const auto &[id, c] : counts) out.push_back({id, m, (c + options.alpha) / total});
  std::sort(out.begin(), out.end(), [](const EntityCandidate &a, const EntityCandidate &b) {
    if (a.link_score != b.link_score) return a.link_score > b.link_score;
    return a.entity < b.entity;
  });
  if (static_cast<int>(out.size()) > options.top_k) out.resize(options.top_k);
  return out;
}

std::vector<EntityCandidate> LinkAll(const KBGraph &kb, const Question &q,
                                     const MentionPatterns &patterns, const LinkerOptions &options) {
  std::vector<EntityCandidate> out;
  for (const auto &span : FindMentionSpans(q, patterns)) {
    for (auto &c : Link(kb, span, options)) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace kbqa
