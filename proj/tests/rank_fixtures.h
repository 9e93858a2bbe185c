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


// Ranking groups shared by the unit tests and the acceptance checks.

#ifndef KBQA_TESTS_RANK_FIXTURES_H_
#define KBQA_TESTS_RANK_FIXTURES_H_

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "kbqa/joint.h"

namespace kbqa::testing {

inline ScoredPair Pair(std::vector<double> f, int label, const std::string &id = "m.x") {
  ScoredPair p;
  for (size_t i = 0; i < f.size(); ++i) p.features[i] = f[i];
  p.label = label;
  p.entity.entity = id;
  return p;
}

// Twenty groups whose labels follow the first feature with margin.
inline std::vector<std::vector<ScoredPair>> SeparableGroups() {
  std::vector<std::vector<ScoredPair>> groups;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int g = 0; g < 20; ++g) {
    double base = u(rng) * 5;
    groups.push_back({Pair({base + 2 + u(rng)}, 3), Pair({base + 1 + u(rng) * 0.5}, 2), Pair({base}, 1)});
  }
  return groups;
}

// Forty groups of six pairs labelled 3/2/1 by a hidden linear scorer over
// all eight features.
inline std::vector<std::vector<ScoredPair>> LinearGroups() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0, 1);
  const std::vector<double> truth = {1.5, 0.5, -0.3, 2.0, 0.8, 1.0, 0.2, -0.6};
  std::vector<std::vector<ScoredPair>> groups;
  for (int g = 0; g < 40; ++g) {
    std::vector<ScoredPair> group;
    for (int k = 0; k < 6; ++k) {
      std::vector<double> f(8);
      for (double &v : f) v = n(rng) * (1 + k % 3);
      group.push_back(Pair(f, 0));
    }
    std::vector<double> score;
    for (auto &p : group) score.push_back(std::inner_product(truth.begin(), truth.end(), p.features.begin(), 0.0));
    std::vector<size_t> idx(group.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return score[a] > score[b]; });
    group[idx[0]].label = 3;
    for (size_t r = 1; r < idx.size(); ++r) group[idx[r]].label = r < 3 ? 2 : 1;
    groups.push_back(group);
  }
  return groups;
}

}  // namespace kbqa::testing

#endif  // KBQA_TESTS_RANK_FIXTURES_H_
