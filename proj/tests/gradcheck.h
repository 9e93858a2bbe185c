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

// Central finite-difference check of MccnnModel::LossAndGradients.

#ifndef KBQA_TESTS_GRADCHECK_H_
#define KBQA_TESTS_GRADCHECK_H_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "kbqa/mccnn.h"

namespace kbqa::testing {

struct BlockError {
  std::string name;
  double rel_error = 0;
};

// Random small model and batch; every block contributes gradient.
inline MccnnModel SmallModel(uint64_t seed, int vocab = 12, int classes = 3) {
  MccnnConfig c;
  c.embedding_dim = 8;
  c.window = 3;
  c.hidden1 = 6;
  c.hidden2 = 4;
  MccnnModel m(vocab, classes, c);
  m.RandomInit(seed);
  // Larger weights keep tanh off the flat region but out of saturation.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> b(-0.3, 0.3);
  for (auto &blk : m.blocks()) {
    if (blk.cols == 1) {
      for (double &v : blk.value) v = b(rng);
    }
  }
  return m;
}

inline std::vector<TrainingExample> SmallBatch(uint64_t seed, int vocab = 12, int classes = 3) {
  std::mt19937_64 rng(seed + 17);
  std::uniform_int_distribution<int> sym(2, vocab - 1), len(1, 7), lab(0, classes - 1);
  std::vector<TrainingExample> batch;
  for (int i = 0; i < 4; ++i) {
    TrainingExample ex;
    for (int n = len(rng); n > 0; --n) ex.input.syntactic.push_back(sym(rng));
    for (int n = len(rng); n > 0; --n) ex.input.sentential.push_back(sym(rng));
    while (ex.input.syntactic.size() < 3) ex.input.syntactic.push_back(Vocab::kPad);
    while (ex.input.sentential.size() < 3) ex.input.sentential.push_back(Vocab::kPad);
    ex.label = lab(rng);
    batch.push_back(ex);
  }
  return batch;
}

// Per-block relative error |a - n| / (|a| + |n|) (vector 2-norms), eps 1e-5.
inline std::vector<BlockError> GradCheck(MccnnModel model, const std::vector<TrainingExample> &batch,
                                         double lambda) {
  Gradients analytic;
  model.LossAndGradients(batch, lambda, &analytic);
  std::vector<BlockError> out;
  const double eps = 1e-5;
  Gradients scratch;
  for (size_t b = 0; b < model.blocks().size(); ++b) {
    auto &values = model.blocks()[b].value;
    double diff = 0, na = 0, nn = 0;
    for (size_t i = 0; i < values.size(); ++i) {
      // The PAD row is a constant of the model, not a parameter.
      if (b == MccnnModel::kEmbedding && i < static_cast<size_t>(model.blocks()[b].cols)) continue;
      double saved = values[i];
      values[i] = saved + eps;
      double plus = model.LossAndGradients(batch, lambda, &scratch);
      values[i] = saved - eps;
      double minus = model.LossAndGradients(batch, lambda, &scratch);
      values[i] = saved;
      double numeric = (plus - minus) / (2 * eps);
      double a = analytic[b][i];
      diff += (a - numeric) * (a - numeric);
      na += a * a;
      nn += numeric * numeric;
    }
    double denom = std::sqrt(na) + std::sqrt(nn);
    out.push_back({model.blocks()[b].name, denom == 0 ? 0.0 : std::sqrt(diff) / denom});
  }
  return out;
}

}  // namespace kbqa::testing

#endif  // KBQA_TESTS_GRADCHECK_H_
