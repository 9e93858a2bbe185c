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

// Multi-channel convolutional relation classifier.
//
// Each channel embeds a symbol sequence, slides a window of `window` tokens
// over it, applies a convolution + tanh, max-pools over positions and feeds
// the pooled vector through a dense tanh layer. The two channel outputs are
// concatenated and classified with a softmax over relation paths. The
// syntactic channel reads the dependency path between the question word and
// the mention (directions, labels and words share one embedding table); the
// sentential channel reads the remaining lemmas of the question.
//
// Training minimises cross-entropy plus lambda * |theta|^2 with per-example
// AdaGrad updates.

#ifndef KBQA_MCCNN_H_
#define KBQA_MCCNN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kbqa/kb.h"
#include "kbqa/linguistics.h"

namespace kbqa {

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocab();

  int Add(const std::string &symbol);
  int Lookup(const std::string &symbol) const;  // kUnk when absent
  bool Contains(const std::string &symbol) const { return index_.count(symbol) > 0; }
  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string &symbol(int index) const { return symbols_.at(index); }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, int> index_;
};

// Bijection between relation paths and class indices, in insertion order.
class RelationLabelIndex {
 public:
  int Add(const RelationPath &path);
  std::optional<int> Find(const RelationPath &path) const;
  int size() const { return static_cast<int>(paths_.size()); }
  const RelationPath &path(int k) const { return paths_.at(k); }

 private:
  std::vector<RelationPath> paths_;
  std::map<RelationPath, int> index_;
};

// Symbol sequences fed to the two channels. An upward edge renders as
// "dir:<-" "dep:<label>", a downward edge as "dep:<label>" "dir:->".
std::vector<std::string> SyntacticSymbols(const std::vector<DepPathElement> &path);
std::vector<std::string> SententialSymbols(const Question &q, const std::optional<MentionSpan> &m);

struct ChannelInput {
  std::vector<int> syntactic;
  std::vector<int> sentential;
};

struct TrainingExample {
  ChannelInput input;
  int label = 0;
};

// Index sequences for both channels. OOV symbols map to UNK; sequences
// shorter than `window` are padded with PAD.
ChannelInput EncodeInputs(const Question &q, const MentionSpan &m, const Vocab &vocab, int window);

enum class Channels { kBoth, kSyntactic, kSentential };

std::string ChannelsName(Channels c);
Channels ParseChannels(const std::string &name);

struct MccnnConfig {
  int embedding_dim = 50;
  int window = 3;
  int hidden1 = 200;
  int hidden2 = 100;
  Channels channels = Channels::kBoth;
  double learning_rate = 0.01;
  double l2 = 1e-4;
  double adagrad_eps = 1e-8;
  int epochs = 30;
  uint64_t seed = 1;
};

// One parameter matrix with its AdaGrad accumulator (row-major).
struct ParamBlock {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> value;
  std::vector<double> accum;

  double &at(int r, int c) { return value[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return value[static_cast<size_t>(r) * cols + c]; }
};

using Gradients = std::vector<std::vector<double>>;  // parallel to blocks()

class MccnnModel {
 public:
  enum Block {
    kEmbedding,
    kSynConvW, kSynConvB, kSynHiddenW, kSynHiddenB,
    kSenConvW, kSenConvB, kSenHiddenW, kSenHiddenB,
    kOutW, kOutB,
    kNumBlocks
  };

  MccnnModel() = default;
  // All parameters zero.
  MccnnModel(int vocab_size, int num_classes, const MccnnConfig &config);

  // Uniform Glorot initialisation of weights from `seed`; embeddings
  // uniform(-0.1, 0.1) except rows present in `pretrained`. PAD stays zero.
  void RandomInit(uint64_t seed, const Vocab *vocab = nullptr,
                  const std::map<std::string, std::vector<double>> *pretrained = nullptr);

  int vocab_size() const { return blocks_.empty() ? 0 : blocks_[kEmbedding].rows; }
  int num_classes() const { return blocks_.empty() ? 0 : blocks_[kOutB].rows; }
  const MccnnConfig &config() const { return config_; }
  MccnnConfig &mutable_config() { return config_; }

  std::vector<ParamBlock> &blocks() { return blocks_; }
  const std::vector<ParamBlock> &blocks() const { return blocks_; }

  // Probability vector over the K classes. Throws on out-of-range indices.
  std::vector<double> Forward(const ChannelInput &input) const;

  // J = sum of cross-entropies over the batch + lambda * |theta|^2, with the
  // exact gradient of J in `grads` (resized as needed).
  double LossAndGradients(const std::vector<TrainingExample> &batch, double lambda,
                          Gradients *grads) const;

  // theta <- theta - lr * g / sqrt(G + eps), G accumulating g^2. The PAD
  // embedding row is never updated.
  void ApplyAdagrad(const Gradients &grads, double learning_rate);

  bool operator==(const MccnnModel &other) const;

 private:
  struct ChannelState;
  void ForwardChannel(const std::vector<int> &seq, int conv_w, ChannelState *state) const;

  MccnnConfig config_;
  std::vector<ParamBlock> blocks_;
};

struct MccnnTrainReport {
  std::vector<double> epoch_loss;  // mean per-example J
  std::vector<double> epoch_accuracy;
};

// Per-example AdaGrad SGD for config.epochs epochs, shuffling with
// config.seed. Throws with the offending parameter block on a non-finite
// loss or gradient.
MccnnTrainReport TrainMccnn(MccnnModel *model, const std::vector<TrainingExample> &dataset);

// Reads "word v1 ... vd" lines; every vector must have `dim` entries.
std::map<std::string, std::vector<double>> LoadEmbeddings(const std::string &path, int dim);

// A question/mention pair labelled with its gold relation path.
struct RelationExample {
  Question question;
  MentionSpan mention;
  RelationPath relation;
};

// Vocabulary, label index and model together; what gets saved to disk.
class RelationExtractor {
 public:
  RelationExtractor() = default;

  // Builds vocab and labels from the examples, initialises and trains.
  static RelationExtractor Train(const std::vector<RelationExample> &examples, const MccnnConfig &config,
                                 const std::map<std::string, std::vector<double>> *pretrained = nullptr,
                                 MccnnTrainReport *report = nullptr);

  const Vocab &vocab() const { return vocab_; }
  const RelationLabelIndex &labels() const { return labels_; }
  const MccnnModel &model() const { return model_; }
  MccnnModel &mutable_model() { return model_; }

  std::vector<double> Probabilities(const Question &q, const MentionSpan &m) const;

  // Candidates known to the label index ranked by probability; unknown
  // candidates follow with score 0 in path order.
  std::vector<std::pair<RelationPath, double>> PredictRelations(
      const Question &q, const MentionSpan &m, const std::vector<RelationPath> &candidates) const;

  // Versioned text format; doubles are stored as hex floats so a save/load
  // cycle is bit-exact.
  void Save(const std::string &path) const;
  static RelationExtractor Load(const std::string &path);

 private:
  Vocab vocab_;
  RelationLabelIndex labels_;
  MccnnModel model_;
};

}  // namespace kbqa

#endif  // KBQA_MCCNN_H_
