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

#include "kbqa/mccnn.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace kbqa {

Vocab::Vocab() {
  Add("<pad>");
  Add("<unk>");
}

int Vocab::Add(const std::string &symbol) {
  auto [it, inserted] = index_.emplace(symbol, static_cast<int>(symbols_.size()));
  if (inserted) symbols_.push_back(symbol);
  return it->second;
}

int Vocab::Lookup(const std::string &symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? kUnk : it->second;
}

int RelationLabelIndex::Add(const RelationPath &path) {
  auto [it, inserted] = index_.emplace(path, static_cast<int>(paths_.size()));
  if (inserted) paths_.push_back(path);
  return it->second;
}

std::optional<int> RelationLabelIndex::Find(const RelationPath &path) const {
  auto it = index_.find(path);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> SyntacticSymbols(const std::vector<DepPathElement> &path) {
  std::vector<std::string> out;
  for (const auto &e : path) {
    if (e.kind == DepPathElement::Kind::kWord) {
      out.push_back(e.value);
    } else if (e.direction == EdgeDirection::kUp) {
      out.push_back("dir:<-");
      out.push_back("dep:" + e.value);
    } else {
      out.push_back("dep:" + e.value);
      out.push_back("dir:->");
    }
  }
  return out;
}

std::vector<std::string> SententialSymbols(const Question &q, const std::optional<MentionSpan> &m) {
  return SententialContext(q, m);
}

namespace {

std::vector<int> EncodeSequence(const std::vector<std::string> &symbols, const Vocab &vocab, int window) {
  std::vector<int> seq;
  for (const auto &s : symbols) seq.push_back(vocab.Lookup(s));
  while (static_cast<int>(seq.size()) < window) seq.push_back(Vocab::kPad);
  return seq;
}

double Glorot(int fan_in, int fan_out) { return std::sqrt(6.0 / (fan_in + fan_out)); }

}  // namespace

ChannelInput EncodeInputs(const Question &q, const MentionSpan &m, const Vocab &vocab, int window) {
  ChannelInput in;
  in.syntactic = EncodeSequence(SyntacticSymbols(ShortestDepPath(q, m)), vocab, window);
  in.sentential = EncodeSequence(SententialSymbols(q, m), vocab, window);
  return in;
}

std::string ChannelsName(Channels c) {
  switch (c) {
    case Channels::kBoth: return "both";
    case Channels::kSyntactic: return "syntactic";
    case Channels::kSentential: return "sentential";
  }
  return "both";
}

Channels ParseChannels(const std::string &name) {
  if (name == "both") return Channels::kBoth;
  if (name == "syntactic") return Channels::kSyntactic;
  if (name == "sentential") return Channels::kSentential;
  throw Error("unknown channel setting '" + name + "'");
}

// ----------------------------------------------------------------------------
// Model.

MccnnModel::MccnnModel(int vocab_size, int num_classes, const MccnnConfig &config) : config_(config) {
  if (vocab_size < 2 || num_classes < 1) throw Error("model needs a vocabulary and at least one class");
  const int d = config.embedding_dim, w = config.window, h1 = config.hidden1, h2 = config.hidden2;
  if (d < 1 || w < 1 || h1 < 1 || h2 < 1) throw Error("model dimensions must be positive");
  auto block = [](std::string name, int rows, int cols) {
    ParamBlock b;
    b.name = std::move(name);
    b.rows = rows;
    b.cols = cols;
    b.value.assign(static_cast<size_t>(rows) * cols, 0.0);
    b.accum.assign(b.value.size(), 0.0);
    return b;
  };
  blocks_.push_back(block("embedding", vocab_size, d));
  for (const char *ch : {"syntactic", "sentential"}) {
    blocks_.push_back(block(std::string(ch) + ".conv.W", h1, w * d));
    blocks_.push_back(block(std::string(ch) + ".conv.b", h1, 1));
    blocks_.push_back(block(std::string(ch) + ".hidden.W", h2, h1));
    blocks_.push_back(block(std::string(ch) + ".hidden.b", h2, 1));
  }
  blocks_.push_back(block("output.W", num_classes, 2 * h2));
  blocks_.push_back(block("output.b", num_classes, 1));
}

void MccnnModel::RandomInit(uint64_t seed, const Vocab *vocab,
                            const std::map<std::string, std::vector<double>> *pretrained) {
  std::mt19937_64 rng(seed);
  for (auto &b : blocks_) {
    std::fill(b.accum.begin(), b.accum.end(), 0.0);
    if (b.cols == 1) {
      std::fill(b.value.begin(), b.value.end(), 0.0);
      continue;
    }
    double range = &b == &blocks_[kEmbedding] ? 0.1 : Glorot(b.cols, b.rows);
    std::uniform_real_distribution<double> dist(-range, range);
    for (double &v : b.value) v = dist(rng);
  }
  ParamBlock &emb = blocks_[kEmbedding];
  for (int c = 0; c < emb.cols; ++c) emb.at(Vocab::kPad, c) = 0.0;
  if (vocab != nullptr && pretrained != nullptr) {
    for (int i = 2; i < std::min(vocab->size(), emb.rows); ++i) {
      auto it = pretrained->find(vocab->symbol(i));
      if (it == pretrained->end()) continue;
      if (static_cast<int>(it->second.size()) != emb.cols) throw Error("pretrained vector has wrong dimension");
      for (int c = 0; c < emb.cols; ++c) emb.at(i, c) = it->second[c];
    }
  }
}

struct MccnnModel::ChannelState {
  std::vector<int> seq;
  int windows = 0;
  std::vector<double> act;  // windows x h1
  std::vector<int> argmax;  // h1
  std::vector<double> pooled;
  std::vector<double> hidden;
};

void MccnnModel::ForwardChannel(const std::vector<int> &input, int conv_w, ChannelState *s) const {
  const int d = config_.embedding_dim, w = config_.window;
  const ParamBlock &emb = blocks_[kEmbedding];
  const ParamBlock &W1 = blocks_[conv_w], &b1 = blocks_[conv_w + 1];
  const ParamBlock &W2 = blocks_[conv_w + 2], &b2 = blocks_[conv_w + 3];
  const int h1 = W1.rows, h2 = W2.rows;
  s->seq = input;
  for (int id : s->seq) {
    if (id < 0 || id >= emb.rows) throw Error("dimension mismatch: symbol index out of range");
  }
  while (static_cast<int>(s->seq.size()) < w) s->seq.push_back(Vocab::kPad);
  int content = 0;
  for (int i = 0; i < static_cast<int>(s->seq.size()); ++i) {
    if (s->seq[i] != Vocab::kPad) content = i + 1;
  }
  // Windows never start past the content, so trailing PADs cannot add
  // positions to the max-pool.
  s->windows = std::max(content - w, 0) + 1;
  s->act.assign(static_cast<size_t>(s->windows) * h1, 0.0);
  std::vector<double> x(static_cast<size_t>(w) * d);
  for (int i = 0; i < s->windows; ++i) {
    for (int t = 0; t < w; ++t) {
      for (int c = 0; c < d; ++c) x[t * d + c] = emb.at(s->seq[i + t], c);
    }
    for (int j = 0; j < h1; ++j) {
      double z = b1.value[j];
      const double *row = &W1.value[static_cast<size_t>(j) * W1.cols];
      for (int k = 0; k < W1.cols; ++k) z += row[k] * x[k];
      s->act[static_cast<size_t>(i) * h1 + j] = std::tanh(z);
    }
  }
  s->pooled.assign(h1, 0.0);
  s->argmax.assign(h1, 0);
  for (int j = 0; j < h1; ++j) {
    double best = s->act[j];
    int arg = 0;
    for (int i = 1; i < s->windows; ++i) {
      double v = s->act[static_cast<size_t>(i) * h1 + j];
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    s->pooled[j] = best;
    s->argmax[j] = arg;
  }
  s->hidden.assign(h2, 0.0);
  for (int j = 0; j < h2; ++j) {
    double z = b2.value[j];
    for (int k = 0; k < h1; ++k) z += W2.at(j, k) * s->pooled[k];
    s->hidden[j] = std::tanh(z);
  }
}

namespace {

std::vector<double> Softmax(const std::vector<double> &logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0;
  for (size_t k = 0; k < logits.size(); ++k) sum += p[k] = std::exp(logits[k] - mx);
  for (double &v : p) v /= sum;
  return p;
}

}  // namespace

std::vector<double> MccnnModel::Forward(const ChannelInput &input) const {
  if (blocks_.empty()) throw Error("model is not initialised");
  const int h2 = config_.hidden2;
  std::vector<double> concat(2 * h2, 0.0);
  ChannelState st;
  if (config_.channels != Channels::kSentential) {
    ForwardChannel(input.syntactic, kSynConvW, &st);
    std::copy(st.hidden.begin(), st.hidden.end(), concat.begin());
  }
  if (config_.channels != Channels::kSyntactic) {
    ForwardChannel(input.sentential, kSenConvW, &st);
    std::copy(st.hidden.begin(), st.hidden.end(), concat.begin() + h2);
  }
  const ParamBlock &W3 = blocks_[kOutW], &b3 = blocks_[kOutB];
  std::vector<double> logits(W3.rows);
  for (int k = 0; k < W3.rows; ++k) {
    double z = b3.value[k];
    for (int c = 0; c < W3.cols; ++c) z += W3.at(k, c) * concat[c];
    logits[k] = z;
  }
  return Softmax(logits);
}

double MccnnModel::LossAndGradients(const std::vector<TrainingExample> &batch, double lambda,
                                    Gradients *grads) const {
  if (batch.empty()) throw Error("empty batch");
  if (lambda < 0) throw Error("lambda must be non-negative");
  grads->resize(blocks_.size());
  for (size_t b = 0; b < blocks_.size(); ++b) (*grads)[b].assign(blocks_[b].value.size(), 0.0);

  const int d = config_.embedding_dim, w = config_.window, h1 = config_.hidden1, h2 = config_.hidden2;
  const ParamBlock &W3 = blocks_[kOutW];
  const int K = W3.rows;
  double loss = 0.0;
  for (const auto &ex : batch) {
    if (ex.label < 0 || ex.label >= K) throw Error("dimension mismatch: label out of range");
    ChannelState states[2];
    bool enabled[2] = {config_.channels != Channels::kSentential, config_.channels != Channels::kSyntactic};
    std::vector<double> concat(2 * h2, 0.0);
    for (int c = 0; c < 2; ++c) {
      if (!enabled[c]) continue;
      ForwardChannel(c == 0 ? ex.input.syntactic : ex.input.sentential, c == 0 ? kSynConvW : kSenConvW,
                     &states[c]);
      std::copy(states[c].hidden.begin(), states[c].hidden.end(), concat.begin() + c * h2);
    }
    std::vector<double> logits(K);
    for (int k = 0; k < K; ++k) {
      double z = blocks_[kOutB].value[k];
      for (int c = 0; c < W3.cols; ++c) z += W3.at(k, c) * concat[c];
      logits[k] = z;
    }
    std::vector<double> probs = Softmax(logits);
    loss -= std::log(probs[ex.label]);

    std::vector<double> dlogit = probs;
    dlogit[ex.label] -= 1.0;
    std::vector<double> dconcat(2 * h2, 0.0);
    auto &gW3 = (*grads)[kOutW];
    auto &gb3 = (*grads)[kOutB];
    for (int k = 0; k < K; ++k) {
      gb3[k] += dlogit[k];
      for (int c = 0; c < W3.cols; ++c) {
        gW3[static_cast<size_t>(k) * W3.cols + c] += dlogit[k] * concat[c];
        dconcat[c] += W3.at(k, c) * dlogit[k];
      }
    }
    for (int ch = 0; ch < 2; ++ch) {
      if (!enabled[ch]) continue;
      const ChannelState &s = states[ch];
      const int base = ch == 0 ? kSynConvW : kSenConvW;
      const ParamBlock &W1 = blocks_[base], &W2 = blocks_[base + 2];
      auto &gW1 = (*grads)[base];
      auto &gb1 = (*grads)[base + 1];
      auto &gW2 = (*grads)[base + 2];
      auto &gb2 = (*grads)[base + 3];
      std::vector<double> dz2(h2);
      for (int j = 0; j < h2; ++j) {
        double hj = s.hidden[j];
        dz2[j] = dconcat[ch * h2 + j] * (1.0 - hj * hj);
        gb2[j] += dz2[j];
      }
      std::vector<double> dpool(h1, 0.0);
      for (int j = 0; j < h2; ++j) {
        for (int k = 0; k < h1; ++k) {
          gW2[static_cast<size_t>(j) * h1 + k] += dz2[j] * s.pooled[k];
          dpool[k] += W2.at(j, k) * dz2[j];
        }
      }
      // Route each pooled unit's gradient to its winning window.
      std::vector<std::vector<double>> dz1(s.windows);
      for (int j = 0; j < h1; ++j) {
        int i = s.argmax[j];
        double a = s.act[static_cast<size_t>(i) * h1 + j];
        if (dz1[i].empty()) dz1[i].assign(h1, 0.0);
        dz1[i][j] = dpool[j] * (1.0 - a * a);
      }
      auto &gE = (*grads)[kEmbedding];
      const ParamBlock &emb = blocks_[kEmbedding];
      std::vector<double> x(static_cast<size_t>(w) * d), dx(static_cast<size_t>(w) * d);
      for (int i = 0; i < s.windows; ++i) {
        if (dz1[i].empty()) continue;
        for (int t = 0; t < w; ++t) {
          for (int c = 0; c < d; ++c) x[t * d + c] = emb.at(s.seq[i + t], c);
        }
        std::fill(dx.begin(), dx.end(), 0.0);
        for (int j = 0; j < h1; ++j) {
          double g = dz1[i][j];
          if (g == 0.0) continue;
          gb1[j] += g;
          double *grow = &gW1[static_cast<size_t>(j) * W1.cols];
          const double *wrow = &W1.value[static_cast<size_t>(j) * W1.cols];
          for (int k = 0; k < W1.cols; ++k) {
            grow[k] += g * x[k];
            dx[k] += wrow[k] * g;
          }
        }
        for (int t = 0; t < w; ++t) {
          int id = s.seq[i + t];
          if (id == Vocab::kPad) continue;
          for (int c = 0; c < d; ++c) gE[static_cast<size_t>(id) * d + c] += dx[t * d + c];
        }
      }
    }
  }
  if (lambda > 0) {
    for (size_t b = 0; b < blocks_.size(); ++b) {
      const auto &v = blocks_[b].value;
      auto &g = (*grads)[b];
      for (size_t i = 0; i < v.size(); ++i) {
        loss += lambda * v[i] * v[i];
        g[i] += 2.0 * lambda * v[i];
      }
    }
  }
  return loss;
}

void MccnnModel::ApplyAdagrad(const Gradients &grads, double learning_rate) {
  if (grads.size() != blocks_.size()) throw Error("gradient/parameter block mismatch");
  for (size_t b = 0; b < blocks_.size(); ++b) {
    ParamBlock &p = blocks_[b];
    const auto &g = grads[b];
    size_t begin = b == kEmbedding ? static_cast<size_t>(p.cols) : 0;  // PAD row frozen
    for (size_t i = begin; i < p.value.size(); ++i) {
      if (g[i] == 0.0) continue;
      p.accum[i] += g[i] * g[i];
      p.value[i] -= learning_rate * g[i] / std::sqrt(p.accum[i] + config_.adagrad_eps);
    }
  }
}

bool MccnnModel::operator==(const MccnnModel &other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const auto &x = blocks_[b], &y = other.blocks_[b];
    if (x.name != y.name || x.rows != y.rows || x.cols != y.cols || x.value != y.value || x.accum != y.accum) {
      return false;
    }
  }
  const auto &a = config_, &c = other.config_;
  return a.embedding_dim == c.embedding_dim && a.window == c.window && a.hidden1 == c.hidden1 &&
         a.hidden2 == c.hidden2 && a.channels == c.channels && a.learning_rate == c.learning_rate &&
         a.l2 == c.l2 && a.adagrad_eps == c.adagrad_eps && a.epochs == c.epochs && a.seed == c.seed;
}

// ----------------------------------------------------------------------------
// Training.

MccnnTrainReport TrainMccnn(MccnnModel *model, const std::vector<TrainingExample> &dataset) {
  const MccnnConfig &config = model->config();
  MccnnTrainReport report;
  if (dataset.empty()) throw Error("empty training set");
  std::mt19937_64 rng(config.seed);
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Gradients grads;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (size_t idx : order) {
      double loss = model->LossAndGradients({dataset[idx]}, config.l2, &grads);
      for (size_t b = 0; b < grads.size(); ++b) {
        for (double g : grads[b]) {
          if (!std::isfinite(g)) {
            throw Error("non-finite gradient in parameter block " + model->blocks()[b].name);
          }
        }
      }
      if (!std::isfinite(loss)) throw Error("non-finite loss at epoch " + std::to_string(epoch));
      model->ApplyAdagrad(grads, config.learning_rate);
      for (const auto &b : model->blocks()) {
        for (double v : b.value) {
          if (!std::isfinite(v)) throw Error("non-finite value in parameter block " + b.name);
        }
      }
      total += loss;
    }
    int correct = 0;
    for (const auto &ex : dataset) {
      auto p = model->Forward(ex.input);
      correct += std::max_element(p.begin(), p.end()) - p.begin() == ex.label;
    }
    report.epoch_loss.push_back(total / dataset.size());
    report.epoch_accuracy.push_back(static_cast<double>(correct) / dataset.size());
  }
  return report;
}

std::map<std::string, std::vector<double>> LoadEmbeddings(const std::string &path, int dim) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::map<std::string, std::vector<double>> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    auto f = SplitWhitespace(line);
    if (f.empty()) continue;
    if (static_cast<int>(f.size()) != dim + 1) {
      throw Error("expected " + std::to_string(dim) + " values at " + path + ":" + std::to_string(lineno));
    }
    std::vector<double> v;
    for (int i = 1; i <= dim; ++i) {
      try {
        v.push_back(std::stod(f[i]));
      } catch (const std::exception &) {
        throw Error("bad number at " + path + ":" + std::to_string(lineno));
      }
    }
    out[f[0]] = std::move(v);
  }
  return out;
}

// ----------------------------------------------------------------------------
// RelationExtractor.

RelationExtractor RelationExtractor::Train(const std::vector<RelationExample> &examples,
                                           const MccnnConfig &config,
                                           const std::map<std::string, std::vector<double>> *pretrained,
                                           MccnnTrainReport *report) {
  if (examples.empty()) throw Error("no relation training examples");
  RelationExtractor rx;
  std::set<RelationPath> paths;
  for (const auto &ex : examples) {
    for (const auto &s : SyntacticSymbols(ShortestDepPath(ex.question, ex.mention))) rx.vocab_.Add(s);
    for (const auto &s : SententialSymbols(ex.question, ex.mention)) rx.vocab_.Add(s);
    paths.insert(ex.relation);
  }
  for (const auto &p : paths) rx.labels_.Add(p);
  std::vector<TrainingExample> data;
  for (const auto &ex : examples) {
    TrainingExample t;
    t.input = EncodeInputs(ex.question, ex.mention, rx.vocab_, config.window);
    t.label = *rx.labels_.Find(ex.relation);
    bool all_pad = std::all_of(t.input.syntactic.begin(), t.input.syntactic.end(),
                               [](int i) { return i == Vocab::kPad; }) &&
                   std::all_of(t.input.sentential.begin(), t.input.sentential.end(),
                               [](int i) { return i == Vocab::kPad; });
    if (all_pad) continue;
    data.push_back(std::move(t));
  }
  if (data.empty()) throw Error("every relation training example is empty after padding");
  rx.model_ = MccnnModel(rx.vocab_.size(), rx.labels_.size(), config);
  rx.model_.RandomInit(config.seed, &rx.vocab_, pretrained);
  MccnnTrainReport r = TrainMccnn(&rx.model_, data);
  if (report != nullptr) *report = r;
  return rx;
}

std::vector<double> RelationExtractor::Probabilities(const Question &q, const MentionSpan &m) const {
  return model_.Forward(EncodeInputs(q, m, vocab_, model_.config().window));
}

std::vector<std::pair<RelationPath, double>> RelationExtractor::PredictRelations(
    const Question &q, const MentionSpan &m, const std::vector<RelationPath> &candidates) const {
  std::set<RelationPath> unique(candidates.begin(), candidates.end());
  std::vector<std::pair<RelationPath, double>> known, unknown;
  std::vector<double> probs;
  for (const auto &path : unique) {
    auto k = labels_.Find(path);
    if (!k) {
      unknown.emplace_back(path, 0.0);
      continue;
    }
    if (probs.empty()) probs = Probabilities(q, m);
    known.emplace_back(path, probs[*k]);
  }
  std::stable_sort(known.begin(), known.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  known.insert(known.end(), unknown.begin(), unknown.end());
  return known;
}

void RelationExtractor::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  const MccnnConfig &c = model_.config();
  out << "kbqa-mccnn 1\n";
  out << "config " << c.embedding_dim << ' ' << c.window << ' ' << c.hidden1 << ' ' << c.hidden2 << ' '
      << ChannelsName(c.channels) << ' ' << EncodeDouble(c.learning_rate) << ' ' << EncodeDouble(c.l2) << ' '
      << EncodeDouble(c.adagrad_eps) << ' ' << c.epochs << ' ' << c.seed << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (int i = 0; i < vocab_.size(); ++i) out << vocab_.symbol(i) << '\n';
  out << "labels " << labels_.size() << '\n';
  for (int k = 0; k < labels_.size(); ++k) out << labels_.path(k).ToString() << '\n';
  for (const auto &b : model_.blocks()) {
    out << "block " << b.name << ' ' << b.rows << ' ' << b.cols << '\n';
    for (const auto *vec : {&b.value, &b.accum}) {
      for (size_t i = 0; i < vec->size(); ++i) out << (i ? " " : "") << EncodeDouble((*vec)[i]);
      out << '\n';
    }
  }
}

RelationExtractor RelationExtractor::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  auto fail = [&](const std::string &what) { return Error("bad model file " + path + ": " + what); };
  std::string line;
  if (!std::getline(in, line) || line != "kbqa-mccnn 1") throw fail("unknown header");
  if (!std::getline(in, line)) throw fail("missing config");
  auto f = SplitWhitespace(line);
  if (f.size() != 11 || f[0] != "config") throw fail("bad config line");
  MccnnConfig c;
  c.embedding_dim = std::stoi(f[1]);
  c.window = std::stoi(f[2]);
  c.hidden1 = std::stoi(f[3]);
  c.hidden2 = std::stoi(f[4]);
  c.channels = ParseChannels(f[5]);
  c.learning_rate = DecodeDouble(f[6]);
  c.l2 = DecodeDouble(f[7]);
  c.adagrad_eps = DecodeDouble(f[8]);
  c.epochs = std::stoi(f[9]);
  c.seed = std::stoull(f[10]);
  RelationExtractor rx;
  std::getline(in, line);
  f = SplitWhitespace(line);
  if (f.size() != 2 || f[0] != "vocab") throw fail("missing vocab");
  int n = std::stoi(f[1]);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw fail("truncated vocab");
    if (rx.vocab_.Add(line) != i) throw fail("duplicate vocab symbol " + line);
  }
  std::getline(in, line);
  f = SplitWhitespace(line);
  if (f.size() != 2 || f[0] != "labels") throw fail("missing labels");
  int k = std::stoi(f[1]);
  for (int i = 0; i < k; ++i) {
    if (!std::getline(in, line)) throw fail("truncated labels");
    rx.labels_.Add(RelationPath::Parse(line));
  }
  rx.model_ = MccnnModel(n, k, c);
  for (auto &b : rx.model_.blocks()) {
    std::getline(in, line);
    f = SplitWhitespace(line);
    if (f.size() != 4 || f[0] != "block" || f[1] != b.name || std::stoi(f[2]) != b.rows ||
        std::stoi(f[3]) != b.cols) {
      throw fail("unexpected block header '" + line + "'");
    }
    for (auto *vec : {&b.value, &b.accum}) {
      std::getline(in, line);
      f = SplitWhitespace(line);
      if (f.size() != vec->size()) throw fail("wrong value count in block " + b.name);
      for (size_t i = 0; i < f.size(); ++i) (*vec)[i] = DecodeDouble(f[i]);
    }
  }
  return rx;
}

}  // namespace kbqa
