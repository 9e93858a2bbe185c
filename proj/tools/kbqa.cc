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


// Command-line front end: data checks, training, answering and evaluation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kbqa/pipeline.h"
#include "kbqa/synthetic.h"

namespace fs = std::filesystem;
using namespace kbqa;

namespace {

struct Flags {
  std::string config;
  std::string kb;
  std::string questions;
  std::string corpus;
  std::optional<uint64_t> seed;
  std::vector<std::string> set;  // key=value overrides
};

Config MakeConfig(const Flags &f) {
  Config c;
  if (!f.config.empty()) c = Config::Load(f.config);
  for (const auto &kv : f.set) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
    c.Set(Trim(kv.substr(0, eq)), Trim(kv.substr(eq + 1)));
  }
  if (!f.kb.empty()) c.kb = f.kb;
  if (!f.corpus.empty()) c.corpus = f.corpus;
  if (f.seed) c.Set("seed", std::to_string(*f.seed));
  return c;
}

void Log(const std::string &line) { std::cerr << line << '\n'; }

std::string Describe(const KBGraph &kb, const EntitySet &ids) {
  std::vector<std::string> parts;
  for (const auto &id : ids) parts.push_back(kb.Has(id) ? id + " (" + kb.Get(id).name + ")" : id);
  return parts.empty() ? "(none)" : Join(parts, ", ");
}

void PrintAnswer(const System &system, const AnswerSet &a, bool verbose) {
  std::cout << Describe(system.kb, a.predicted) << '\n';
  if (!a.reason.empty()) std::cout << "reason: " << a.reason << '\n';
  if (!verbose) return;
  for (const auto &t : a.subquestions) {
    std::cout << "  sub-question: " << t.text << (t.reason.empty() ? "" : "  [" + t.reason + "]") << '\n';
    for (size_t i = 0; i < t.pairs.size() && i < 5; ++i) {
      const auto &p = t.pairs[i];
      std::cout << "    " << (static_cast<int>(i) < t.chosen ? "* " : "  ") << p.entity.entity << " "
                << p.relation.ToString() << " score " << p.rank_score << '\n';
    }
    if (t.refine) {
      for (const auto &[c, d] : t.refine->decisions) {
        std::cout << "    evidence " << c << ": " << EvidenceDecisionName(d) << '\n';
      }
    }
  }
}

Question RawQuestion(const System &system, const std::string &text) {
  return RuleBasedParse("cli", Lowercase(Trim(text)), system.lexicon);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Question answering over a knowledge base with text evidence."};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "flat key = value configuration file");
  app.add_option("--kb", flags.kb, "knowledge-base directory (entities.tsv, triples.tsv, aliases_counts.tsv)");
  app.add_option("--questions", flags.questions, "question file (records .tsv with sibling .conll, or .conll)");
  app.add_option("--corpus", flags.corpus, "corpus mapping file (entity<TAB>document path)");
  app.add_option("--seed", flags.seed, "random seed for every learned component");
  app.add_option("--set", flags.set, "override a config key, key=value (repeatable)");

  auto *ingest = app.add_subcommand("ingest", "load and validate the KB, questions and corpus");
  auto *train_re = app.add_subcommand("train-re", "train the relation classifier (and surrogate labels if missing)");
  auto *train_joint = app.add_subcommand("train-joint", "train the joint entity/relation ranker");
  auto *train_refine = app.add_subcommand("train-refine", "train the evidence classifier");
  auto *train_all = app.add_subcommand("train-all", "run every training stage, reusing finished ones");
  bool force = false;
  train_all->add_flag("--force", force, "retrain every stage");

  std::string mode_name = "structured_joint_unstructured";
  std::string question_text;
  bool verbose = false;
  auto *answer = app.add_subcommand("answer", "answer one question");
  answer->add_option("--mode", mode_name, "structured | structured_joint | structured_unstructured | "
                                          "structured_joint_unstructured");
  answer->add_option("--question", question_text, "question text")->required();
  answer->add_flag("-v,--verbose", verbose, "print the decision trace");

  std::string split = "test";
  std::string out_path;
  auto *eval = app.add_subcommand("eval", "evaluate a mode on a split; JSON lines on stdout");
  eval->add_option("--mode", mode_name, "answering mode");
  eval->add_option("--split", split, "dev | test")->check(CLI::IsMember({"dev", "test"}));
  eval->add_option("--out", out_path, "also write the report here");

  auto *repl = app.add_subcommand("repl", "answer questions read from stdin; ':mode NAME' switches mode");
  repl->add_option("--mode", mode_name, "initial answering mode");

  std::string fixture_dir = "data/desk";
  auto *make_fixture = app.add_subcommand("make-fixture", "write the built-in desk world");
  make_fixture->add_option("--out", fixture_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (make_fixture->parsed()) {
      WriteDeskFixture(BuildDeskFixture(), fixture_dir);
      std::cout << "wrote " << fixture_dir << '\n';
      return 0;
    }
    Config config = MakeConfig(flags);

    if (ingest->parsed()) {
      KBGraph kb = LoadKBDir(config.kb);
      int mediators = 0;
      for (const auto &[id, e] : kb.entities()) mediators += e.is_mediator;
      std::cout << "kb: " << kb.entities().size() << " entities (" << mediators << " mediators), "
                << kb.edges().size() << " triples, " << kb.alias_index().size() << " aliases\n";
      std::string qpath = flags.questions.empty() ? config.train_questions : flags.questions;
      auto questions = LoadDataset(qpath);
      int with_gold = 0, unknown = 0;
      for (const auto &q : questions) {
        with_gold += q.gold_answers.has_value();
        if (q.gold_answers) {
          for (const auto &g : *q.gold_answers) unknown += !kb.Has(g);
        }
      }
      std::cout << "questions: " << questions.size() << " from " << qpath << " (" << with_gold
                << " with gold answers, " << unknown << " gold ids missing from the KB)\n";
      if (!config.corpus.empty()) {
        Corpus corpus = LoadCorpus(config.corpus);
        size_t sentences = 0;
        for (const auto &[id, d] : corpus) sentences += d.sentences.size();
        std::cout << "corpus: " << corpus.size() << " documents, " << sentences << " sentences\n";
      }
      return unknown == 0 ? 0 : 1;
    }

    if (!flags.questions.empty()) config.train_questions = flags.questions;
    TrainOptions topts;
    topts.log = Log;
    if (train_re->parsed()) {
      topts.force = {Stage::kRelations};
      topts.until = Stage::kRelations;
    } else if (train_joint->parsed()) {
      topts.force = {Stage::kJoint};
      topts.until = Stage::kJoint;
    } else if (train_refine->parsed()) {
      topts.force = {Stage::kRefine};
    } else if (train_all->parsed()) {
      if (force) topts.force = {Stage::kSurrogate, Stage::kRelations, Stage::kJoint, Stage::kRefine};
    }
    if (train_re->parsed() || train_joint->parsed() || train_refine->parsed() || train_all->parsed()) {
      TrainAll(config, topts);
      return 0;
    }

    Mode mode = ParseMode(mode_name);
    if (answer->parsed()) {
      System system = LoadSystem(config);
      PrintAnswer(system, Answer(system, RawQuestion(system, question_text), mode), verbose);
      return 0;
    }
    if (eval->parsed()) {
      std::vector<Question> questions;
      if (split == "test") {
        questions = LoadDataset(flags.questions.empty() ? config.test_questions : flags.questions);
      } else {
        for (auto &q : LoadDataset(config.train_questions)) {
          if (IsDevQuestion(q.qid, config.dev_fraction)) questions.push_back(std::move(q));
        }
        if (questions.empty()) Log("eval: the dev split is empty (dev_fraction = " + Trim(std::to_string(config.dev_fraction)) + ")");
      }
      // The training file doubles as the tagger lexicon, so questions never
      // leak: only their parses are consulted, never their answers.
      System system = LoadSystem(config);
      EvalReport report = Evaluate(system, questions, mode);
      std::string text = report.ToJsonLines();
      std::cout << text;
      if (!out_path.empty()) std::ofstream(out_path) << text;
      return 0;
    }
    if (repl->parsed()) {
      System system = LoadSystem(config);
      std::string line;
      std::cout << "mode " << ModeName(mode) << "; ':mode NAME' to switch, ':quit' to leave\n> " << std::flush;
      while (std::getline(std::cin, line)) {
        line = Trim(line);
        if (line == ":quit" || line == ":q") break;
        try {
          if (line.rfind(":mode", 0) == 0) {
            mode = ParseMode(Trim(line.substr(5)));
            std::cout << "mode " << ModeName(mode) << '\n';
          } else if (!line.empty()) {
            PrintAnswer(system, Answer(system, RawQuestion(system, line), mode), true);
          }
        } catch (const std::exception &e) {
          std::cout << "error: " << e.what() << '\n';
        }
        std::cout << "> " << std::flush;
      }
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
