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


#include "kbqa/pipeline.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "desk.h"
#include "test_util.h"

namespace kbqa {
namespace {

namespace fs = std::filesystem;
using testing::Desk;
using testing::ReadFile;
using testing::TempDir;
using testing::TrainedDesk;
using testing::WriteFile;

// ---------------------------------------------------------------------------
// Config.

TEST(Config, RoundTripsThroughText) {
  Config c;
  c.Set("mccnn_hidden1", "17");
  c.Set("refine_C", "0.25");
  c.Set("mccnn_channels", "syntactic");
  EXPECT_EQ(Config::Parse(c.ToString()).ToString(), c.ToString());
}

TEST(Config, CommentsAndWhitespace) {
  Config c = Config::Parse("# header\n  rank_epochs =  7  # trailing\n\nlinker_top_k=3\n");
  EXPECT_EQ(c.rank.epochs, 7);
  EXPECT_EQ(c.linker.top_k, 3);
}

TEST(Config, PathsResolveAgainstTheFile) {
  Config c = Config::Parse("kb = kb\ncorpus = /abs/mapping.tsv\nmodel_dir = ../m\n", "/x/y");
  EXPECT_EQ(c.kb, "/x/y/kb");
  EXPECT_EQ(c.corpus, "/abs/mapping.tsv");
  EXPECT_EQ(c.model_dir, "/x/m");
}

TEST(Config, SeedReachesEveryLearner) {
  Config c = Config::Parse("seed = 42\n");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.mccnn.seed, 42u);
  EXPECT_EQ(c.rank.seed, 42u);
  EXPECT_EQ(c.refine.seed, 42u);
}

TEST(Config, Errors) {
  EXPECT_THROW(Config::Parse("no_such_key = 1\n"), Error);
  EXPECT_THROW(Config::Parse("rank_epochs = many\n"), Error);
  EXPECT_THROW(Config::Parse("rank_epochs\n"), Error);
  EXPECT_THROW(Config::Parse("dev_fraction = 1.5\n"), Error);
  try {
    Config::Parse("no_such_key = 1\n");
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("no_such_key"), std::string::npos);
  }
  EXPECT_THROW(Config::Load("/nonexistent/desk.conf"), Error);
}

// ---------------------------------------------------------------------------
// Datasets.

TEST(Dataset, RecordsWithParses) {
  TempDir dir;
  auto f = BuildDeskFixture();
  SaveDataset(dir.Path("q.tsv"), f.test);
  auto back = LoadDataset(dir.Path("q.tsv"));
  ASSERT_EQ(back.size(), f.test.size());
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(FormatQuestion(back[i]), FormatQuestion(f.test[i]));
    EXPECT_EQ(back[i].gold_answers, f.test[i].gold_answers);
  }
  // The CoNLL file alone carries the same questions.
  EXPECT_EQ(LoadDataset(dir.Path("q.conll")).size(), f.test.size());
}

TEST(Dataset, RecordsWithoutParsesFallBackToRules) {
  TempDir dir;
  WriteFile(dir.Path("q.tsv"), "a\twhere was shaq born\t-\t-\nb\twho is emma stone father\tm.x,m.y\tm.t\n");
  auto qs = LoadDataset(dir.Path("q.tsv"));
  ASSERT_EQ(qs.size(), 2u);
  EXPECT_EQ(qs[0].raw, "where was shaq born");
  EXPECT_TRUE(qs[0].answerable());
  EXPECT_FALSE(qs[0].gold_answers);
  EXPECT_FALSE(qs[0].gold_topic);
  EXPECT_EQ(*qs[1].gold_answers, (EntitySet{"m.x", "m.y"}));
  EXPECT_EQ(*qs[1].gold_topic, "m.t");
}

TEST(Dataset, Errors) {
  TempDir dir;
  WriteFile(dir.Path("short.tsv"), "a\twho\n");
  EXPECT_THROW(LoadDataset(dir.Path("short.tsv")), Error);
  WriteFile(dir.Path("dup.tsv"), "a\twho is x\t-\t-\na\twho is y\t-\t-\n");
  EXPECT_THROW(LoadDataset(dir.Path("dup.tsv")), Error);
  EXPECT_THROW(LoadDataset(dir.Path("missing.tsv")), Error);
}

TEST(Dataset, DevSplitIsAStableFraction) {
  int dev = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string id = "q" + std::to_string(i);
    EXPECT_FALSE(IsDevQuestion(id, 0.0));
    EXPECT_EQ(IsDevQuestion(id, 0.2), IsDevQuestion(id, 0.2));
    if (IsDevQuestion(id, 0.3)) EXPECT_TRUE(IsDevQuestion(id, 0.5));
    dev += IsDevQuestion(id, 0.2);
  }
  EXPECT_GT(dev, 150);
  EXPECT_LT(dev, 250);
}

TEST(Modes, NamesRoundTrip) {
  for (Mode m : {Mode::kStructured, Mode::kStructuredJoint, Mode::kStructuredUnstructured,
                 Mode::kStructuredJointUnstructured}) {
    EXPECT_EQ(ParseMode(ModeName(m)), m);
  }
  EXPECT_THROW(ParseMode("joint"), Error);
  EXPECT_TRUE(UsesJoint(Mode::kStructuredJoint));
  EXPECT_FALSE(UsesText(Mode::kStructuredJoint));
  EXPECT_TRUE(UsesText(Mode::kStructuredUnstructured));
}

// ---------------------------------------------------------------------------
// Answering on the trained desk world.

Question Raw(const Desk &d, const std::string &text) { return RuleBasedParse("raw", text, d.system.lexicon); }

Question Conll(const std::string &text) { return ParseQuestions(text).at(0); }

const char kZorroFather[] =
    "#qid zorro\n"
    "1\twho\twho\tWP\t2\tnsubj\n"
    "2\tis\tbe\tVBZ\t0\troot\n"
    "3\tzorro\tzorro\tNNP\t4\tposs\n"
    "4\tfather\tfather\tNN\t2\tattr\n";

const char kWhoIsIt[] =
    "#qid it\n"
    "1\twho\twho\tWP\t2\tnsubj\n"
    "2\tis\tbe\tVBZ\t0\troot\n"
    "3\tit\tit\tPRP\t2\tattr\n";

const char kHeatAndZorro[] =
    "#qid hz\n"
    "1\twho\twho\tWP\t2\tnsubj\n"
    "2\tacted\tact\tVBD\t0\troot\n"
    "3\tin\tin\tIN\t2\tprep\n"
    "4\theat\theat\tNNP\t3\tpobj\n"
    "5\tand\tand\tCC\t4\tcc\n"
    "6\tzorro\tzorro\tNNP\t4\tconj\n";

TEST(Answer, ReasonCodes) {
  const Desk &d = TrainedDesk();
  for (Mode m : {Mode::kStructured, Mode::kStructuredJointUnstructured}) {
    auto no_qword = Answer(d.system, Raw(d, "shaq played for the magic"), m);
    EXPECT_EQ(no_qword.reason, kNoQword);
    EXPECT_TRUE(no_qword.predicted.empty());
    EXPECT_EQ(Answer(d.system, Conll(kZorroFather), m).reason, kNoLink);
    EXPECT_EQ(Answer(d.system, Conll(kWhoIsIt), m).reason, kNoMention);
    auto ok = Answer(d.system, d.fixture.test[0], m);
    EXPECT_EQ(ok.reason, "");
    EXPECT_FALSE(ok.predicted.empty());
  }
}

TEST(Answer, EntityWithoutRelations) {
  const Desk &d = TrainedDesk();
  // Shaq Fu is linkable but has no outgoing edges.
  System s = d.system;
  s.config.linker.top_k = 1;
  Question q = Conll(
      "#qid fu\n"
      "1\twho\twho\tWP\t2\tnsubj\n"
      "2\tmade\tmake\tVBD\t0\troot\n"
      "3\tshaq\tshaq\tNNP\t4\tcompound\n"
      "4\tfu\tfu\tNNP\t2\tdobj\n");
  for (Mode m : {Mode::kStructured, Mode::kStructuredJoint}) {
    auto a = Answer(s, q, m);
    ASSERT_EQ(a.subquestions.size(), 1u);
    EXPECT_TRUE(a.subquestions[0].pairs.empty());
    EXPECT_EQ(a.reason, kNoRelation);
  }
}

TEST(Answer, UnstructuredModesNeedTheRefinementModel) {
  const Desk &d = TrainedDesk();
  System s = d.system;
  s.models.refine.reset();
  EXPECT_NO_THROW(Answer(s, d.fixture.test[0], Mode::kStructuredJoint));
  EXPECT_THROW(Answer(s, d.fixture.test[0], Mode::kStructuredJointUnstructured), Error);
  s.models.relations.reset();
  EXPECT_THROW(Answer(s, d.fixture.test[0], Mode::kStructured), Error);
}

TEST(Answer, CompositionalAnswersAreIntersections) {
  const Desk &d = TrainedDesk();
  for (const auto &q : d.fixture.compositional) {
    SCOPED_TRACE(q.raw);
    auto subs = Decompose(q, d.system.rules);
    ASSERT_EQ(subs.size(), 2u);
    for (Mode m : {Mode::kStructuredJoint, Mode::kStructuredJointUnstructured}) {
      auto a = Answer(d.system, q, m);
      ASSERT_EQ(a.subquestions.size(), 2u);
      EntitySet expect = Answer(d.system, subs[0], m).predicted, second = Answer(d.system, subs[1], m).predicted;
      EntitySet both;
      std::set_intersection(expect.begin(), expect.end(), second.begin(), second.end(),
                            std::inserter(both, both.end()));
      EXPECT_EQ(a.predicted, both);
      for (const auto &sub : a.subquestions) {
        for (const auto &e : a.predicted) EXPECT_TRUE(sub.answers.count(e));
      }
    }
  }
}

TEST(Answer, FailingSubQuestionImposesNoConstraint) {
  const Desk &d = TrainedDesk();
  // "zorro" links to nothing; the other conjunct still answers.
  auto a = Answer(d.system, Conll(kHeatAndZorro), Mode::kStructuredJoint);
  ASSERT_EQ(a.subquestions.size(), 2u);
  EXPECT_EQ(a.subquestions[1].reason, kNoLink);
  EXPECT_EQ(a.reason, "");
  EXPECT_EQ(a.predicted, a.subquestions[0].answers);
  EXPECT_FALSE(a.predicted.empty());
}

TEST(Answer, EmptyCorpusDegradesToStructuredJoint) {
  const Desk &d = TrainedDesk();
  System s = d.system;
  s.corpus.clear();
  for (const auto &q : d.fixture.suite) {
    EXPECT_EQ(Answer(s, q, Mode::kStructuredJointUnstructured).predicted,
              Answer(s, q, Mode::kStructuredJoint).predicted)
        << q.raw;
  }
}

TEST(Answer, RefinedAnswersComeFromTheChosenPairs) {
  const Desk &d = TrainedDesk();
  for (const auto &q : d.fixture.suite) {
    for (const auto &t : Answer(d.system, q, Mode::kStructuredJointUnstructured).subquestions) {
      for (const auto &e : t.answers) EXPECT_TRUE(t.candidates.count(e)) << q.raw << " " << e;
      EXPECT_LE(t.chosen, 2);
    }
  }
}

TEST(Answer, Deterministic) {
  const Desk &d = TrainedDesk();
  for (const auto &q : d.fixture.suite) {
    EXPECT_EQ(Answer(d.system, q, Mode::kStructuredJointUnstructured).predicted,
              Answer(d.system, q, Mode::kStructuredJointUnstructured).predicted);
  }
}

TEST(Refine, HeldOutSentenceAccuracy) {
  // Evidence for the KB answers of the held-out single-relation questions,
  // labelled by gold membership; none of it was seen in training.
  const Desk &d = TrainedDesk();
  std::set<std::string> compositional;
  for (const auto &q : d.fixture.compositional) compositional.insert(q.qid);
  std::vector<LabeledEvidence> held_out;
  for (const auto &q : d.fixture.suite) {
    if (compositional.count(q.qid) || !q.gold_topic) continue;
    auto rel = SurrogateGoldRelation(d.system.kb, *q.gold_topic, *q.gold_answers);
    ASSERT_TRUE(rel) << q.raw;
    auto found = CollectEvidence(d.system.kb, d.system.corpus, q, *q.gold_topic,
                                 d.system.kb.Query(*q.gold_topic, *rel));
    held_out.insert(held_out.end(), found.begin(), found.end());
  }
  ASSERT_GE(held_out.size(), 20u);
  EXPECT_GE(EvidenceAccuracy(*d.system.models.refine, held_out), 0.9);
}

// ---------------------------------------------------------------------------
// Evaluation.

TEST(Evaluate, AveragesPerQuestionF1) {
  const Desk &d = TrainedDesk();
  auto questions = d.fixture.test;
  Question unlabelled = questions[0];
  unlabelled.qid = "nogold";
  unlabelled.gold_answers.reset();
  questions.push_back(unlabelled);
  auto report = Evaluate(d.system, questions, Mode::kStructuredJoint);
  EXPECT_EQ(report.evaluated, 10);
  ASSERT_EQ(report.records.size(), 11u);
  EXPECT_TRUE(report.records.back().excluded);
  EXPECT_EQ(report.records.back().reason, "NO_GOLD");
  double sum = 0;
  for (size_t i = 0; i < 10; ++i) {
    const auto &r = report.records[i];
    EXPECT_EQ(r.f1, F1Score(r.predicted, r.gold));
    sum += r.f1;
  }
  EXPECT_NEAR(report.average_f1, sum / 10, 1e-15);
  // Summary line first, then one line per question.
  auto text = report.ToJsonLines();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 12);
  EXPECT_EQ(text.rfind("{\"average_f1\"", 0), 0u);
}

TEST(Evaluate, AverageOfNothingIsZero) { EXPECT_EQ(AverageF1({}), 0.0); }

// ---------------------------------------------------------------------------
// Training.

struct Scratch {
  TempDir dir;
  Config config;
  Scratch() {
    WriteDeskFixture(BuildDeskFixture(), dir.str());
    config = Config::Load(dir.Path("desk.conf"));
    config.mccnn.epochs = 5;
  }
  std::string Model(const std::string &name) const { return (fs::path(config.model_dir) / name).string(); }
};

TEST(TrainAll, ResumesFinishedStages) {
  Scratch s;
  TrainAll(s.config);
  std::map<std::string, std::string> first;
  for (const char *f : {"surrogate.tsv", "mccnn.model", "ranker.model", "refine.model"}) {
    first[f] = ReadFile(s.Model(f));
    EXPECT_FALSE(first[f].empty()) << f;
  }
  EXPECT_TRUE(fs::exists(s.Model("training_report.txt")));
  std::vector<std::string> log;
  TrainOptions opts;
  opts.log = [&](const std::string &l) { log.push_back(l); };
  TrainAll(s.config, opts);
  int reused = 0;
  for (const auto &l : log) reused += l.find("reusing") != std::string::npos;
  EXPECT_EQ(reused, 4);
  for (const auto &[f, bytes] : first) EXPECT_EQ(ReadFile(s.Model(f)), bytes) << f;
}

TEST(TrainAll, StopsAfterTheRequestedStage) {
  Scratch s;
  TrainOptions opts;
  opts.until = Stage::kRelations;
  TrainAll(s.config, opts);
  EXPECT_TRUE(fs::exists(s.Model("mccnn.model")));
  EXPECT_FALSE(fs::exists(s.Model("ranker.model")));
  EXPECT_FALSE(fs::exists(s.Model("refine.model")));
}

TEST(TrainAll, FailingStageIsNamed) {
  Scratch s;
  WriteFile(s.dir.Path("nogold.tsv"), "a\twhere was shaq born\t-\t-\n");
  s.config.train_questions = s.dir.Path("nogold.tsv");
  try {
    TrainAll(s.config);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("stage surrogate failed"), std::string::npos) << e.what();
  }
}

TEST(TrainAll, MissingCorpusFailsTheRefineStageOnly) {
  Scratch s;
  s.config.corpus = s.dir.Path("nowhere/mapping.tsv");
  try {
    TrainAll(s.config);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("stage refine failed"), std::string::npos) << e.what();
  }
  EXPECT_TRUE(fs::exists(s.Model("ranker.model")));
}

TEST(TrainAll, DesktopBudget) {
  const Desk &d = TrainedDesk();
  EXPECT_LT(d.train_seconds, 60.0);
}

}  // namespace
}  // namespace kbqa
