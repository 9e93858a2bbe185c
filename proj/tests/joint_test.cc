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

#include "kbqa/joint.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rank_fixtures.h"
#include "test_util.h"

namespace kbqa {
namespace {

using testing::Pair;

const char kShaq[] =
    "#qid shaq gold: m.magic topic: m.012xdf\n"
    "1\twho\twho\tWP\t5\tdobj\n"
    "2\tdid\tdo\tVBD\t5\taux\n"
    "3\tshaq\tshaq\tNN\t5\tnsubj\n"
    "4\tfirst\tfirst\tRB\t5\tadvmod\n"
    "5\tplay\tplay\tVB\t0\troot\n"
    "6\tfor\tfor\tIN\t5\tprep\n";

const char kParents[] =
    "#qid parents gold: m.dad\n"
    "1\twho\twho\tWP\t2\tnsubj\n"
    "2\tare\tbe\tVBP\t0\troot\n"
    "3\temma\temma\tNNP\t4\tcompound\n"
    "4\tstone\tstone\tNNP\t5\tposs\n"
    "5\tparents\tparent\tNNS\t2\tattr\n";

const char kWhen[] =
    "#qid when gold: m.y1996\n"
    "1\twhen\twhen\tWRB\t3\tadvmod\n"
    "2\twas\tbe\tVBD\t3\tauxpass\n"
    "3\tfounded\tfound\tVBN\t0\troot\n";

Question Q(const char *text) { return ParseQuestions(text)[0]; }

KBGraph ShaqKB() {
  std::vector<Entity> es = {
      {"m.012xdf", "shaquille o'neal", {"shaq"},
       "basketball player who played for many teams ; he plays center and played in the nba", false},
      {"m.05n7bp", "shaq fu", {"shaq"}, "a video game", false},
      {"m.magic", "orlando magic", {}, "", false},
      {"m.lakers", "los angeles lakers", {}, "", false},
      {"m.y1996", "1996", {}, "", false},
      {"m.emma", "emma stone", {}, "", false},
      {"m.dad", "jeff stone", {}, "", false},
      {"m.cvt", "", {}, "", true},
  };
  std::vector<Triple> ts = {
      {"m.012xdf", RelationId("sports.pro_athlete.teams"), "m.cvt"},
      {"m.cvt", RelationId("sports.roster.team"), "m.magic"},
      {"m.012xdf", RelationId("sports.pro_athlete.first_team"), "m.magic"},
      {"m.012xdf", RelationId("sports.pro_athlete.team"), "m.lakers"},
      {"m.012xdf", RelationId("sports.pro_athlete.team"), "m.magic"},
      {"m.emma", RelationId("people.person.parents"), "m.dad"},
      {"m.magic", RelationId("sports.team.founded"), "m.y1996"},
  };
  return KBGraph(es, ts, {{"shaq", "m.012xdf", 30}});
}

EntityCandidate Cand(const Question &q, const EntityId &e, int start, int end, double score) {
  return {e, MakeSpan(q, start, end), score};
}

const RelationPath kTeam = RelationPath::Parse("sports.pro_athlete.team");
const RelationPath kFirst = RelationPath::Parse("sports.pro_athlete.first_team");
const RelationPath kParentsRel = RelationPath::Parse("people.person.parents");

TEST(RelationDocs, TfIdfAndFlooring) {
  KBGraph kb = ShaqKB();
  Question shaq = Q(kShaq), parents = Q(kParents);
  auto docs = RelationDocModel::Build(kb, {{&shaq, kTeam}, {&parents, kParentsRel}});
  EXPECT_EQ(docs.num_docs(), 2);
  EXPECT_EQ(docs.tf(kTeam, "play"), 1);
  EXPECT_EQ(docs.tf(kParentsRel, "play"), 0);
  // Smoothed: ln(3/2) for a word in one of two documents, 0 in both.
  EXPECT_DOUBLE_EQ(docs.idf("play"), std::log(1.5));
  EXPECT_GT(docs.TfIdfSum(shaq, kTeam), 0.0);
  EXPECT_EQ(docs.TfIdfSum(shaq, kParentsRel), 0.0);
  EXPECT_EQ(docs.df("who"), 2);
  EXPECT_EQ(docs.idf("who"), 0.0);
  EXPECT_EQ(docs.idf("never"), std::log(3.0));
  EXPECT_THROW(RelationDocModel::Build(kb, {}), Error);
}

TEST(RelationDocs, QuestionWordAnswerTypeCooccurrence) {
  KBGraph kb = ShaqKB();
  Question when1 = Q(kWhen), when2 = Q(kWhen), shaq = Q(kShaq);
  when2.qid = "when2";
  RelationPath founded = RelationPath::Parse("sports.team.founded");
  auto docs = RelationDocModel::Build(kb, {{&when1, founded}, {&when2, founded}, {&shaq, kTeam}});
  // types {founded, team}; count(when) = 2
  EXPECT_DOUBLE_EQ(docs.Cooccurrence("when", "founded"), 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(docs.Cooccurrence("when", "team"), 1.0 / 4.0);
  EXPECT_GT(docs.Cooccurrence("when", "founded"), docs.Cooccurrence("when", "team"));
  EXPECT_DOUBLE_EQ(docs.Cooccurrence("where", "founded"), 1.0 / 2.0);
}

TEST(FeaturizePair, EntityClues) {
  KBGraph kb = ShaqKB();
  Question q = Q(kShaq);
  auto docs = RelationDocModel::Build(kb, {{&q, kTeam}});
  auto f = FeaturizePair(kb, docs, q, Cand(q, "m.012xdf", 3, 3, 0.8), kTeam, 0.4);
  EXPECT_EQ(f[kElScore], 0.8);
  EXPECT_EQ(f[kReScore], 0.4);
  // No stemming: "played" and "plays" do not match "play".
  EXPECT_EQ(f[kDescOverlap], 0.0);
  EXPECT_EQ(f[kMentionNameOverlap], 0.0);  // "shaq" vs "shaquille o'neal"
  auto fu = FeaturizePair(kb, docs, q, Cand(q, "m.05n7bp", 3, 3, 0.1), kTeam, 0.4);
  EXPECT_EQ(fu[kMentionNameOverlap], 1.0);  // "shaq fu"
}

TEST(FeaturizePair, DescriptionOverlapCountsMultiplicity) {
  std::vector<Entity> es = {{"m.s", "shaquille o'neal", {"shaq"}, "he would play , play and play again", false},
                            {"m.t", "team", {}, "", false}};
  KBGraph kb(es, {{"m.s", RelationId("sports.pro_athlete.team"), "m.t"}});
  Question q = Q(kShaq);
  auto docs = RelationDocModel::Build(kb, {{&q, kTeam}});
  auto f = FeaturizePair(kb, docs, q, Cand(q, "m.s", 3, 3, 1.0), kTeam, 0.5);
  EXPECT_EQ(f[kDescOverlap], 3.0);
}

TEST(FeaturizePair, RelationAndAnswerClues) {
  KBGraph kb = ShaqKB();
  Question q = Q(kParents);
  auto docs = RelationDocModel::Build(kb, {{&q, kParentsRel}});
  EntitySet answers;
  auto f = FeaturizePair(kb, docs, q, Cand(q, "m.emma", 3, 4, 1.0), kParentsRel, 0.9, &answers);
  EXPECT_EQ(f[kFrag3InQuestion], 1.0);
  EXPECT_EQ(f[kMentionNameOverlap], 2.0);
  EXPECT_EQ(answers, EntitySet{"m.dad"});
  EXPECT_DOUBLE_EQ(f[kAnswerCount], std::log(2.0));
  // Path with no answers from this entity.
  auto empty = FeaturizePair(kb, docs, q, Cand(q, "m.emma", 3, 4, 1.0), kTeam, 0.0);
  EXPECT_EQ(empty[kAnswerCount], 0.0);
  EXPECT_EQ(empty[kFrag3InQuestion], 0.0);
  for (double v : f) EXPECT_TRUE(std::isfinite(v));
}

TEST(FeaturizePair, MultiWordFinalFragment) {
  KBGraph kb = ShaqKB();
  Question q = Q(kShaq);
  auto docs = RelationDocModel::Build(kb, {{&q, kTeam}});
  // "first_team" needs "first team" contiguous; the question has "first play".
  auto f = FeaturizePair(kb, docs, q, Cand(q, "m.012xdf", 3, 3, 1.0), kFirst, 0.1);
  EXPECT_EQ(f[kFrag3InQuestion], 0.0);
}

TEST(FeaturizePair, PureAndNonLocal) {
  KBGraph kb = ShaqKB();
  Question q = Q(kShaq);
  auto docs = RelationDocModel::Build(kb, {{&q, kTeam}});
  auto c = Cand(q, "m.012xdf", 3, 3, 0.7);
  auto a = FeaturizePair(kb, docs, q, c, kTeam, 0.3);
  EXPECT_EQ(a, FeaturizePair(kb, docs, q, c, kTeam, 0.3));

  // Same KB plus an edge that does not touch (shaq, team): nothing moves.
  std::vector<Entity> es(kb.entities().size());
  std::transform(kb.entities().begin(), kb.entities().end(), es.begin(), [](const auto &kv) { return kv.second; });
  std::vector<Triple> ts(kb.edges().begin(), kb.edges().end());
  auto unrelated = ts;
  unrelated.push_back({"m.emma", RelationId("people.person.parents"), "m.y1996"});
  EXPECT_EQ(a, FeaturizePair(KBGraph(es, unrelated, {{"shaq", "m.012xdf", 30}}), docs, q, c, kTeam, 0.3));
  // An extra answer for (shaq, team) changes the answer clues.
  auto related = ts;
  related.push_back({"m.012xdf", RelationId("sports.pro_athlete.team"), "m.y1996"});
  auto b = FeaturizePair(KBGraph(es, related, {{"shaq", "m.012xdf", 30}}), docs, q, c, kTeam, 0.3);
  EXPECT_NE(a[kAnswerCount], b[kAnswerCount]);
  for (int i : {kElScore, kMentionNameOverlap, kDescOverlap, kReScore, kTfidfSum, kFrag3InQuestion}) {
    EXPECT_EQ(a[i], b[i]);
  }
}

TEST(RankLabels, ThreeTwoOne) {
  Question q = Q(kShaq);
  std::vector<ScoredPair> pairs(4);
  pairs[0].entity.entity = "m.012xdf", pairs[0].relation = kFirst;
  pairs[1].entity.entity = "m.012xdf", pairs[1].relation = kTeam;
  pairs[2].entity.entity = "m.05n7bp", pairs[2].relation = kFirst;
  pairs[3].entity.entity = "m.05n7bp", pairs[3].relation = kTeam;
  MakeRankLabels(&pairs, "m.012xdf", kFirst);
  EXPECT_EQ(pairs[0].label, 3);
  EXPECT_EQ(pairs[1].label, 2);
  EXPECT_EQ(pairs[2].label, 2);
  EXPECT_EQ(pairs[3].label, 1);
}

TEST(RankSvm, SeparableOneDimensional) {
  auto groups = testing::SeparableGroups();
  auto m = TrainRankSvm(groups);
  EXPECT_GT(m.weights()[0], 0.0);
  EXPECT_EQ(PairwiseAccuracy(m, groups), 1.0);
}

TEST(RankSvm, UnsatisfiablePairCountedAsViolated) {
  std::vector<std::vector<ScoredPair>> groups = {
      {Pair({1.0}, 3), Pair({1.0}, 1)},
      {Pair({2.0}, 3), Pair({0.0}, 1)},
  };
  auto m = TrainRankSvm(groups);
  for (double w : m.weights()) EXPECT_TRUE(std::isfinite(w));
  EXPECT_DOUBLE_EQ(PairwiseAccuracy(m, groups), 0.5);
}

TEST(RankSvm, NoRankingSignal) {
  std::vector<std::vector<ScoredPair>> groups = {{Pair({1.0}, 1), Pair({2.0}, 1)}, {Pair({0.0}, 2)}};
  try {
    TrainRankSvm(groups);
    FAIL();
  } catch (const Error &e) {
    EXPECT_STREQ(e.what(), "no ranking signal");
  }
}

TEST(RankSvm, EightFeatureLinearFixture) {
  auto groups = testing::LinearGroups();
  auto m = TrainRankSvm(groups);
  EXPECT_GE(PairwiseAccuracy(m, groups), 0.95);
  // Deterministic for a seed.
  EXPECT_EQ(m, TrainRankSvm(groups));
}

TEST(RankPairs, OrderTieBreaksAndScaling) {
  RankSvmModel m({1, 0, 0, 0, 0, 0, 0, 0}, std::vector<double>(8, 0.0), std::vector<double>(8, 1.0), 1.0);
  std::vector<ScoredPair> pairs = {Pair({0.3}, 0, "m.a"), Pair({1.2}, 0, "m.b")};
  auto ranked = RankPairs(m, pairs);
  EXPECT_EQ(ranked[0].entity.entity, "m.b");
  EXPECT_DOUBLE_EQ(ranked[0].rank_score, 1.2);
  EXPECT_EQ(pairs[0].entity.entity, "m.a");  // input untouched
  EXPECT_EQ(pairs[0].rank_score, 0.0);

  // Zero weights: el_score, then re_score, then ids decide.
  RankSvmModel zero({0, 0, 0, 0, 0, 0, 0, 0}, std::vector<double>(8, 0.0), std::vector<double>(8, 1.0), 1.0);
  std::vector<ScoredPair> ties = {Pair({0.5, 0, 0, 0.1}, 0, "m.c"), Pair({0.5, 0, 0, 0.9}, 0, "m.d"),
                                  Pair({0.9, 0, 0, 0.0}, 0, "m.e"), Pair({0.5, 0, 0, 0.9}, 0, "m.a")};
  auto t = RankPairs(zero, ties);
  EXPECT_EQ(t[0].entity.entity, "m.e");
  EXPECT_EQ(t[1].entity.entity, "m.a");
  EXPECT_EQ(t[2].entity.entity, "m.d");
  EXPECT_EQ(t[3].entity.entity, "m.c");

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> w(8);
  for (double &v : w) v = n(rng);
  std::vector<ScoredPair> many;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> f(8);
    for (double &v : f) v = n(rng);
    many.push_back(Pair(f, 0, "m." + std::to_string(i)));
  }
  auto w2 = w;
  for (double &v : w2) v *= 2;
  auto a = RankPairs(RankSvmModel(w, std::vector<double>(8, 0.0), std::vector<double>(8, 1.0), 1), many);
  auto b = RankPairs(RankSvmModel(w2, std::vector<double>(8, 0.0), std::vector<double>(8, 1.0), 1), many);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].entity.entity, b[i].entity.entity);
}

TEST(JointModel, SaveLoadRoundTrip) {
  KBGraph kb = ShaqKB();
  Question shaq = Q(kShaq), parents = Q(kParents), when = Q(kWhen);
  JointModel jm;
  jm.docs = RelationDocModel::Build(
      kb, {{&shaq, kTeam}, {&parents, kParentsRel}, {&when, RelationPath::Parse("sports.team.founded")}});
  jm.ranker = RankSvmModel({0.1, -0.2, 1.0 / 3, 0, 5, 6, 7, 8}, {1, 2, 3, 4, 5, 6, 7, 8.5},
                           {0.1, 1, 1, 1, 1, 1, 1, 3}, 7.0);
  testing::TempDir dir;
  jm.Save(dir.Path("r.model"));
  auto back = JointModel::Load(dir.Path("r.model"));
  EXPECT_TRUE(back == jm);
  EXPECT_EQ(back.docs.TfIdfSum(shaq, kTeam), jm.docs.TfIdfSum(shaq, kTeam));
  testing::WriteFile(dir.Path("bad.model"), "kbqa-joint 1\nranker 0x1p+0\nel_score 1\n");
  EXPECT_THROW(JointModel::Load(dir.Path("bad.model")), Error);
}

}  // namespace
}  // namespace kbqa
