#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "linklabel/planted.hpp"
#include "linklabel/predictors.hpp"
#include "oracle/fixture.hpp"

using namespace linklabel;
using testing_support::Fixture;
using testing_support::random_fixture;

namespace {

constexpr Label kPos = 0;
constexpr Label kNeg = 1;

// i=0, j=1, x=2, w1=3, w2=4, w3=5; all in one cluster.
std::unique_ptr<Fixture> g1() {
  const std::vector<Edge> edges = {{0, 2, kPos}, {3, 2, kPos}, {3, 1, kPos}, {4, 2, kPos},
                                   {4, 1, kNeg}, {5, 2, kPos}, {5, 1, kPos}};
  return std::make_unique<Fixture>(6, 2, edges, std::vector<ClusterId>(6, 0), 1);
}

SmoothingConfig with_alpha(double alpha) {
  SmoothingConfig c;
  c.lcgm_floor_alpha = alpha;
  return c;
}

}  // namespace

TEST(ClassPrior, Shares) {
  const SignedGraph all_pos = SignedGraph::from_edges(
      LabelAlphabet::signs(), 3, std::vector<Edge>{{0, 1, kPos}, {1, 2, kPos}});
  EXPECT_EQ(class_prior(all_pos).probs, (std::vector<double>{1.0, 0.0}));
  const SignedGraph even = SignedGraph::from_edges(
      LabelAlphabet::signs(), 3,
      std::vector<Edge>{{0, 1, kPos}, {1, 2, kPos}, {2, 0, kNeg}, {1, 0, kNeg}});
  EXPECT_EQ(class_prior(even).probs, (std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(class_prior(SignedGraph(LabelAlphabet::signs(), 3)), ArgumentError);
}

TEST(Ltlgm, WorkedExample) {
  const auto f = g1();
  const auto in = f->inputs({});
  const LabelDistribution d = predict_ltlgm(in, {0, 1});
  ASSERT_TRUE(d.defined);
  EXPECT_NEAR(d.probs[kPos], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(d.probs[kNeg], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(d.evidence, 1u);
  // Node 1 has no out-edges: empty context.
  EXPECT_FALSE(predict_ltlgm(in, {1, 0}).defined);
}

TEST(Ltlgm, IdenticalTermsAverageToThemselves) {
  // Heads 1 and 2 receive exactly the same tails with the same labels.
  const std::vector<Edge> edges = {{0, 1, kPos}, {0, 2, kPos}, {3, 1, kPos}, {3, 2, kPos},
                                   {3, 4, kNeg}, {5, 1, kPos}, {5, 2, kPos}, {5, 4, kPos}};
  Fixture f(6, 2, edges, std::vector<ClusterId>(6, 0), 1);
  const auto in = f.inputs({});
  Fixture single(6, 2, {{0, 1, kPos}, {3, 1, kPos}, {3, 4, kNeg}, {5, 1, kPos}, {5, 4, kPos}},
                 std::vector<ClusterId>(6, 0), 1);
  const LabelDistribution both = predict_ltlgm(in, {0, 4});
  const LabelDistribution one = predict_ltlgm(single.inputs({}), {0, 4});
  ASSERT_TRUE(both.defined);
  EXPECT_NEAR(both.probs[0], one.probs[0], 1e-15);
  EXPECT_NEAR(both.probs[0], 0.5, 1e-15);
}

TEST(Lcgm, WorkedExampleWithoutFloor) {
  const auto f = g1();
  const LabelDistribution d = predict_lcgm(f->inputs(with_alpha(0.0)), {0, 1});
  ASSERT_TRUE(d.defined);
  EXPECT_DOUBLE_EQ(d.probs[kPos], 0.5);
  EXPECT_DOUBLE_EQ(d.probs[kNeg], 0.5);
  // The tie goes to the label with the larger training prior.
  EXPECT_EQ(decide(d, f->inputs({}).prior).label, kPos);
}

TEST(Lcgm, WorkedExampleWithLaplaceFloor) {
  const auto f = g1();
  const LabelDistribution d = predict_lcgm(f->inputs(with_alpha(1.0)), {0, 1});
  ASSERT_TRUE(d.defined);
  const double pos = 0.75, neg = 2.0 / 3.0;
  EXPECT_NEAR(d.probs[kPos], pos / (pos + neg), 1e-12);
  EXPECT_NEAR(d.probs[kPos], 0.5294117647, 1e-9);
}

TEST(Lcgm, EmptyContextGivesThePrior) {
  const auto f = g1();
  SmoothingConfig c;
  EXPECT_EQ(predict_lcgm(f->inputs(c), {1, 0}).probs, (std::vector<double>{0.5, 0.5}));
  c.prior_mode = PriorMode::kEmpirical;
  const auto in = f->inputs(c);
  const LabelDistribution d = predict_lcgm(in, {1, 0});
  EXPECT_TRUE(d.defined);
  EXPECT_EQ(d.evidence, 0u);
  EXPECT_NEAR(d.probs[kPos], 6.0 / 7.0, 1e-15);
}

TEST(Decide, ArgmaxTiesAndFallback) {
  LabelDistribution prior{{0.85, 0.15}, true, 0, {}};
  EXPECT_EQ(decide({{0.7, 0.3}, true, 1, {}}, prior).label, 0);
  EXPECT_EQ(decide({{0.5, 0.5}, true, 1, {}}, prior).label, 0);
  LabelDistribution skewed{{0.2, 0.8}, true, 0, {}};
  EXPECT_EQ(decide({{0.5, 0.5}, true, 1, {}}, skewed).label, 1);
  const Decision d = decide(LabelDistribution::undefined(2), skewed);
  EXPECT_EQ(d.label, 1);
  EXPECT_TRUE(d.used_fallback);
  LabelDistribution flat{{0.25, 0.25, 0.25, 0.25}, true, 0, {}};
  EXPECT_EQ(decide({{0.1, 0.4, 0.4, 0.1}, true, 1, {}}, flat).label, 1);
}

TEST(Lambda, RangeAndMonotonicity) {
  EXPECT_EQ(dirichlet_lambda(0.0, 0.0), 1.0);
  EXPECT_EQ(dirichlet_lambda(0.0, 3.0), 0.0);
  EXPECT_EQ(dirichlet_lambda(4.0, 4.0), 0.5);
  for (double mu : {0.1, 1.0, 4.0, 100.0}) {
    double prev = 2.0;
    for (double n = 0; n < 50; n += 1.0) {
      const double l = dirichlet_lambda(mu, n);
      EXPECT_GE(l, 0.0);
      EXPECT_LE(l, 1.0);
      EXPECT_LT(l, prev);
      prev = l;
    }
  }
}

TEST(Global, PlantedPurity) {
  PlantedOptions o;
  o.seed = 5;
  const PlantedGraph pg = generate_planted(o);
  Fixture f(pg.graph.node_count(), 2, pg.graph.edges(), pg.roles, pg.n_roles);
  const auto in = f.inputs({});
  std::size_t defined = 0, strict = 0, queries = 0;
  for (NodeId i = 0; i < 90; i += 3) {
    for (NodeId j = 0; j < 90; ++j) {
      if (i == j) continue;
      ++queries;
      const Label truth = pg.table_label(pg.roles[i], pg.roles[j]);
      const LabelDistribution gt = predict_gtlgm(in, {i, j});
      if (gt.defined) {
        ++defined;
        EXPECT_EQ(gt.probs[truth], 1.0);
      }
      const LabelDistribution gc = predict_gcgm(in, {i, j});
      EXPECT_GE(gc.probs[truth], gc.probs[1 - truth]);
      strict += gc.probs[truth] > gc.probs[1 - truth];
    }
  }
  EXPECT_GT(defined, queries * 9 / 10);
  EXPECT_GT(strict, queries * 9 / 10);
}

TEST(Stlgm, EqualWeightGivesTheMidpoint) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 30 && checked < 20; ++trial) {
    const auto f = random_fixture(rng, 25, 2);
    for (NodeId i = 0; i < f->graph.node_count(); ++i) {
      if (f->graph.out_degree(i) != 2) continue;
      // With two out-edges, querying one leaves a single-entry context.
      const OutEntry other = f->graph.out_edges(i)[0];
      const NodeId j = f->graph.out_edges(i)[1].head;
      const auto den = f->counts.count(j, kAny, other.head, other.label);
      SmoothingConfig c;
      c.mu = static_cast<double>(den);
      const auto in = f->inputs(c);
      const LabelDistribution local = predict_ltlgm(in, {i, j});
      const LabelDistribution global = predict_gtlgm(in, {i, j});
      if (den == 0 || !global.defined) continue;
      const LabelDistribution mixed = predict_stlgm(in, {i, j});
      ASSERT_TRUE(mixed.defined);
      EXPECT_DOUBLE_EQ(mixed.entries[0].lambda[0], 0.5);
      for (Label l = 0; l < 2; ++l) {
        EXPECT_NEAR(mixed.probs[l], 0.5 * (local.probs[l] + global.probs[l]), 1e-15);
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(Scgm, MissingLocalSupportMeansPurelyGlobal) {
  std::mt19937_64 rng(5);
  int seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = random_fixture(rng, 20, 2);
    const auto in = f->inputs({});
    for (NodeId i = 0; i < f->graph.node_count(); ++i) {
      for (NodeId j = 0; j < f->graph.node_count(); ++j) {
        if (i == j) continue;
        const LabelDistribution d = predict_scgm(in, {i, j});
        for (const EntryDiagnostic& e : d.entries) {
          if (e.status == EntryStatus::kSkipped) continue;
          for (std::size_t l = 0; l < e.support.size(); ++l) {
            if (e.support[l] == 0.0) {
              EXPECT_EQ(e.lambda[l], 1.0);
              ++seen;
            }
          }
        }
      }
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(AllModels, MatchBruteForceOracle) {
  std::mt19937_64 rng(101);
  testing_support::OracleComparison cmp;
  for (int trial = 0; trial < 8; ++trial) {
    const auto f = random_fixture(rng, 18, 2 + trial % 2);
    SmoothingConfig c;
    c.mu = trial % 3 == 0 ? 0.5 : 4.0;
    c.lambda_mode = trial % 2 ? LambdaMode::kPaper : LambdaMode::kSupport;
    c.lcgm_floor_alpha = trial % 4 == 3 ? 0.0 : 1.0;
    c.prior_mode = trial % 3 == 1 ? PriorMode::kEmpirical : PriorMode::kUniform;
    testing_support::compare_with_oracle(*f, c, cmp);
  }
  EXPECT_GT(cmp.comparisons, 1000u);
  EXPECT_EQ(cmp.definedness_mismatches, 0u) << cmp.worst;
  EXPECT_LE(cmp.max_error, 1e-12) << cmp.worst;
}

TEST(AllModels, DistributionsAreNormalized) {
  std::mt19937_64 rng(55);
  std::size_t cases = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_fixture(rng, 20, 2 + trial % 3);
    SmoothingConfig c;
    c.mu = trial * 0.7;
    c.lambda_mode = trial % 2 ? LambdaMode::kPaper : LambdaMode::kSupport;
    const auto in = f->inputs(c);
    for (NodeId i = 0; i < f->graph.node_count(); ++i) {
      for (NodeId j = 0; j < f->graph.node_count(); j += 2) {
        if (i == j) continue;
        for (ModelKind kind : testing_support::six_models()) {
          const LabelDistribution d = predict(in, kind, {i, j});
          ++cases;
          if (!d.defined) continue;
          double sum = 0.0;
          for (double p : d.probs) {
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
            sum += p;
          }
          EXPECT_NEAR(sum, 1.0, 1e-9);
        }
      }
    }
  }
  EXPECT_GT(cases, 5000u);
}

TEST(AllModels, GlobalModelsNeedAPartition) {
  const SignedGraph g = SignedGraph::from_edges(
      LabelAlphabet::signs(), 3, std::vector<Edge>{{0, 1, kPos}, {0, 2, kNeg}});
  const CooccurrenceCounts counts(g);
  const ModelInputs in(g, counts, nullptr, nullptr, {});
  EXPECT_THROW(predict(in, ModelKind::kGtlgm, {0, 1}), ArgumentError);
  EXPECT_NO_THROW(predict(in, ModelKind::kLtlgm, {0, 1}));
  EXPECT_EQ(predict(in, ModelKind::kPrior, {0, 1}).evidence, 0u);
}

TEST(Config, Validation) {
  SmoothingConfig c;
  c.mu = -1.0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c.mu = 1.0;
  c.lcgm_floor_alpha = -0.5;
  EXPECT_THROW(c.validate(), ArgumentError);
  EXPECT_EQ(parse_model_kind("STLGM"), ModelKind::kStlgm);
  EXPECT_THROW(parse_model_kind("svm"), ArgumentError);
}
