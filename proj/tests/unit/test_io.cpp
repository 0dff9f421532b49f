// Copyright 2026 The crowdcomp Authors
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

#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include <json.hpp>

#include "crowdcomp/error.hpp"
#include "crowdcomp/gen.hpp"
#include "crowdcomp/io.hpp"
#include "oracles.hpp"

namespace crowdcomp {
namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

void expect_identical(const ProblemInstance& a, const ProblemInstance& b) {
  ASSERT_EQ(a.num_tasks(), b.num_tasks());
  ASSERT_EQ(a.num_drivers(), b.num_drivers());
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.calibration, b.calibration);
  for (std::size_t i = 0; i < a.num_tasks(); ++i) {
    EXPECT_EQ(a.tasks[i].dest.x, b.tasks[i].dest.x);
    EXPECT_EQ(a.tasks[i].dest.y, b.tasks[i].dest.y);
    EXPECT_EQ(a.tasks[i].cost, b.tasks[i].cost);
    EXPECT_EQ(a.tasks[i].penalized_cost, b.tasks[i].penalized_cost);
  }
  for (std::size_t k = 0; k < a.pairs.size(); ++k) {
    const PairParams& p = a.pairs[k];
    const PairParams& q = b.pairs[k];
    EXPECT_EQ(p.kind, q.kind);
    EXPECT_TRUE(same(p.alpha, q.alpha));
    EXPECT_TRUE(same(p.beta, q.beta));
    EXPECT_TRUE(same(p.gamma, q.gamma));
    EXPECT_TRUE(same(p.delta, q.delta));
    EXPECT_EQ(p.cap, q.cap);
    EXPECT_EQ(p.detour, q.detour);
  }
}

TEST(InstanceJson, LinearRoundTripIsExact) {
  GenConfig cfg;
  cfg.tasks = 7;
  cfg.drivers = 5;
  cfg.rho = 0.1;
  cfg.seed = 42;
  const ProblemInstance inst = generate(cfg);
  const std::string text = instance_to_json(inst);
  const ProblemInstance back = instance_from_json(text);
  expect_identical(inst, back);
  EXPECT_EQ(instance_to_json(back), text);
}

TEST(InstanceJson, LogisticRoundTripIsExact) {
  GenConfig cfg;
  cfg.tasks = 4;
  cfg.drivers = 6;
  cfg.model = ModelKind::kLogistic;
  cfg.dataset_rows = 20000;
  cfg.seed = 9;
  const ProblemInstance inst = generate(cfg);
  const ProblemInstance back = instance_from_json(instance_to_json(inst));
  expect_identical(inst, back);
  EXPECT_FALSE(back.calibration.empty());
}

TEST(InstanceJson, RandomInstancesRoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ProblemInstance inst = trial % 2 ? testing::random_linear_instance(rng, 3, 4)
                                           : testing::random_logistic_instance(rng, 3, 4);
    expect_identical(inst, instance_from_json(instance_to_json(inst)));
  }
}

TEST(InstanceJson, RejectsNonPositiveBeta) {
  GenConfig cfg;
  cfg.tasks = 2;
  cfg.drivers = 2;
  ProblemInstance inst = generate(cfg);
  inst.pairs[1].beta = 0.0;
  try {
    instance_from_json(instance_to_json(inst));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("pairs[1].beta"), std::string::npos) << msg;
    EXPECT_NE(msg.find("beta must be > 0"), std::string::npos) << msg;
  }
}

TEST(InstanceJson, RejectsMissingPair) {
  GenConfig cfg;
  cfg.tasks = 2;
  cfg.drivers = 1;
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(instance_to_json(generate(cfg)));
  doc["pairs"].erase(1);
  try {
    instance_from_json(doc.dump());
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("missing pair (1, 0)"), std::string::npos)
        << e.what();
  }
}

TEST(InstanceJson, RejectsDuplicatePair) {
  GenConfig cfg;
  cfg.tasks = 2;
  cfg.drivers = 1;
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(instance_to_json(generate(cfg)));
  doc["pairs"][1]["i"] = 0;
  EXPECT_THROW(instance_from_json(doc.dump()), InputError);
}

TEST(InstanceJson, RejectsMalformedText) {
  EXPECT_THROW(instance_from_json("{not json"), InputError);
  EXPECT_THROW(instance_from_json("[]"), InputError);
}

TEST(InstanceJson, RejectsOutOfRangeRho) {
  GenConfig cfg;
  cfg.tasks = 1;
  cfg.drivers = 1;
  ProblemInstance inst = generate(cfg);
  inst.rho = -0.5;
  EXPECT_THROW(instance_from_json(instance_to_json(inst)), InputError);
}

TEST(InstanceFile, LoadErrorNamesPath) {
  try {
    load_instance("/nonexistent/dir/inst.json");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/inst.json"), std::string::npos);
  }
}

TEST(PlanJson, RoundTrip) {
  OfferPlan plan;
  plan.allocations = {Allocation::company(), Allocation::offer(2, 3.25),
                      Allocation::offer(0, 1e-6)};
  plan.expected_cost = 12.5;
  const OfferPlan back = plan_from_json(plan_to_json(plan));
  ASSERT_EQ(back.allocations.size(), 3u);
  EXPECT_FALSE(back.allocations[0].offered());
  EXPECT_EQ(back.allocations[1].driver, 2);
  EXPECT_EQ(back.allocations[1].compensation, 3.25);
  EXPECT_EQ(back.allocations[2].compensation, 1e-6);
  ASSERT_TRUE(back.expected_cost);
  EXPECT_EQ(*back.expected_cost, 12.5);
}

TEST(ConstraintsJson, ParsesTablesAndDefaultsMissingToZero) {
  GenConfig cfg;
  cfg.tasks = 2;
  cfg.drivers = 2;
  const ProblemInstance inst = generate(cfg);
  const auto cons = constraints_from_json(
      R"([{"a": [[1, 1], [1, 1]], "B": 1}, {"b": [[1, 0], [0, 1]], "B": 5.5}])", inst);
  ASSERT_EQ(cons.size(), 2u);
  EXPECT_EQ(cons[0].a, std::vector<double>(4, 1.0));
  EXPECT_EQ(cons[0].b, std::vector<double>(4, 0.0));
  EXPECT_EQ(cons[1].limit, 5.5);
  EXPECT_THROW(constraints_from_json(R"([{"a": [[1, 1]], "B": 1}])", inst), InputError);
  EXPECT_THROW(constraints_from_json(R"([{"a": [[1, 1], [1]], "B": 1}])", inst), InputError);
  EXPECT_THROW(constraints_from_json(R"([{"B": 1}])", inst), InputError);
  EXPECT_THROW(constraints_from_json(R"([{"a": [[1, 0], [0, 0]]}])", inst), InputError);
}

}  // namespace
}  // namespace crowdcomp
