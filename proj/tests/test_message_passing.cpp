// Copyright 2026 The QAmp Authors.
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


#include <random>
#include <vector>

#include <doctest.h>

#include "qamp/error.hpp"
#include "qamp/graph_store.hpp"
#include "qamp/message_passing.hpp"
#include "qamp/subgraph.hpp"
#include "support.hpp"

using namespace qamp;
using namespace qamp::testing;

namespace {

struct Founders {
  KnowledgeGraph kg = KnowledgeGraph::load_file(test_data("founders/graph.nt"));
  EntityId tesla = *kg.find_entity("http://example.org/kg/Tesla");
  EntityId spacex = *kg.find_entity("http://example.org/kg/SpaceX");
  EntityId musk = *kg.find_entity("http://example.org/kg/Elon_Musk");
  PropertyId founded_by = *kg.find_property("http://example.org/ontology/foundedBy");
  PropertyId founder = *kg.find_property("http://example.org/ontology/founder");
};

}  // namespace

TEST_CASE("subgraph slices are symmetric and restricted to seeds") {
  Founders f;
  const std::vector<EntityId> seeds{f.spacex, f.tesla};
  const std::vector<PropertyId> props{f.founder, f.founded_by};
  const auto sub = extract_subgraph<double>(f.kg, seeds, props);
  CHECK(sub.n() == 3);
  CHECK(sub.k() == 2);
  CHECK(sub.slices[0].property < sub.slices[1].property);
  for (const auto& slice : sub.slices) {
    const Matrix<double> dense(slice.adjacency);
    CHECK(dense.isApprox(dense.transpose()));
    CHECK(dense.diagonal().isZero());
    CHECK(dense.sum() == 2.0);
  }
  CHECK_THROWS_AS(extract_subgraph<double>(f.kg, std::vector<EntityId>{}, props),
                  PreconditionError);
  CHECK_THROWS_AS(extract_subgraph<double>(f.kg, std::vector<EntityId>{999}, props),
                  LookupError);
}

TEST_CASE("worked example scores") {
  Founders f;
  const std::vector<EntityId> seeds{f.tesla, f.spacex};
  const std::vector<PropertyId> props{f.founded_by, f.founder};
  const auto sub = extract_subgraph<double>(f.kg, seeds, props);
  Matrix<double> e = Matrix<double>::Zero(2, sub.n());
  e(0, sub.local_index(f.tesla)) = 1.0;
  e(1, sub.local_index(f.spacex)) = 0.8;
  Matrix<double> p(1, 2);
  p(0, sub.slice_index(f.founded_by)) = 0.8;
  p(0, sub.slice_index(f.founder)) = 0.9;

  const auto state = propagate(sub, e, p);
  const auto x = sub.local_index(f.musk);
  CHECK(state.mass(x) == doctest::Approx(1.52).epsilon(1e-12));
  CHECK(state.entity_hits(x) == 2);
  CHECK(state.property_hits(x) == 1);
  CHECK(state.edge_contributions(x) == 2);

  const auto edge_mean = message_pass(sub, e, p, NormMode::kEdgeMean);
  CHECK(edge_mean(x) == doctest::Approx(0.94).epsilon(1e-12));
  const auto alg1 = message_pass(sub, e, p, NormMode::kAlg1);
  CHECK(alg1(x) == doctest::Approx((2 * 1.52 / 3 + 3) / 4).epsilon(1e-12));
  CHECK(alg1(x) == doctest::Approx(1.0033333333).epsilon(1e-9));
  CHECK(alg1(sub.local_index(f.tesla)) == 0.0);
}

TEST_CASE("float scalar type") {
  Founders f;
  const std::vector<EntityId> seeds{f.tesla};
  const std::vector<PropertyId> props{f.founded_by};
  const auto sub = extract_subgraph<float>(f.kg, seeds, props);
  Matrix<float> e = Matrix<float>::Zero(1, sub.n());
  e(0, sub.local_index(f.tesla)) = 1.0f;
  Matrix<float> p = Matrix<float>::Constant(1, 1, 0.8f);
  const auto scores = message_pass(sub, e, p, NormMode::kEdgeMean);
  CHECK(scores(sub.local_index(f.musk)) == doctest::Approx(2.8f / 3));
}

TEST_CASE("dimension and precondition errors") {
  Founders f;
  const std::vector<EntityId> seeds{f.tesla};
  const std::vector<PropertyId> props{f.founded_by};
  const auto sub = extract_subgraph<double>(f.kg, seeds, props);
  const Matrix<double> e = Matrix<double>::Ones(1, sub.n());
  CHECK_THROWS_AS(message_pass(sub, Matrix<double>::Ones(1, sub.n() + 1),
                               Matrix<double>::Ones(1, 1), NormMode::kAlg1),
                  DimensionError);
  CHECK_THROWS_AS(message_pass(sub, e, Matrix<double>::Ones(1, 2), NormMode::kAlg1),
                  DimensionError);
  CHECK_THROWS_AS(property_update(Vector<double>::Ones(3), sub), DimensionError);
  const auto state = MessagePassState<double>::zero(0, sub.n());
  CHECK_THROWS_AS(aggregate_scores(state, 0, 0, NormMode::kAlg1), PreconditionError);
  CHECK(parse_norm_mode("edge-mean") == NormMode::kEdgeMean);
  CHECK(to_string(NormMode::kAlg1) == "alg1");
  CHECK_THROWS_AS(parse_norm_mode("mean"), ArgumentError);
}

TEST_CASE("matrix path agrees with the per-triple oracle") {
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const std::size_t k = 1 + rng() % 5;
    const auto triples = random_triples(rng, n, k, 1 + rng() % 80);
    const auto kg = KnowledgeGraph::parse(std::string_view(to_ntriples(triples)));
    const auto problem = random_problem(rng, kg, 3, 3);
    for (const auto mode : {NormMode::kAlg1, NormMode::kEdgeMean}) {
      worst = std::max(worst, max_difference(oracle_scores(problem, mode),
                                             matrix_scores(kg, problem, mode)));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("scores are bounded for single references with one candidate each") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto triples = random_triples(rng, 12, 3, 30);
    const auto kg = KnowledgeGraph::parse(std::string_view(to_ntriples(triples)));
    auto problem = random_problem(rng, kg, 1, 1);
    for (auto* ref : {&problem.entity_refs[0]}) ref->erase(std::next(ref->begin()), ref->end());
    auto& pref = problem.property_refs[0];
    pref.erase(std::next(pref.begin()), pref.end());
    for (const auto mode : {NormMode::kAlg1, NormMode::kEdgeMean}) {
      for (const auto& [e, s] : matrix_scores(kg, problem, mode)) {
        CHECK(s >= 0.0);
        CHECK(s <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("reordering references leaves scores unchanged") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto triples = random_triples(rng, 15, 4, 40);
    const auto kg = KnowledgeGraph::parse(std::string_view(to_ntriples(triples)));
    auto problem = random_problem(rng, kg, 3, 3);
    const auto before = matrix_scores(kg, problem, NormMode::kAlg1);
    std::shuffle(problem.entity_refs.begin(), problem.entity_refs.end(), rng);
    std::shuffle(problem.property_refs.begin(), problem.property_refs.end(), rng);
    CHECK(max_difference(before, matrix_scores(kg, problem, NormMode::kAlg1)) <= 1e-12);
  }
}
