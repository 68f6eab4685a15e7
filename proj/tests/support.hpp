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


// Shared helpers for the test binaries: fixture paths, random graphs and a
// per-triple reference implementation of the scoring rule.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qamp/graph_store.hpp"
#include "qamp/message_passing.hpp"
#include "qamp/subgraph.hpp"

namespace qamp::testing {

inline std::filesystem::path test_data(const std::string& relative) {
  return std::filesystem::path(QAMP_TEST_DATA) / relative;
}

inline std::string entity_name(std::size_t i) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "http://r.example/e%04zu", i);
  return buf;
}

inline std::string property_name(std::size_t i) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "http://r.example/p%02zu", i);
  return buf;
}

struct RandomTriple {
  std::size_t s, p, o;
};

// Random triples over entities e0..e(n-1) and properties p0..p(k-1),
// including duplicates, reversed duplicates and self loops.
inline std::vector<RandomTriple> random_triples(std::mt19937_64& rng, std::size_t n,
                                                std::size_t k, std::size_t count) {
  std::vector<RandomTriple> out;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t s = rng() % n;
    const std::size_t o = rng() % 10 == 0 ? s : rng() % n;
    out.push_back({s, rng() % k, o});
    if (rng() % 8 == 0) out.push_back({o, out.back().p, s});
  }
  return out;
}

inline std::string to_ntriples(const std::vector<RandomTriple>& triples) {
  std::string text;
  for (const auto& t : triples) {
    text += "<" + entity_name(t.s) + "> <" + property_name(t.p) + "> <" + entity_name(t.o) + "> .\n";
  }
  return text;
}

// Reference scorer. Works from the triple list: every distinct undirected
// edge (p, {a, b}) with a != b, a seed property p and at least one seed end
// sends E_r(a) * P_j(p) to b for every entity reference r and property
// reference j, and the other way round.
struct OracleProblem {
  std::vector<Triple> triples;
  std::vector<std::map<EntityId, double>> entity_refs;
  std::vector<std::map<PropertyId, double>> property_refs;
};

inline std::map<EntityId, double> oracle_scores(const OracleProblem& problem, NormMode mode) {
  std::set<EntityId> seeds;
  for (const auto& ref : problem.entity_refs) {
    for (const auto& [e, c] : ref) seeds.insert(e);
  }
  std::set<PropertyId> properties;
  for (const auto& ref : problem.property_refs) {
    for (const auto& [p, c] : ref) properties.insert(p);
  }
  std::set<std::tuple<PropertyId, EntityId, EntityId>> edges;
  for (const auto& t : problem.triples) {
    if (t.subject == t.object || !properties.contains(t.property)) continue;
    if (!seeds.contains(t.subject) && !seeds.contains(t.object)) continue;
    edges.insert({t.property, std::min(t.subject, t.object), std::max(t.subject, t.object)});
  }
  auto conf = [](const auto& ref, auto key) {
    const auto it = ref.find(key);
    return it == ref.end() ? 0.0 : it->second;
  };
  auto entity_active = [&](EntityId e) {
    for (const auto& ref : problem.entity_refs) {
      if (conf(ref, e) > 0) return true;
    }
    return false;
  };
  auto property_active = [&](PropertyId p) {
    for (const auto& ref : problem.property_refs) {
      if (conf(ref, p) > 0) return true;
    }
    return false;
  };

  const std::size_t l = problem.entity_refs.size();
  const std::size_t m = problem.property_refs.size();
  // y[(r, j)][x]
  std::map<std::pair<std::size_t, std::size_t>, std::map<EntityId, double>> y;
  std::map<EntityId, int> edge_count;
  std::set<EntityId> touched;
  for (const auto& [p, a, b] : edges) {
    touched.insert(a);
    touched.insert(b);
    for (const auto& [from, to] : {std::pair(a, b), std::pair(b, a)}) {
      if (property_active(p) && entity_active(from)) ++edge_count[to];
      for (std::size_t r = 0; r < l; ++r) {
        for (std::size_t j = 0; j < m; ++j) {
          y[{r, j}][to] += conf(problem.entity_refs[r], from) * conf(problem.property_refs[j], p);
        }
      }
    }
  }

  std::map<EntityId, double> scores;
  for (const auto x : touched) {
    double w = 0;
    int n_e = 0, n_p = 0;
    for (std::size_t r = 0; r < l; ++r) {
      double row = 0;
      for (std::size_t j = 0; j < m; ++j) row += y[{r, j}][x];
      w += row;
      n_e += row > 0;
    }
    for (std::size_t j = 0; j < m; ++j) {
      double col = 0;
      for (std::size_t r = 0; r < l; ++r) col += y[{r, j}][x];
      n_p += col > 0;
    }
    double fraction = 0;
    if (mode == NormMode::kAlg1) {
      fraction = 2 * w / static_cast<double>(l + m);
    } else if (edge_count[x] > 0) {
      fraction = w / edge_count[x];
    }
    scores[x] = (fraction + n_e + n_p) / static_cast<double>(l + m + 1);
  }
  return scores;
}

// The same problem through the sparse-matrix path.
inline std::map<EntityId, double> matrix_scores(const KnowledgeGraph& kg,
                                                const OracleProblem& problem, NormMode mode) {
  std::vector<EntityId> seeds;
  for (const auto& ref : problem.entity_refs) {
    for (const auto& [e, c] : ref) seeds.push_back(e);
  }
  std::vector<PropertyId> properties;
  for (const auto& ref : problem.property_refs) {
    for (const auto& [p, c] : ref) properties.push_back(p);
  }
  const auto sub = extract_subgraph<double>(kg, seeds, properties);
  const auto l = static_cast<Eigen::Index>(problem.entity_refs.size());
  const auto m = static_cast<Eigen::Index>(problem.property_refs.size());
  Matrix<double> e = Matrix<double>::Zero(l, sub.n());
  for (Eigen::Index r = 0; r < l; ++r) {
    for (const auto& [id, c] : problem.entity_refs[r]) e(r, sub.local_index(id)) = c;
  }
  Matrix<double> p = Matrix<double>::Zero(m, sub.k());
  for (Eigen::Index j = 0; j < m; ++j) {
    for (const auto& [id, c] : problem.property_refs[j]) p(j, sub.slice_index(id)) = c;
  }
  const auto scores = message_pass(sub, e, p, mode);
  std::map<EntityId, double> out;
  for (Eigen::Index x = 0; x < sub.n(); ++x) out[sub.local_entities[x]] = scores(x);
  return out;
}

// Random problem over a graph: 1..max_l entity references and 1..max_m
// property references, each with 1..3 candidates and uniform confidences.
inline OracleProblem random_problem(std::mt19937_64& rng, const KnowledgeGraph& kg,
                                    std::size_t max_l, std::size_t max_m) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  OracleProblem problem;
  problem.triples.assign(kg.triples().begin(), kg.triples().end());
  const std::size_t l = 1 + rng() % max_l;
  const std::size_t m = 1 + rng() % max_m;
  for (std::size_t r = 0; r < l; ++r) {
    std::map<EntityId, double> ref;
    const std::size_t c = 1 + rng() % 3;
    for (std::size_t i = 0; i < c; ++i) {
      ref[static_cast<EntityId>(rng() % kg.entity_count())] = unit(rng);
    }
    problem.entity_refs.push_back(std::move(ref));
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::map<PropertyId, double> ref;
    const std::size_t c = 1 + rng() % 3;
    for (std::size_t i = 0; i < c; ++i) {
      ref[static_cast<PropertyId>(rng() % kg.property_count())] = unit(rng);
    }
    problem.property_refs.push_back(std::move(ref));
  }
  return problem;
}

// Largest |oracle - matrix| over the union of scored entities.
inline double max_difference(const std::map<EntityId, double>& a,
                             const std::map<EntityId, double>& b) {
  double worst = 0;
  auto lookup = [](const auto& map, EntityId e) {
    const auto it = map.find(e);
    return it == map.end() ? 0.0 : it->second;
  };
  for (const auto& [e, v] : a) worst = std::max(worst, std::abs(v - lookup(b, e)));
  for (const auto& [e, v] : b) worst = std::max(worst, std::abs(v - lookup(a, e)));
  return worst;
}

}  // namespace qamp::testing
