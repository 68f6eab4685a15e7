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

// Per-question local subgraphs as a stack of symmetric sparse adjacency
// slices, one slice per seed property.

#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "qamp/error.hpp"
#include "qamp/graph_store.hpp"

namespace qamp {

template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;

template <typename Scalar>
struct PropertySlice {
  PropertyId property;
  SparseMatrix<Scalar> adjacency;  // n x n, symmetric, zero diagonal
};

template <typename Scalar>
struct SubgraphMatrices {
  std::vector<EntityId> local_entities;  // ascending global ids
  std::vector<PropertySlice<Scalar>> slices;  // ascending property ids
  std::vector<EntityId> origin;  // seed entities, ascending

  Eigen::Index n() const { return static_cast<Eigen::Index>(local_entities.size()); }
  Eigen::Index k() const { return static_cast<Eigen::Index>(slices.size()); }

  // Position of a global entity id among local_entities, or -1.
  Eigen::Index local_index(EntityId entity) const {
    const auto it = std::lower_bound(local_entities.begin(), local_entities.end(), entity);
    if (it == local_entities.end() || *it != entity) return -1;
    return static_cast<Eigen::Index>(it - local_entities.begin());
  }

  Eigen::Index slice_index(PropertyId property) const {
    for (std::size_t i = 0; i < slices.size(); ++i) {
      if (slices[i].property == property) return static_cast<Eigen::Index>(i);
    }
    return -1;
  }
};

namespace detail {

inline std::vector<std::uint32_t> sorted_unique(std::span<const std::uint32_t> ids) {
  std::vector<std::uint32_t> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// Collects every triple that has a seed entity in subject or object
// position and a seed property, ignoring direction. The local universe is
// the seeds plus their neighbours through seed properties. When nothing
// matches, the slices are all zero over the seeds alone.
template <typename Scalar = double>
SubgraphMatrices<Scalar> extract_subgraph(const KnowledgeGraph& kg,
                                          std::span<const EntityId> seed_entities,
                                          std::span<const PropertyId> seed_properties) {
  if (seed_entities.empty() || seed_properties.empty()) {
    throw PreconditionError("extract_subgraph: seed sets must be non-empty");
  }
  SubgraphMatrices<Scalar> sub;
  sub.origin = detail::sorted_unique(seed_entities);
  const auto properties = detail::sorted_unique(seed_properties);
  for (const auto e : sub.origin) kg.entity_uri(e);
  for (const auto p : properties) kg.property_uri(p);

  // (slice, seed, neighbour) for each matching incidence
  struct Edge {
    std::size_t slice;
    EntityId a;
    EntityId b;
  };
  std::vector<Edge> edges;
  std::vector<EntityId> locals = sub.origin;
  for (const auto seed : sub.origin) {
    for (const auto& inc : kg.incident(seed)) {
      const auto it = std::lower_bound(properties.begin(), properties.end(), inc.property);
      if (it == properties.end() || *it != inc.property) continue;
      edges.push_back({static_cast<std::size_t>(it - properties.begin()), seed, inc.neighbor});
      locals.push_back(inc.neighbor);
    }
  }
  std::sort(locals.begin(), locals.end());
  locals.erase(std::unique(locals.begin(), locals.end()), locals.end());
  sub.local_entities = std::move(locals);

  const auto n = sub.n();
  std::vector<std::vector<Eigen::Triplet<Scalar, int>>> entries(properties.size());
  for (const auto& edge : edges) {
    const auto i = static_cast<int>(sub.local_index(edge.a));
    const auto j = static_cast<int>(sub.local_index(edge.b));
    entries[edge.slice].emplace_back(i, j, Scalar(1));
    entries[edge.slice].emplace_back(j, i, Scalar(1));
  }
  sub.slices.reserve(properties.size());
  for (std::size_t s = 0; s < properties.size(); ++s) {
    SparseMatrix<Scalar> m(n, n);
    // an edge between two seeds is reached from both ends; keep entries 0/1
    m.setFromTriplets(entries[s].begin(), entries[s].end(),
                      [](const Scalar& a, const Scalar&) { return a; });
    m.makeCompressed();
    sub.slices.push_back({properties[s], std::move(m)});
  }
  return sub;
}

}  // namespace qamp
