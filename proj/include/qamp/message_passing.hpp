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

// Confidence propagation over a subgraph.
//
// Inputs are the k property slices S (n x n each), an l x n entity
// activation matrix E (one row per entity reference) and an m x k property
// activation matrix P (one row per property reference). For every property
// reference j the slices are collapsed into S_j = sum_i P(j,i) S_i and the
// entity activations are pushed one step, Y = E S_j. The propagated mass W
// and the per-entity counts of entity references (N_E) and property
// references (N_P) that delivered nonzero activation are combined into
//
//   A = (W' + N_E + N_P) / (l + m + 1)
//
// where W' is W normalised either as 2W / (l + m) or as W divided by the
// number of distinct weighted edges that carried mass into the entity.

#pragma once

#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "qamp/error.hpp"
#include "qamp/subgraph.hpp"

namespace qamp {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Rows are entity references, columns are local entities.
template <typename Scalar>
using ActivationMatrix = Matrix<Scalar>;
// Rows are property references, columns are subgraph slices.
template <typename Scalar>
using PropertyActivation = Matrix<Scalar>;

enum class NormMode {
  kAlg1,      // W <- 2W / (l + m)
  kEdgeMean,  // W <- W / #contributing (edge, property) pairs
};

std::string to_string(NormMode mode);
NormMode parse_norm_mode(const std::string& name);

template <typename Scalar>
struct MessagePassState {
  Vector<Scalar> mass;                 // W, unnormalised
  Eigen::VectorXi entity_hits;         // N_E
  Eigen::VectorXi property_hits;       // N_P
  Matrix<Scalar> entity_activation;    // Y_E, l x n
  Eigen::VectorXi edge_contributions;  // denominator for kEdgeMean

  static MessagePassState zero(Eigen::Index l, Eigen::Index n) {
    MessagePassState s;
    s.mass = Vector<Scalar>::Zero(n);
    s.entity_hits = Eigen::VectorXi::Zero(n);
    s.property_hits = Eigen::VectorXi::Zero(n);
    s.entity_activation = Matrix<Scalar>::Zero(l, n);
    s.edge_contributions = Eigen::VectorXi::Zero(n);
    return s;
  }
};

// S_j = sum_i weights(i) * slice_i. Overlapping edges add up.
template <typename Derived, typename Scalar>
SparseMatrix<Scalar> property_update(const Eigen::MatrixBase<Derived>& weights,
                                     const SubgraphMatrices<Scalar>& sub) {
  if (weights.size() != sub.k()) {
    throw DimensionError("property_update: " + std::to_string(weights.size()) +
                         " weights for " + std::to_string(sub.k()) + " slices");
  }
  SparseMatrix<Scalar> combined(sub.n(), sub.n());
  for (Eigen::Index i = 0; i < sub.k(); ++i) {
    const Scalar w = weights(i);
    if (w != Scalar(0)) combined += w * sub.slices[i].adjacency;
  }
  return combined;
}

// Y = E * S_j: one sum-product step per entity reference row.
template <typename Derived, typename Scalar>
Matrix<Scalar> entity_update(const Eigen::MatrixBase<Derived>& activations,
                             const SparseMatrix<Scalar>& combined) {
  if (activations.cols() != combined.rows()) {
    throw DimensionError("entity_update: activation width " +
                         std::to_string(activations.cols()) + " vs matrix size " +
                         std::to_string(combined.rows()));
  }
  return activations * combined;
}

template <typename Scalar>
Vector<Scalar> aggregate_scores(const MessagePassState<Scalar>& state, Eigen::Index l,
                                Eigen::Index m, NormMode mode) {
  if (l + m == 0) throw PreconditionError("aggregate_scores: l + m must be positive");
  const Eigen::Index n = state.mass.size();
  Vector<Scalar> fraction(n);
  if (mode == NormMode::kAlg1) {
    fraction = Scalar(2) * state.mass / Scalar(l + m);
  } else {
    for (Eigen::Index x = 0; x < n; ++x) {
      const int edges = state.edge_contributions(x);
      fraction(x) = edges > 0 ? state.mass(x) / Scalar(edges) : Scalar(0);
    }
  }
  return (fraction + state.entity_hits.template cast<Scalar>() +
          state.property_hits.template cast<Scalar>()) /
         Scalar(l + m + 1);
}

// Runs the full propagation and returns the accumulated state; see
// message_pass for the scores.
template <typename DerivedE, typename DerivedP, typename Scalar>
MessagePassState<Scalar> propagate(const SubgraphMatrices<Scalar>& sub,
                                   const Eigen::MatrixBase<DerivedE>& entities,
                                   const Eigen::MatrixBase<DerivedP>& properties) {
  const Eigen::Index n = sub.n();
  if (entities.cols() != n) {
    throw DimensionError("message_pass: entity activations have " +
                         std::to_string(entities.cols()) + " columns, subgraph has " +
                         std::to_string(n) + " entities");
  }
  if (properties.cols() != sub.k()) {
    throw DimensionError("message_pass: property activations have " +
                         std::to_string(properties.cols()) + " columns, subgraph has " +
                         std::to_string(sub.k()) + " slices");
  }
  auto state = MessagePassState<Scalar>::zero(entities.rows(), n);
  for (Eigen::Index j = 0; j < properties.rows(); ++j) {
    const SparseMatrix<Scalar> combined = property_update(properties.row(j), sub);
    const Matrix<Scalar> y = entity_update(entities, combined);
    state.mass += y.colwise().sum().transpose();
    state.property_hits +=
        (y.array() > Scalar(0)).colwise().any().transpose().template cast<int>().matrix();
    state.entity_activation += y;
  }
  state.entity_hits =
      (state.entity_activation.array() > Scalar(0)).template cast<int>().colwise().sum().transpose();

  // distinct (edge, property) pairs carrying mass: active slice, active neighbour
  Vector<Scalar> active_entities =
      (entities.array() > Scalar(0)).colwise().any().transpose().template cast<Scalar>();
  Vector<Scalar> contributions = Vector<Scalar>::Zero(n);
  for (Eigen::Index i = 0; i < sub.k(); ++i) {
    if ((properties.col(i).array() > Scalar(0)).any()) {
      contributions += sub.slices[i].adjacency * active_entities;
    }
  }
  state.edge_contributions = contributions.array().round().template cast<int>().matrix();
  return state;
}

template <typename DerivedE, typename DerivedP, typename Scalar>
Vector<Scalar> message_pass(const SubgraphMatrices<Scalar>& sub,
                            const Eigen::MatrixBase<DerivedE>& entities,
                            const Eigen::MatrixBase<DerivedP>& properties, NormMode mode) {
  const auto state = propagate(sub, entities, properties);
  return aggregate_scores(state, entities.rows(), properties.rows(), mode);
}

}  // namespace qamp
