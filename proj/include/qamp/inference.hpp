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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qamp/graph_store.hpp"
#include "qamp/message_passing.hpp"
#include "qamp/question.hpp"
#include "qamp/subgraph.hpp"

namespace qamp {

struct InferenceConfig {
  double threshold = 0.5;  // tau, answers scoring below are dropped
  NormMode norm = NormMode::kAlg1;
  bool apply_class_filter = true;
  std::size_t max_hops = 2;
};

struct ScoredEntity {
  EntityId entity;
  double score;

  friend bool operator==(const ScoredEntity&, const ScoredEntity&) = default;
};

struct AnswerSet {
  std::vector<ScoredEntity> entries;  // ascending entity id
  bool thresholded = false;
  bool class_filtered = false;
  bool no_match = false;  // the hop had no usable property candidate

  bool empty() const { return entries.empty(); }
};

// Activation matrices for one hop, aligned with a subgraph.
struct HopActivations {
  SubgraphMatrices<double> subgraph;
  ActivationMatrix<double> entities;     // l x n
  PropertyActivation<double> properties; // m x k
};

// Builds the seeds from the hop candidates (and the previous answers, as
// one extra entity row), extracts the subgraph and fills the activation
// matrices. Returns nullopt when the hop has no usable property or entity.
std::optional<HopActivations> hop_activations(const KnowledgeGraph& kg,
                                              const InterpretedHop& hop,
                                              const AnswerSet* prior);

AnswerSet answer_hop(const KnowledgeGraph& kg, const InterpretedHop& hop,
                     const AnswerSet* prior, const InferenceConfig& config);

struct AnswerEntity {
  std::string uri;
  double score;
};

struct Answer {
  QuestionType type = QuestionType::kSelect;
  std::vector<AnswerEntity> entities;  // descending score, then ascending URI
  std::size_t count = 0;               // COUNT value: |A^h|
  bool boolean = false;                // ASK value: A^h non-empty
};

Answer answer_question(const KnowledgeGraph& kg, const InterpretedQuestion& question,
                       const InferenceConfig& config);

}  // namespace qamp
