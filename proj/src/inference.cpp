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

#include "qamp/inference.hpp"

#include <algorithm>
#include <unordered_map>

#include "qamp/error.hpp"

namespace qamp {

std::string to_string(NormMode mode) {
  return mode == NormMode::kAlg1 ? "alg1" : "edge-mean";
}

NormMode parse_norm_mode(const std::string& name) {
  if (name == "alg1") return NormMode::kAlg1;
  if (name == "edge-mean") return NormMode::kEdgeMean;
  throw ArgumentError("unknown normalisation mode '" + name + "'");
}

namespace {

// Candidate list resolved to ids; drops unknown URIs and zero confidences,
// keeps the best confidence per id.
template <typename Find>
std::vector<std::pair<std::uint32_t, double>> resolve(const CandidateList& list, Find find) {
  std::unordered_map<std::uint32_t, double> best;
  for (const auto& c : list) {
    if (!(c.confidence > 0)) continue;
    const auto id = find(c.uri);
    if (!id) continue;
    auto& slot = best[*id];
    slot = std::max(slot, c.confidence);
  }
  std::vector<std::pair<std::uint32_t, double>> out(best.begin(), best.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<HopActivations> hop_activations(const KnowledgeGraph& kg,
                                              const InterpretedHop& hop,
                                              const AnswerSet* prior) {
  auto find_entity = [&kg](const std::string& uri) { return kg.find_entity(uri); };
  auto find_property = [&kg](const std::string& uri) { return kg.find_property(uri); };

  std::vector<std::vector<std::pair<std::uint32_t, double>>> property_rows;
  for (const auto& list : hop.properties) {
    auto row = resolve(list, find_property);
    if (!row.empty()) property_rows.push_back(std::move(row));
  }
  std::vector<std::vector<std::pair<std::uint32_t, double>>> entity_rows;
  for (const auto& list : hop.entities) {
    auto row = resolve(list, find_entity);
    if (!row.empty()) entity_rows.push_back(std::move(row));
  }
  if (prior != nullptr) {
    std::vector<std::pair<std::uint32_t, double>> row;
    for (const auto& e : prior->entries) {
      if (e.score > 0) row.emplace_back(e.entity, e.score);
    }
    if (!row.empty()) entity_rows.push_back(std::move(row));
  }
  if (property_rows.empty() || entity_rows.empty()) return std::nullopt;

  std::vector<EntityId> seeds;
  for (const auto& row : entity_rows) {
    for (const auto& [id, confidence] : row) seeds.push_back(id);
  }
  std::vector<PropertyId> seed_properties;
  for (const auto& row : property_rows) {
    for (const auto& [id, confidence] : row) seed_properties.push_back(id);
  }

  HopActivations act{extract_subgraph<double>(kg, seeds, seed_properties), {}, {}};
  const auto& sub = act.subgraph;
  act.entities = ActivationMatrix<double>::Zero(static_cast<Eigen::Index>(entity_rows.size()),
                                                sub.n());
  for (std::size_t r = 0; r < entity_rows.size(); ++r) {
    for (const auto& [id, confidence] : entity_rows[r]) {
      act.entities(static_cast<Eigen::Index>(r), sub.local_index(id)) = confidence;
    }
  }
  act.properties = PropertyActivation<double>::Zero(
      static_cast<Eigen::Index>(property_rows.size()), sub.k());
  for (std::size_t j = 0; j < property_rows.size(); ++j) {
    for (const auto& [id, confidence] : property_rows[j]) {
      act.properties(static_cast<Eigen::Index>(j), sub.slice_index(id)) = confidence;
    }
  }
  return act;
}

AnswerSet answer_hop(const KnowledgeGraph& kg, const InterpretedHop& hop, const AnswerSet* prior,
                     const InferenceConfig& config) {
  if (config.threshold < 0 || config.threshold > 1) {
    throw ArgumentError("threshold must lie in [0, 1]");
  }
  AnswerSet answers;
  const auto act = hop_activations(kg, hop, prior);
  if (!act) {
    const bool has_property = std::any_of(
        hop.properties.begin(), hop.properties.end(), [&kg](const CandidateList& list) {
          return std::any_of(list.begin(), list.end(), [&kg](const ScoredCandidate& c) {
            return c.confidence > 0 && kg.find_property(c.uri).has_value();
          });
        });
    answers.no_match = !has_property;
    return answers;
  }

  const auto scores = message_pass(act->subgraph, act->entities, act->properties, config.norm);
  answers.thresholded = true;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (scores(i) > 0 && scores(i) >= config.threshold) {
      answers.entries.push_back({act->subgraph.local_entities[i], scores(i)});
    }
  }

  if (config.apply_class_filter) {
    std::vector<EntityId> wanted;
    for (const auto& list : hop.classes) {
      for (const auto& c : list) {
        if (!(c.confidence > 0)) continue;
        if (const auto id = kg.find_entity(c.uri)) wanted.push_back(*id);
      }
    }
    std::sort(wanted.begin(), wanted.end());
    if (!wanted.empty()) {
      answers.class_filtered = true;
      std::erase_if(answers.entries, [&](const ScoredEntity& e) {
        const auto classes = kg.classes_of(e.entity);
        return std::none_of(classes.begin(), classes.end(), [&](EntityId c) {
          return std::binary_search(wanted.begin(), wanted.end(), c);
        });
      });
    }
  }
  return answers;
}

Answer answer_question(const KnowledgeGraph& kg, const InterpretedQuestion& question,
                       const InferenceConfig& config) {
  if (question.hops.size() > config.max_hops) {
    throw PreconditionError("question has " + std::to_string(question.hops.size()) +
                            " hops, at most " + std::to_string(config.max_hops) +
                            " are supported");
  }
  AnswerSet current;
  bool have_prior = false;
  for (const auto& hop : question.hops) {
    AnswerSet next = answer_hop(kg, hop, have_prior ? &current : nullptr, config);
    current = std::move(next);
    have_prior = true;
  }

  Answer answer;
  answer.type = question.type;
  for (const auto& e : current.entries) answer.entities.push_back({kg.entity_uri(e.entity), e.score});
  std::sort(answer.entities.begin(), answer.entities.end(),
            [](const AnswerEntity& a, const AnswerEntity& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.uri < b.uri;
            });
  answer.count = answer.entities.size();
  answer.boolean = !answer.entities.empty();
  return answer;
}

}  // namespace qamp
