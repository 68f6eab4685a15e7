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

// Question models: the question type plus, per hop, the text references to
// entities, properties and classes, and their interpreted form in which
// every reference carries a ranked list of candidate URIs.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qamp/graph_store.hpp"
#include "qamp/term_catalog.hpp"

namespace qamp {

enum class QuestionType { kSelect, kAsk, kCount };

std::string to_string(QuestionType type);
// "SELECT", "ASK" or "COUNT"; throws ArgumentError otherwise.
QuestionType parse_question_type(std::string_view name);

struct Reference {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the question
  std::size_t end = 0;
};

struct Hop {
  std::vector<Reference> entity_refs;
  std::vector<Reference> property_refs;
  std::vector<Reference> class_refs;

  bool empty() const {
    return entity_refs.empty() && property_refs.empty() && class_refs.empty();
  }
};

struct QuestionModel {
  QuestionType type = QuestionType::kSelect;
  std::vector<Hop> hops;  // 1 or 2
};

using CandidateList = std::vector<ScoredCandidate>;

struct InterpretedHop {
  std::vector<CandidateList> entities;
  std::vector<CandidateList> properties;
  std::vector<CandidateList> classes;
};

struct InterpretedQuestion {
  QuestionType type = QuestionType::kSelect;
  std::vector<InterpretedHop> hops;
};

struct MatchLimits {
  std::size_t entities = kEntityTopK;
  std::size_t properties = kPropertyTopK;
  std::size_t classes = kClassTopK;
};

// Leading "how many" / "count" / "total number" -> COUNT; leading
// auxiliary or copula -> ASK; anything else -> SELECT.
QuestionType detect_question_type(std::string_view question);

// Longest-match scan of the question against the catalog lexicon. When the
// question has an "of"-phrase or possessive and the words before it hold a
// property reference while the rest holds both an entity and a property
// reference, the leading references form hop 2 and the rest hop 1.
// A question without any recognised term yields a single empty hop.
QuestionModel extract_references(std::string_view question, const TermCatalog& catalog);

InterpretedQuestion interpret(const QuestionModel& model, const TermCatalog& catalog,
                              const MatchLimits& limits = {});
InterpretedQuestion interpret(std::string_view question, const TermCatalog& catalog,
                              const MatchLimits& limits = {});

// --- gold annotations ------------------------------------------------------

struct GoldUri {
  std::string uri;
  std::optional<double> confidence;  // used only in kAnnotated mode
};

struct GoldReference {
  std::string span;
  std::vector<GoldUri> uris;
  std::vector<ScoredCandidate> distractors;
};

struct GoldHop {
  std::vector<GoldReference> entities;
  std::vector<GoldReference> properties;
  std::vector<GoldReference> classes;
};

struct GoldInterpretation {
  std::vector<GoldHop> hops;
};

enum class GoldMode {
  kGt,          // each gold URI alone at confidence 1
  kGtSpanPlus,  // gold URIs at 1 plus a distractor tail scaled by delta
  kAnnotated,   // URIs and distractors with their recorded confidences
};

struct GoldChannels {
  GoldMode entities = GoldMode::kGt;
  GoldMode properties = GoldMode::kGt;
  GoldMode classes = GoldMode::kGt;
};

struct GoldOptions {
  GoldChannels channels;
  double distractor_scale = 0.5;  // delta
  // When set, GT-span+ also matches the reference span against the catalog
  // and adds the scaled matches to the tail.
  const TermCatalog* catalog = nullptr;
  MatchLimits limits;
};

// Throws ResolutionError naming any URI the graph does not contain.
InterpretedQuestion load_gold_interpretation(QuestionType type, const GoldInterpretation& gold,
                                             const KnowledgeGraph& kg,
                                             const GoldOptions& options = {});

}  // namespace qamp
