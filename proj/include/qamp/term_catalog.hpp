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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qamp/graph_store.hpp"
#include "qamp/text.hpp"

namespace qamp {

struct ScoredCandidate {
  std::string uri;
  double confidence = 0.0;

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

// Descending confidence, then ascending URI bytes.
void sort_candidates(std::vector<ScoredCandidate>& candidates);

enum class TermKind { kEntity, kProperty, kClass };

inline constexpr std::size_t kEntityTopK = 500;
inline constexpr std::size_t kPropertyTopK = 50;
inline constexpr std::size_t kClassTopK = 50;

// Token -> vector map read from a `token v1 ... vd` text file. Tokens are
// looked up by their lowercased form.
class WordVectors {
 public:
  static WordVectors load(const std::filesystem::path& path);
  static WordVectors parse(std::istream& in);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<double>* find(std::string_view token) const;

  // Mean of the in-vocabulary token vectors; nullopt when none is known.
  std::optional<std::vector<double>> mean(std::span<const text::Token> tokens) const;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// BM25 retrieval over label features (word stems and character 3-grams).
class LabelIndex {
 public:
  struct Hit {
    std::uint32_t term;
    double confidence;
  };

  void add(std::uint32_t term, std::string_view label);
  void finish();

  std::size_t label_count() const { return docs_.size(); }

  // Best confidence per term; exact normalized-label matches score 1.0.
  // Unsorted, not truncated.
  std::vector<Hit> search(std::string_view reference) const;

 private:
  struct Doc {
    std::uint32_t term;
    std::uint32_t length;
    std::string normalized;
  };
  struct Posting {
    std::uint32_t doc;
    std::uint32_t tf;
  };

  static std::vector<std::string> features(std::string_view normalized);
  double idf(std::size_t df) const;
  double term_weight(double tf, double length) const;

  std::vector<Doc> docs_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  double average_length_ = 1.0;
};

class TermCatalog {
 public:
  static TermCatalog build(const KnowledgeGraph& kg,
                           std::optional<WordVectors> vectors = std::nullopt);
  static TermCatalog build(const KnowledgeGraph& kg,
                           const std::optional<std::filesystem::path>& vector_file);

  std::vector<ScoredCandidate> match_entity(std::string_view reference,
                                            std::size_t top_k = kEntityTopK) const;
  std::vector<ScoredCandidate> match_property(std::string_view reference,
                                              std::size_t top_k = kPropertyTopK) const;
  std::vector<ScoredCandidate> match_class(std::string_view reference,
                                           std::size_t top_k = kClassTopK) const;

  // Kind of term whose label, reduced to its non-stopword stems, equals the
  // given key ("bank america" for "Bank of America"). Full labels win over
  // single-word property heads; properties win over classes, classes over
  // entities.
  std::optional<TermKind> lexicon_kind(std::string_view key) const;
  std::size_t max_lexicon_tokens() const { return max_lexicon_tokens_; }

  std::size_t entity_label_count() const { return entities_.label_count(); }
  std::size_t property_label_count() const { return properties_.label_count(); }
  std::size_t class_label_count() const { return classes_.label_count(); }
  bool has_vectors() const { return vectors_.has_value(); }
  const WordVectors* vectors() const { return vectors_ ? &*vectors_ : nullptr; }

 private:
  std::vector<ScoredCandidate> finish(std::vector<LabelIndex::Hit> hits,
                                      const std::vector<std::string>& uris,
                                      std::size_t top_k) const;

  std::vector<std::string> entity_uris_;
  std::vector<std::string> property_uris_;
  std::vector<std::string> class_uris_;
  LabelIndex entities_;
  LabelIndex properties_;
  LabelIndex classes_;

  struct PropertyVector {
    std::uint32_t property;
    std::string normalized;
    std::optional<std::vector<double>> vector;
  };
  std::vector<PropertyVector> property_vectors_;
  std::optional<WordVectors> vectors_;

  std::unordered_map<std::string, std::uint8_t> lexicon_;
  std::size_t max_lexicon_tokens_ = 0;
};

// Non-stopword stems joined by spaces.
std::string lexicon_key(std::span<const text::Token> tokens);

}  // namespace qamp
