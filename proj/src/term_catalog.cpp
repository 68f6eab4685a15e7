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

#include "qamp/term_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qamp/error.hpp"

namespace qamp {
namespace {

constexpr double kK1 = 1.2;
constexpr double kB = 0.75;

enum LexiconFlag : std::uint8_t {
  kFullProperty = 1,
  kFullClass = 2,
  kFullEntity = 4,
  kHeadProperty = 8,
};

// Largest double below 1: non-exact matches never tie with exact ones.
const double kBelowOne = std::nextafter(1.0, 0.0);

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string require_reference(std::string_view reference) {
  auto normalized = text::normalize(reference);
  if (normalized.empty()) throw ArgumentError("empty reference");
  return normalized;
}

}  // namespace

void sort_candidates(std::vector<ScoredCandidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.confidence != b.confidence) return a.confidence > b.confidence;
              return a.uri < b.uri;
            });
}

std::string lexicon_key(std::span<const text::Token> tokens) {
  std::string key;
  for (const auto& token : tokens) {
    if (token.stopword) continue;
    if (!key.empty()) key += ' ';
    key += token.stem;
  }
  return key;
}

// --- WordVectors -----------------------------------------------------------

WordVectors WordVectors::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open vector file " + path.string());
  return parse(in);
}

WordVectors WordVectors::parse(std::istream& in) {
  WordVectors wv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    std::string field;
    while (fields >> field) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw LoadError("vector file line " + std::to_string(line_no) +
                        ": bad number '" + field + "'");
      }
    }
    if (values.empty()) {
      throw LoadError("vector file line " + std::to_string(line_no) + ": no components");
    }
    if (wv.dimension_ == 0) {
      wv.dimension_ = values.size();
    } else if (values.size() != wv.dimension_) {
      throw LoadError("vector file line " + std::to_string(line_no) + ": dimension " +
                      std::to_string(values.size()) + ", expected " +
                      std::to_string(wv.dimension_));
    }
    wv.vectors_[text::to_lower_ascii(token)] = std::move(values);
  }
  return wv;
}

const std::vector<double>* WordVectors::find(std::string_view token) const {
  const auto it = vectors_.find(std::string(token));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> WordVectors::mean(
    std::span<const text::Token> tokens) const {
  std::vector<double> sum(dimension_, 0.0);
  std::size_t known = 0;
  for (const auto& token : tokens) {
    const auto* v = find(token.lower);
    if (v == nullptr) continue;
    for (std::size_t i = 0; i < dimension_; ++i) sum[i] += (*v)[i];
    ++known;
  }
  if (known == 0) return std::nullopt;
  for (auto& x : sum) x /= static_cast<double>(known);
  return sum;
}

// --- LabelIndex ------------------------------------------------------------

std::vector<std::string> LabelIndex::features(std::string_view normalized) {
  std::vector<std::string> out;
  for (const auto& token : text::tokenize(normalized)) out.push_back("w:" + token.stem);
  for (auto& gram : text::char_trigrams(normalized)) out.push_back("g:" + gram);
  return out;
}

void LabelIndex::add(std::uint32_t term, std::string_view label) {
  auto normalized = text::normalize(label);
  if (normalized.empty()) return;
  const auto doc = static_cast<std::uint32_t>(docs_.size());
  auto feats = features(normalized);
  std::sort(feats.begin(), feats.end());
  for (std::size_t i = 0; i < feats.size();) {
    std::size_t j = i;
    while (j < feats.size() && feats[j] == feats[i]) ++j;
    postings_[feats[i]].push_back({doc, static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  docs_.push_back({term, static_cast<std::uint32_t>(feats.size()), std::move(normalized)});
}

void LabelIndex::finish() {
  double total = 0;
  for (const auto& doc : docs_) total += doc.length;
  average_length_ = docs_.empty() ? 1.0 : total / static_cast<double>(docs_.size());
}

double LabelIndex::idf(std::size_t df) const {
  const double n = static_cast<double>(docs_.size());
  return std::log(1.0 + (n - static_cast<double>(df) + 0.5) / (static_cast<double>(df) + 0.5));
}

double LabelIndex::term_weight(double tf, double length) const {
  return tf * (kK1 + 1.0) / (tf + kK1 * (1.0 - kB + kB * length / average_length_));
}

std::vector<LabelIndex::Hit> LabelIndex::search(std::string_view reference) const {
  const auto normalized = require_reference(reference);
  auto feats = features(normalized);
  std::sort(feats.begin(), feats.end());

  // Score the reference would get against a label identical to itself.
  double self_bound = 0;
  std::unordered_map<std::uint32_t, double> doc_scores;
  for (std::size_t i = 0; i < feats.size();) {
    std::size_t j = i;
    while (j < feats.size() && feats[j] == feats[i]) ++j;
    const auto it = postings_.find(feats[i]);
    const std::size_t df = it == postings_.end() ? 0 : it->second.size();
    const double w = idf(df);
    self_bound += w * term_weight(static_cast<double>(j - i), static_cast<double>(feats.size()));
    if (it != postings_.end()) {
      for (const auto& posting : it->second) {
        doc_scores[posting.doc] +=
            w * term_weight(posting.tf, static_cast<double>(docs_[posting.doc].length));
      }
    }
    i = j;
  }

  double raw_max = 0;
  for (const auto& [doc, score] : doc_scores) raw_max = std::max(raw_max, score);
  const double scale = std::max(raw_max, self_bound);

  std::unordered_map<std::uint32_t, double> best;
  for (const auto& [doc, score] : doc_scores) {
    const auto& d = docs_[doc];
    const double confidence =
        d.normalized == normalized ? 1.0 : std::min(score / scale, kBelowOne);
    auto& slot = best[d.term];
    slot = std::max(slot, confidence);
  }
  std::vector<Hit> hits;
  hits.reserve(best.size());
  for (const auto& [term, confidence] : best) hits.push_back({term, confidence});
  return hits;
}

// --- TermCatalog -----------------------------------------------------------

TermCatalog TermCatalog::build(const KnowledgeGraph& kg,
                               const std::optional<std::filesystem::path>& vector_file) {
  std::optional<WordVectors> vectors;
  if (vector_file) vectors = WordVectors::load(*vector_file);
  return build(kg, std::move(vectors));
}

TermCatalog TermCatalog::build(const KnowledgeGraph& kg, std::optional<WordVectors> vectors) {
  TermCatalog catalog;
  catalog.vectors_ = std::move(vectors);

  auto add_key = [&catalog](std::string_view label, std::uint8_t flag) {
    const auto tokens = text::tokenize(label);
    const auto key = lexicon_key(tokens);
    if (key.empty()) return;
    catalog.lexicon_[key] |= flag;
    catalog.max_lexicon_tokens_ = std::max(catalog.max_lexicon_tokens_, tokens.size());
    if (flag != kFullProperty) return;
    for (const auto& token : tokens) {
      if (!token.stopword) catalog.lexicon_[token.stem] |= kHeadProperty;
    }
  };

  catalog.entity_uris_.reserve(kg.entity_count());
  for (EntityId e = 0; e < kg.entity_count(); ++e) {
    catalog.entity_uris_.push_back(kg.entity_uri(e));
    for (const auto& label : kg.entity_labels(e)) {
      catalog.entities_.add(e, label);
      add_key(label, kg.is_class(e) ? kFullClass : kFullEntity);
    }
  }
  for (const auto c : kg.classes()) {
    const auto local = static_cast<std::uint32_t>(catalog.class_uris_.size());
    catalog.class_uris_.push_back(kg.entity_uri(c));
    for (const auto& label : kg.entity_labels(c)) catalog.classes_.add(local, label);
  }
  for (PropertyId p = 0; p < kg.property_count(); ++p) {
    catalog.property_uris_.push_back(kg.property_uri(p));
    for (const auto& label : kg.property_labels(p)) {
      catalog.properties_.add(p, label);
      add_key(label, kFullProperty);
      PropertyVector pv{p, text::normalize(label), std::nullopt};
      if (catalog.vectors_) pv.vector = catalog.vectors_->mean(text::tokenize(label));
      catalog.property_vectors_.push_back(std::move(pv));
    }
  }
  catalog.entities_.finish();
  catalog.classes_.finish();
  catalog.properties_.finish();
  return catalog;
}

std::vector<ScoredCandidate> TermCatalog::finish(std::vector<LabelIndex::Hit> hits,
                                                 const std::vector<std::string>& uris,
                                                 std::size_t top_k) const {
  std::vector<ScoredCandidate> out;
  out.reserve(hits.size());
  for (const auto& hit : hits) out.push_back({uris[hit.term], hit.confidence});
  sort_candidates(out);
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

std::vector<ScoredCandidate> TermCatalog::match_entity(std::string_view reference,
                                                       std::size_t top_k) const {
  return finish(entities_.search(reference), entity_uris_, top_k);
}

std::vector<ScoredCandidate> TermCatalog::match_class(std::string_view reference,
                                                      std::size_t top_k) const {
  return finish(classes_.search(reference), class_uris_, top_k);
}

std::vector<ScoredCandidate> TermCatalog::match_property(std::string_view reference,
                                                         std::size_t top_k) const {
  const auto normalized = require_reference(reference);
  std::optional<std::vector<double>> query;
  if (vectors_) query = vectors_->mean(text::tokenize(normalized));
  if (!query) return finish(properties_.search(normalized), property_uris_, top_k);

  std::unordered_map<std::uint32_t, double> best;
  for (const auto& pv : property_vectors_) {
    double confidence = 0;
    if (pv.normalized == normalized) {
      confidence = 1.0;
    } else if (pv.vector) {
      confidence = std::clamp(cosine(*query, *pv.vector), 0.0, kBelowOne);
    }
    if (confidence <= 0) continue;
    auto& slot = best[pv.property];
    slot = std::max(slot, confidence);
  }
  std::vector<LabelIndex::Hit> hits;
  for (const auto& [property, confidence] : best) hits.push_back({property, confidence});
  return finish(std::move(hits), property_uris_, top_k);
}

std::optional<TermKind> TermCatalog::lexicon_kind(std::string_view key) const {
  const auto it = lexicon_.find(std::string(key));
  if (it == lexicon_.end()) return std::nullopt;
  const auto flags = it->second;
  if (flags & kFullProperty) return TermKind::kProperty;
  if (flags & kFullClass) return TermKind::kClass;
  if (flags & kFullEntity) return TermKind::kEntity;
  return TermKind::kProperty;
}

}  // namespace qamp
