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

#include "qamp/question.hpp"

#include <algorithm>
#include <map>
#include <span>

#include "qamp/error.hpp"
#include "qamp/text.hpp"

namespace qamp {

std::string to_string(QuestionType type) {
  switch (type) {
    case QuestionType::kSelect: return "SELECT";
    case QuestionType::kAsk: return "ASK";
    case QuestionType::kCount: return "COUNT";
  }
  return "SELECT";
}

QuestionType parse_question_type(std::string_view name) {
  if (name == "SELECT") return QuestionType::kSelect;
  if (name == "ASK") return QuestionType::kAsk;
  if (name == "COUNT") return QuestionType::kCount;
  throw ArgumentError("unknown question type '" + std::string(name) + "'");
}

QuestionType detect_question_type(std::string_view question) {
  if (question.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ArgumentError("empty question");
  }
  const auto tokens = text::tokenize(question);
  auto word = [&](std::size_t i) -> std::string_view {
    return i < tokens.size() ? std::string_view(tokens[i].lower) : std::string_view();
  };
  if ((word(0) == "how" && word(1) == "many") || word(0) == "count" ||
      (word(0) == "total" && word(1) == "number")) {
    return QuestionType::kCount;
  }
  static constexpr std::string_view kAuxiliaries[] = {"is",   "are",  "was", "were",
                                                      "do",   "does", "did"};
  for (const auto aux : kAuxiliaries) {
    if (word(0) == aux) return QuestionType::kAsk;
  }
  return QuestionType::kSelect;
}

namespace {

constexpr std::size_t kMaxSpanTokens = 8;

struct FoundSpan {
  TermKind kind;
  std::size_t first;  // token indexes, inclusive
  std::size_t last;
};

void add_reference(Hop& hop, TermKind kind, Reference ref) {
  switch (kind) {
    case TermKind::kEntity: hop.entity_refs.push_back(std::move(ref)); break;
    case TermKind::kProperty: hop.property_refs.push_back(std::move(ref)); break;
    case TermKind::kClass: hop.class_refs.push_back(std::move(ref)); break;
  }
}

}  // namespace

QuestionModel extract_references(std::string_view question, const TermCatalog& catalog) {
  QuestionModel model;
  model.type = detect_question_type(question);
  const auto tokens = text::tokenize(question);
  const std::size_t max_len =
      std::clamp<std::size_t>(catalog.max_lexicon_tokens(), 1, kMaxSpanTokens);

  std::vector<FoundSpan> spans;
  for (std::size_t i = 0; i < tokens.size();) {
    if (tokens[i].stopword) {
      ++i;
      continue;
    }
    bool matched = false;
    const std::size_t longest = std::min(max_len, tokens.size() - i);
    for (std::size_t len = longest; len >= 1 && !matched; --len) {
      const std::size_t last = i + len - 1;
      if (tokens[last].stopword) continue;
      // a possessive ends a noun phrase, spans do not run through it
      bool crosses = false;
      for (std::size_t t = i; t < last; ++t) crosses = crosses || tokens[t].possessive;
      if (crosses) continue;
      const auto key = lexicon_key(std::span(tokens).subspan(i, len));
      if (const auto kind = catalog.lexicon_kind(key)) {
        spans.push_back({*kind, i, last});
        i = last + 1;
        matched = true;
      }
    }
    if (!matched) ++i;
  }

  auto reference = [&](const FoundSpan& span) {
    const auto begin = tokens[span.first].begin;
    const auto end = tokens[span.last].end;
    return Reference{std::string(question.substr(begin, end - begin)), begin, end};
  };

  // Words before the first "of" or possessive form the head of the question.
  std::size_t head_end = 0;  // token index one past the head
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t].lower == "of") {
      head_end = t;
      break;
    }
    if (tokens[t].possessive) {
      head_end = t + 1;
      break;
    }
  }
  bool head_property = false, tail_property = false, tail_entity = false;
  for (const auto& span : spans) {
    const bool in_head = span.last < head_end;
    if (span.kind == TermKind::kProperty) (in_head ? head_property : tail_property) = true;
    if (span.kind == TermKind::kEntity && !in_head) tail_entity = true;
  }

  if (head_property && tail_property && tail_entity) {
    model.hops.resize(2);
    for (const auto& span : spans) {
      auto& hop = span.last < head_end ? model.hops[1] : model.hops[0];
      add_reference(hop, span.kind, reference(span));
    }
  } else {
    model.hops.resize(1);
    for (const auto& span : spans) add_reference(model.hops[0], span.kind, reference(span));
  }
  return model;
}

InterpretedQuestion interpret(const QuestionModel& model, const TermCatalog& catalog,
                              const MatchLimits& limits) {
  InterpretedQuestion iq;
  iq.type = model.type;
  for (const auto& hop : model.hops) {
    InterpretedHop out;
    for (const auto& ref : hop.entity_refs) {
      out.entities.push_back(catalog.match_entity(ref.text, limits.entities));
    }
    for (const auto& ref : hop.property_refs) {
      out.properties.push_back(catalog.match_property(ref.text, limits.properties));
    }
    for (const auto& ref : hop.class_refs) {
      out.classes.push_back(catalog.match_class(ref.text, limits.classes));
    }
    iq.hops.push_back(std::move(out));
  }
  return iq;
}

InterpretedQuestion interpret(std::string_view question, const TermCatalog& catalog,
                              const MatchLimits& limits) {
  return interpret(extract_references(question, catalog), catalog, limits);
}

namespace {

enum class Channel { kEntity, kProperty, kClass };

void resolve(const KnowledgeGraph& kg, Channel channel, const std::string& uri) {
  const bool known = channel == Channel::kProperty ? kg.find_property(uri).has_value()
                                                   : kg.find_entity(uri).has_value();
  if (!known) {
    const char* what = channel == Channel::kProperty ? "property" : "entity";
    throw ResolutionError(std::string("unknown ") + what + " URI in gold interpretation: " +
                          uri);
  }
}

std::vector<CandidateList> gold_lists(const std::vector<GoldReference>& refs, Channel channel,
                                      GoldMode mode, const KnowledgeGraph& kg,
                                      const GoldOptions& options) {
  std::vector<CandidateList> lists;
  for (const auto& ref : refs) {
    for (const auto& gold : ref.uris) resolve(kg, channel, gold.uri);
    for (const auto& d : ref.distractors) resolve(kg, channel, d.uri);

    if (mode == GoldMode::kGt) {
      for (const auto& gold : ref.uris) lists.push_back({{gold.uri, 1.0}});
      continue;
    }

    std::map<std::string, double> merged;
    auto keep_max = [&merged](const std::string& uri, double confidence) {
      auto [it, inserted] = merged.emplace(uri, confidence);
      if (!inserted) it->second = std::max(it->second, confidence);
    };
    if (mode == GoldMode::kAnnotated) {
      for (const auto& d : ref.distractors) keep_max(d.uri, d.confidence);
      for (const auto& gold : ref.uris) keep_max(gold.uri, gold.confidence.value_or(1.0));
    } else {
      const double delta = options.distractor_scale;
      for (const auto& d : ref.distractors) keep_max(d.uri, d.confidence * delta);
      if (options.catalog != nullptr && !text::normalize(ref.span).empty()) {
        CandidateList matched;
        switch (channel) {
          case Channel::kEntity:
            matched = options.catalog->match_entity(ref.span, options.limits.entities);
            break;
          case Channel::kProperty:
            matched = options.catalog->match_property(ref.span, options.limits.properties);
            break;
          case Channel::kClass:
            matched = options.catalog->match_class(ref.span, options.limits.classes);
            break;
        }
        for (const auto& c : matched) keep_max(c.uri, c.confidence * delta);
      }
      for (const auto& gold : ref.uris) merged[gold.uri] = 1.0;
    }
    CandidateList list;
    for (auto& [uri, confidence] : merged) {
      if (confidence > 0) list.push_back({uri, confidence});
    }
    sort_candidates(list);
    lists.push_back(std::move(list));
  }
  return lists;
}

}  // namespace

InterpretedQuestion load_gold_interpretation(QuestionType type, const GoldInterpretation& gold,
                                             const KnowledgeGraph& kg,
                                             const GoldOptions& options) {
  if (options.distractor_scale < 0 || options.distractor_scale > 1) {
    throw ArgumentError("distractor scale must lie in [0, 1]");
  }
  InterpretedQuestion iq;
  iq.type = type;
  for (const auto& hop : gold.hops) {
    InterpretedHop out;
    out.entities =
        gold_lists(hop.entities, Channel::kEntity, options.channels.entities, kg, options);
    out.properties = gold_lists(hop.properties, Channel::kProperty,
                                options.channels.properties, kg, options);
    out.classes =
        gold_lists(hop.classes, Channel::kClass, options.channels.classes, kg, options);
    iq.hops.push_back(std::move(out));
  }
  return iq;
}

}  // namespace qamp
