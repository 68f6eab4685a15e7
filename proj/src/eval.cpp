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

#include "qamp/eval.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "qamp/error.hpp"

namespace qamp {

using nlohmann::json;

// --- dataset I/O -----------------------------------------------------------

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw LoadError(where + ": " + what);
}

[[noreturn]] void schema_error(std::size_t index, const std::string& what) {
  schema_error("dataset record " + std::to_string(index), what);
}

std::vector<GoldReference> parse_references(const json& hop, const char* key,
                                            const std::string& where) {
  std::vector<GoldReference> refs;
  if (!hop.contains(key)) return refs;
  const auto& array = hop.at(key);
  if (!array.is_array()) schema_error(where, std::string(key) + " must be an array");
  for (const auto& item : array) {
    if (!item.is_object()) schema_error(where, std::string(key) + " entries must be objects");
    GoldReference ref;
    if (item.contains("span")) {
      if (!item.at("span").is_string()) schema_error(where, "span must be a string");
      ref.span = item.at("span").get<std::string>();
    }
    if (!item.contains("uris") || !item.at("uris").is_array()) {
      schema_error(where, "reference without a uris array");
    }
    for (const auto& u : item.at("uris")) {
      GoldUri gold;
      if (u.is_string()) {
        gold.uri = u.get<std::string>();
      } else if (u.is_object() && u.contains("uri") && u.at("uri").is_string()) {
        gold.uri = u.at("uri").get<std::string>();
        if (u.contains("confidence")) {
          if (!u.at("confidence").is_number()) schema_error(where, "confidence must be a number");
          gold.confidence = u.at("confidence").get<double>();
          if (*gold.confidence < 0 || *gold.confidence > 1) {
            schema_error(where, "confidence outside [0, 1]");
          }
        }
      } else {
        schema_error(where, "malformed uri entry");
      }
      ref.uris.push_back(std::move(gold));
    }
    if (item.contains("distractors")) {
      if (!item.at("distractors").is_array()) schema_error(where, "distractors must be an array");
      for (const auto& d : item.at("distractors")) {
        if (!d.is_object() || !d.contains("uri") || !d.at("uri").is_string() ||
            !d.contains("confidence") || !d.at("confidence").is_number()) {
          schema_error(where, "distractors need uri and confidence");
        }
        const double c = d.at("confidence").get<double>();
        if (c < 0 || c > 1) schema_error(where, "confidence outside [0, 1]");
        ref.distractors.push_back({d.at("uri").get<std::string>(), c});
      }
    }
    refs.push_back(std::move(ref));
  }
  return refs;
}

GoldInterpretation parse_hops(const json& gi, const std::string& where) {
  if (!gi.is_object() || !gi.contains("hops") || !gi.at("hops").is_array()) {
    schema_error(where, "interpretation needs a hops array");
  }
  GoldInterpretation interpretation;
  for (const auto& hop : gi.at("hops")) {
    if (!hop.is_object()) schema_error(where, "hop must be an object");
    GoldHop h;
    h.entities = parse_references(hop, "entities", where);
    h.properties = parse_references(hop, "properties", where);
    h.classes = parse_references(hop, "classes", where);
    interpretation.hops.push_back(std::move(h));
  }
  if (interpretation.hops.empty() || interpretation.hops.size() > 2) {
    schema_error(where, "interpretation must have 1 or 2 hops");
  }
  return interpretation;
}

QARecord parse_record(const json& item, std::size_t index) {
  if (!item.is_object()) schema_error(index, "record must be an object");
  QARecord record;
  if (!item.contains("id") || !item.at("id").is_string() ||
      item.at("id").get<std::string>().empty()) {
    schema_error(index, "missing or empty id");
  }
  record.id = item.at("id").get<std::string>();
  if (!item.contains("question") || !item.at("question").is_string()) {
    schema_error(index, "missing question");
  }
  record.question = item.at("question").get<std::string>();
  if (!item.contains("type") || !item.at("type").is_string()) schema_error(index, "missing type");
  try {
    record.type = parse_question_type(item.at("type").get<std::string>());
  } catch (const ArgumentError& e) {
    schema_error(index, e.what());
  }
  if (!item.contains("gold")) schema_error(index, "missing gold");
  const auto& gold = item.at("gold");
  switch (record.type) {
    case QuestionType::kSelect: {
      if (!gold.is_array()) schema_error(index, "SELECT gold must be a URI list");
      std::vector<std::string> uris;
      for (const auto& u : gold) {
        if (!u.is_string()) schema_error(index, "SELECT gold must be a URI list");
        uris.push_back(u.get<std::string>());
      }
      record.gold = std::move(uris);
      break;
    }
    case QuestionType::kCount:
      if (!gold.is_number_integer() || gold.get<std::int64_t>() < 0) {
        schema_error(index, "COUNT gold must be a non-negative integer");
      }
      record.gold = gold.get<std::int64_t>();
      break;
    case QuestionType::kAsk:
      if (!gold.is_boolean()) schema_error(index, "ASK gold must be a boolean");
      record.gold = gold.get<bool>();
      break;
  }
  if (item.contains("gold_interpretation") && !item.at("gold_interpretation").is_null()) {
    record.gold_interpretation =
        parse_hops(item.at("gold_interpretation"), "dataset record " + std::to_string(index));
  }
  return record;
}

json references_to_json(const std::vector<GoldReference>& refs) {
  json array = json::array();
  for (const auto& ref : refs) {
    json item{{"span", ref.span}};
    json uris = json::array();
    for (const auto& u : ref.uris) {
      json entry{{"uri", u.uri}};
      if (u.confidence) entry["confidence"] = *u.confidence;
      uris.push_back(std::move(entry));
    }
    item["uris"] = std::move(uris);
    if (!ref.distractors.empty()) {
      json ds = json::array();
      for (const auto& d : ref.distractors) ds.push_back({{"uri", d.uri}, {"confidence", d.confidence}});
      item["distractors"] = std::move(ds);
    }
    array.push_back(std::move(item));
  }
  return array;
}

}  // namespace

std::vector<QARecord> parse_dataset(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw LoadError(std::string("dataset is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw LoadError("dataset must be a JSON array of records");
  std::vector<QARecord> records;
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    auto record = parse_record(doc[i], i);
    if (!ids.insert(record.id).second) schema_error(i, "duplicate id '" + record.id + "'");
    records.push_back(std::move(record));
  }
  return records;
}

AnnotatedInterpretation parse_interpretation(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw LoadError(std::string("interpretation is not valid JSON: ") + e.what());
  }
  AnnotatedInterpretation out;
  if (doc.is_object() && doc.contains("type")) {
    if (!doc.at("type").is_string()) schema_error("interpretation", "type must be a string");
    try {
      out.type = parse_question_type(doc.at("type").get<std::string>());
    } catch (const ArgumentError& e) {
      schema_error("interpretation", e.what());
    }
  }
  out.interpretation = parse_hops(doc, "interpretation");
  return out;
}

std::vector<QARecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open dataset " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str());
}

std::string dataset_to_json(std::span<const QARecord> records) {
  json doc = json::array();
  for (const auto& r : records) {
    json item{{"id", r.id}, {"question", r.question}, {"type", to_string(r.type)}};
    std::visit([&item](const auto& gold) { item["gold"] = gold; }, r.gold);
    if (r.gold_interpretation) {
      json hops = json::array();
      for (const auto& hop : r.gold_interpretation->hops) {
        hops.push_back({{"entities", references_to_json(hop.entities)},
                        {"properties", references_to_json(hop.properties)},
                        {"classes", references_to_json(hop.classes)}});
      }
      item["gold_interpretation"] = {{"hops", std::move(hops)}};
    }
    doc.push_back(std::move(item));
  }
  return doc.dump(1) + "\n";
}

// --- scoring ---------------------------------------------------------------

QuestionScore score_question(const Answer& predicted, const QARecord& record) {
  if (predicted.type != record.type) return {0, 0};
  switch (record.type) {
    case QuestionType::kCount: {
      const auto gold = std::get<std::int64_t>(record.gold);
      return static_cast<std::int64_t>(predicted.count) == gold ? QuestionScore{1, 1}
                                                               : QuestionScore{0, 0};
    }
    case QuestionType::kAsk:
      return predicted.boolean == std::get<bool>(record.gold) ? QuestionScore{1, 1}
                                                             : QuestionScore{0, 0};
    case QuestionType::kSelect:
      break;
  }
  const auto& gold_list = std::get<std::vector<std::string>>(record.gold);
  const std::set<std::string> gold(gold_list.begin(), gold_list.end());
  std::set<std::string> pred;
  for (const auto& e : predicted.entities) pred.insert(e.uri);
  if (gold.empty() && pred.empty()) return {1, 1};
  if (pred.empty() || gold.empty()) return {0, 0};
  std::size_t hits = 0;
  for (const auto& uri : pred) hits += gold.count(uri);
  return {static_cast<double>(hits) / static_cast<double>(pred.size()),
          static_cast<double>(hits) / static_cast<double>(gold.size())};
}

// --- reports ---------------------------------------------------------------

EvalReport report_from_rows(std::string label, std::vector<QuestionResult> rows) {
  EvalReport report;
  report.label = std::move(label);
  report.per_question = std::move(rows);
  const auto n = report.per_question.size();
  if (n == 0) return report;
  double p = 0, r = 0;
  std::vector<double> times;
  times.reserve(n);
  for (const auto& row : report.per_question) {
    p += row.precision;
    r += row.recall;
    times.push_back(row.runtime_seconds);
  }
  report.macro_precision = p / static_cast<double>(n);
  report.macro_recall = r / static_cast<double>(n);
  const double sum = report.macro_precision + report.macro_recall;
  report.macro_f = sum > 0 ? 2 * report.macro_precision * report.macro_recall / sum : 0.0;

  std::sort(times.begin(), times.end());
  report.runtime.min = times.front();
  report.runtime.max = times.back();
  report.runtime.median =
      n % 2 == 1 ? times[n / 2] : (times[n / 2 - 1] + times[n / 2]) / 2.0;
  double total = 0;
  for (const auto t : times) total += t;
  report.runtime.mean = total / static_cast<double>(n);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  json per_question = json::array();
  for (const auto& row : report.per_question) {
    per_question.push_back({{"id", row.id},
                            {"precision", row.precision},
                            {"recall", row.recall},
                            {"runtime", row.runtime_seconds}});
  }
  json doc{{"label", report.label},
           {"macro",
            {{"p", report.macro_precision}, {"r", report.macro_recall}, {"f", report.macro_f}}},
           {"runtime",
            {{"min", report.runtime.min},
             {"median", report.runtime.median},
             {"mean", report.runtime.mean},
             {"max", report.runtime.max}}},
           {"per_question", std::move(per_question)}};
  return doc.dump(2) + "\n";
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write report " + path.string());
  out << report_to_json(report);
}

// --- modes and presets -----------------------------------------------------

EvalMode parse_eval_mode(std::string_view name) {
  if (name == "auto") return EvalMode::kAuto;
  if (name == "gt") return EvalMode::kGt;
  if (name == "gt-span-plus") return EvalMode::kGtSpanPlus;
  throw ArgumentError("unknown evaluation mode '" + std::string(name) + "'");
}

std::string to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::kAuto: return "auto";
    case EvalMode::kGt: return "gt";
    case EvalMode::kGtSpanPlus: return "gt-span-plus";
  }
  return "auto";
}

namespace {
constexpr std::pair<AblationSetup, std::string_view> kSetupNames[] = {
    {AblationSetup::kGtAll, "gt-all"},
    {AblationSetup::kQuestionType, "question-type"},
    {AblationSetup::kIgnoreClasses, "ignore-classes"},
    {AblationSetup::kClassesSpan, "classes-span"},
    {AblationSetup::kEntitiesSpan, "entities-span"},
    {AblationSetup::kEntitiesParsed, "entities-parsed"},
    {AblationSetup::kPredicatesSpan, "predicates-span"},
    {AblationSetup::kPredicatesParsed, "predicates-parsed"},
};
}  // namespace

AblationSetup parse_ablation_setup(std::string_view name) {
  for (const auto& [setup, setup_name] : kSetupNames) {
    if (setup_name == name) return setup;
  }
  throw ArgumentError("unknown ablation setup '" + std::string(name) + "'");
}

std::string to_string(AblationSetup setup) {
  for (const auto& [s, name] : kSetupNames) {
    if (s == setup) return std::string(name);
  }
  return "gt-all";
}

InterpretationPlan plan_for(EvalMode mode) {
  InterpretationPlan plan;
  switch (mode) {
    case EvalMode::kAuto:
      plan.parsed_type = true;
      plan.entities = plan.properties = plan.classes = ChannelSource::kParsed;
      break;
    case EvalMode::kGt:
      break;
    case EvalMode::kGtSpanPlus:
      plan.entities = plan.properties = plan.classes = ChannelSource::kGtSpanPlus;
      break;
  }
  return plan;
}

InterpretationPlan plan_for(AblationSetup setup) {
  InterpretationPlan plan;
  switch (setup) {
    case AblationSetup::kGtAll: break;
    case AblationSetup::kQuestionType: plan.parsed_type = true; break;
    case AblationSetup::kIgnoreClasses:
      plan.classes = ChannelSource::kNone;
      plan.class_filter = false;
      break;
    case AblationSetup::kClassesSpan: plan.classes = ChannelSource::kGtSpanPlus; break;
    case AblationSetup::kEntitiesSpan: plan.entities = ChannelSource::kGtSpanPlus; break;
    case AblationSetup::kEntitiesParsed: plan.entities = ChannelSource::kParsed; break;
    case AblationSetup::kPredicatesSpan: plan.properties = ChannelSource::kGtSpanPlus; break;
    case AblationSetup::kPredicatesParsed: plan.properties = ChannelSource::kParsed; break;
  }
  return plan;
}

// --- running ---------------------------------------------------------------

namespace {

GoldMode gold_mode(ChannelSource source) {
  return source == ChannelSource::kGtSpanPlus ? GoldMode::kGtSpanPlus : GoldMode::kGt;
}

void overlay(std::vector<CandidateList>& target, ChannelSource source,
             const std::vector<CandidateList>* parsed) {
  if (source == ChannelSource::kNone) {
    target.clear();
  } else if (source == ChannelSource::kParsed) {
    target = parsed != nullptr ? *parsed : std::vector<CandidateList>{};
  }
}

}  // namespace

InterpretedQuestion plan_interpretation(const QARecord& record, const Engine& engine,
                                        const InterpretationPlan& plan,
                                        const EvalOptions& options) {
  if (plan.fully_parsed()) return engine.interpret(record.question, options.limits);
  if (!record.gold_interpretation) {
    throw ConfigurationError("record '" + record.id +
                             "' has no gold interpretation, required by this setup");
  }
  GoldOptions gold_options;
  gold_options.channels = {gold_mode(plan.entities), gold_mode(plan.properties),
                           gold_mode(plan.classes)};
  gold_options.distractor_scale = options.distractor_scale;
  gold_options.catalog = &engine.catalog();
  gold_options.limits = options.limits;
  auto iq = load_gold_interpretation(record.type, *record.gold_interpretation, engine.graph(),
                                     gold_options);

  const bool any_parsed = plan.entities == ChannelSource::kParsed ||
                          plan.properties == ChannelSource::kParsed ||
                          plan.classes == ChannelSource::kParsed;
  std::optional<InterpretedQuestion> parsed;
  if (any_parsed) parsed = engine.interpret(record.question, options.limits);
  for (std::size_t i = 0; i < iq.hops.size(); ++i) {
    const InterpretedHop* p =
        parsed && i < parsed->hops.size() ? &parsed->hops[i] : nullptr;
    overlay(iq.hops[i].entities, plan.entities, p ? &p->entities : nullptr);
    overlay(iq.hops[i].properties, plan.properties, p ? &p->properties : nullptr);
    overlay(iq.hops[i].classes, plan.classes, p ? &p->classes : nullptr);
  }
  if (plan.parsed_type) iq.type = detect_question_type(record.question);
  return iq;
}

EvalReport run_plan(std::span<const QARecord> records, const Engine& engine,
                    const InferenceConfig& config, const InterpretationPlan& plan,
                    const EvalOptions& options, std::string label) {
  if (records.empty()) throw ArgumentError("evaluation needs at least one record");
  InferenceConfig effective = config;
  effective.apply_class_filter = config.apply_class_filter && plan.class_filter;

  std::vector<QuestionResult> rows(records.size());
  auto run_one = [&](std::size_t i) {
    const auto& record = records[i];
    const auto start = std::chrono::steady_clock::now();
    const auto iq = plan_interpretation(record, engine, plan, options);
    const auto answer = engine.answer(iq, effective);
    const auto stop = std::chrono::steady_clock::now();
    const auto score = score_question(answer, record);
    rows[i] = {record.id, score.precision, score.recall,
               std::chrono::duration<double>(stop - start).count()};
  };

  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, records.size());
  if (threads == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) run_one(i);
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < records.size(); i += threads) run_one(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
  }
  return report_from_rows(std::move(label), std::move(rows));
}

EvalReport evaluate(std::span<const QARecord> records, const Engine& engine,
                    const InferenceConfig& config, EvalMode mode, const EvalOptions& options) {
  return run_plan(records, engine, config, plan_for(mode), options, to_string(mode));
}

EvalReport run_ablation(AblationSetup setup, std::span<const QARecord> records,
                        const Engine& engine, const InferenceConfig& config,
                        const EvalOptions& options) {
  return run_plan(records, engine, config, plan_for(setup), options, to_string(setup));
}

}  // namespace qamp
