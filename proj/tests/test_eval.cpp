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


#include <algorithm>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "qamp/engine.hpp"
#include "qamp/error.hpp"
#include "qamp/eval.hpp"
#include "qamp/synthetic.hpp"

using namespace qamp;

namespace {

Answer select_answer(std::vector<std::string> uris) {
  Answer a;
  for (auto& u : uris) a.entities.push_back({std::move(u), 1.0});
  a.count = a.entities.size();
  a.boolean = !a.entities.empty();
  return a;
}

QARecord select_record(std::vector<std::string> gold) {
  QARecord r;
  r.id = "q";
  r.gold = std::move(gold);
  return r;
}

struct Synthetic {
  SyntheticData data = generate_synthetic();
  Engine engine{KnowledgeGraph::parse(std::string_view(data.ntriples)),
                TermCatalog::build(KnowledgeGraph::parse(std::string_view(data.ntriples)),
                                   std::optional<WordVectors>{})};
};

}  // namespace

TEST_CASE("dataset parsing and validation") {
  const auto records = parse_dataset(R"([
    {"id": "a", "question": "Who founded Tesla?", "type": "SELECT", "gold": ["http://x/Musk"]},
    {"id": "b", "question": "How many?", "type": "COUNT", "gold": 3,
     "gold_interpretation": {"hops": [{"entities": [{"span": "x", "uris": ["http://x/A"]}],
                                       "properties": [{"span": "p", "uris": [{"uri": "http://x/p", "confidence": 0.5}]}]}]}}
  ])");
  REQUIRE(records.size() == 2);
  CHECK(std::get<std::vector<std::string>>(records[0].gold).size() == 1);
  CHECK_FALSE(records[0].gold_interpretation);
  CHECK(std::get<std::int64_t>(records[1].gold) == 3);
  REQUIRE(records[1].gold_interpretation);
  CHECK(records[1].gold_interpretation->hops[0].properties[0].uris[0].confidence == 0.5);

  CHECK_THROWS_AS(parse_dataset(R"([{"id": "a", "question": "q", "type": "SELECT", "gold": true}])"),
                  LoadError);
  CHECK_THROWS_AS(parse_dataset(R"([{"id": "a", "question": "q", "type": "ASK", "gold": 1}])"),
                  LoadError);
  CHECK_THROWS_AS(parse_dataset(R"([{"id": "a", "question": "q", "type": "COUNT", "gold": -1}])"),
                  LoadError);
  CHECK_THROWS_AS(parse_dataset(R"({"id": "a"})"), LoadError);
  CHECK_THROWS_AS(parse_dataset("[{"), LoadError);
  try {
    parse_dataset(R"([{"id": "a", "question": "q", "type": "ASK", "gold": true},
                      {"id": "a", "question": "q", "type": "ASK", "gold": false}])");
    FAIL("expected duplicate id error");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
  CHECK_THROWS_AS(load_dataset("/nonexistent/dataset.json"), LoadError);
}

TEST_CASE("dataset serialisation round trips") {
  const auto data = generate_synthetic();
  const auto again = parse_dataset(dataset_to_json(data.records));
  CHECK(dataset_to_json(again) == dataset_to_json(data.records));
}

TEST_CASE("qald scoring rules") {
  CHECK(score_question(select_answer({}), select_record({"a"})) == QuestionScore{0, 0});
  CHECK(score_question(select_answer({"a", "b"}), select_record({"a"})) == QuestionScore{0.5, 1.0});
  CHECK(score_question(select_answer({"b", "a"}), select_record({"a"})) == QuestionScore{0.5, 1.0});
  CHECK(score_question(select_answer({"a"}), select_record({"b", "a"})) == QuestionScore{1.0, 0.5});
  CHECK(score_question(select_answer({}), select_record({})) == QuestionScore{1, 1});
  CHECK(score_question(select_answer({"a"}), select_record({})) == QuestionScore{0, 0});

  QARecord count;
  count.type = QuestionType::kCount;
  count.gold = std::int64_t{4};
  Answer predicted;
  predicted.type = QuestionType::kCount;
  predicted.count = 3;
  CHECK(score_question(predicted, count) == QuestionScore{0, 0});
  predicted.count = 4;
  CHECK(score_question(predicted, count) == QuestionScore{1, 1});

  QARecord ask;
  ask.type = QuestionType::kAsk;
  ask.gold = true;
  predicted.type = QuestionType::kAsk;
  predicted.boolean = true;
  CHECK(score_question(predicted, ask) == QuestionScore{1, 1});
  predicted.boolean = false;
  CHECK(score_question(predicted, ask) == QuestionScore{0, 0});

  // type mismatch
  predicted.type = QuestionType::kSelect;
  predicted.boolean = true;
  CHECK(score_question(predicted, ask) == QuestionScore{0, 0});
  CHECK(score_question(select_answer({"a"}), count) == QuestionScore{0, 0});
}

TEST_CASE("macro metrics") {
  const auto report = report_from_rows("t", {{"x", 1, 1, 0.1}, {"y", 0, 0, 0.3}});
  CHECK(report.macro_precision == 0.5);
  CHECK(report.macro_recall == 0.5);
  CHECK(report.macro_f == 0.5);
  CHECK(report.runtime.min == 0.1);
  CHECK(report.runtime.max == 0.3);
  CHECK(report.runtime.median == doctest::Approx(0.2));
  const auto zero = report_from_rows("t", {{"x", 0, 0, 0}});
  CHECK(zero.macro_f == 0.0);

  const auto doc = nlohmann::json::parse(report_to_json(report));
  CHECK(doc["macro"]["f"] == 0.5);
  CHECK(doc["per_question"].size() == 2);
  CHECK(doc["runtime"].contains("median"));
}

TEST_CASE("preset names") {
  for (const char* name : {"gt-all", "question-type", "ignore-classes", "classes-span",
                           "entities-span", "entities-parsed", "predicates-span",
                           "predicates-parsed"}) {
    CHECK(to_string(parse_ablation_setup(name)) == name);
  }
  CHECK_THROWS_AS(parse_ablation_setup("everything"), ArgumentError);
  CHECK(parse_eval_mode("gt-span-plus") == EvalMode::kGtSpanPlus);
  CHECK_THROWS_AS(parse_eval_mode("oracle"), ArgumentError);
  CHECK_FALSE(plan_for(AblationSetup::kIgnoreClasses).class_filter);
  CHECK(plan_for(EvalMode::kAuto).fully_parsed());
}

TEST_CASE("synthetic dataset evaluates perfectly with gold interpretations") {
  Synthetic s;
  CHECK(s.data.records.size() == 30);
  for (const auto& r : s.data.records) CHECK(r.gold_interpretation.has_value());
  const auto gt = evaluate(s.data.records, s.engine, InferenceConfig{}, EvalMode::kGt);
  CHECK(gt.macro_f == 1.0);
  const auto all = run_ablation(AblationSetup::kGtAll, s.data.records, s.engine, InferenceConfig{});
  CHECK(all.macro_precision == 1.0);
  CHECK(all.macro_recall == 1.0);
}

TEST_CASE("ignoring classes keeps recall and loses precision") {
  Synthetic s;
  const auto report =
      run_ablation(AblationSetup::kIgnoreClasses, s.data.records, s.engine, InferenceConfig{});
  bool found = false;
  for (std::size_t i = 0; i < report.per_question.size(); ++i) {
    const auto& q = s.data.records[i].question;
    if (q.rfind("Which cities are located in", 0) != 0) continue;
    CHECK(report.per_question[i].recall == 1.0);
    if (report.per_question[i].precision < 1.0) found = true;
  }
  CHECK(found);
  CHECK(report.macro_recall == 1.0);
  CHECK(report.macro_precision < 1.0);
}

TEST_CASE("evaluation is independent of the thread count") {
  Synthetic s;
  for (const auto setup : {AblationSetup::kEntitiesParsed, AblationSetup::kPredicatesSpan}) {
    EvalOptions one, many;
    many.threads = 4;
    const auto a = run_ablation(setup, s.data.records, s.engine, InferenceConfig{}, one);
    const auto b = run_ablation(setup, s.data.records, s.engine, InferenceConfig{}, many);
    REQUIRE(a.per_question.size() == b.per_question.size());
    for (std::size_t i = 0; i < a.per_question.size(); ++i) {
      CHECK(a.per_question[i].id == b.per_question[i].id);
      CHECK(a.per_question[i].precision == b.per_question[i].precision);
      CHECK(a.per_question[i].recall == b.per_question[i].recall);
    }
    CHECK(a.macro_f == b.macro_f);
  }
}

TEST_CASE("evaluation preconditions") {
  Synthetic s;
  CHECK_THROWS_AS(evaluate({}, s.engine, InferenceConfig{}, EvalMode::kGt), ArgumentError);
  auto records = s.data.records;
  records[0].gold_interpretation.reset();
  CHECK_THROWS_AS(evaluate(records, s.engine, InferenceConfig{}, EvalMode::kGt),
                  ConfigurationError);
  CHECK_NOTHROW(evaluate(records, s.engine, InferenceConfig{}, EvalMode::kAuto));
  // no vector file: property matching falls back to string similarity
  const auto parsed =
      run_ablation(AblationSetup::kPredicatesParsed, s.data.records, s.engine, InferenceConfig{});
  CHECK(parsed.per_question.size() == s.data.records.size());
}

TEST_CASE("synthetic generation is deterministic per seed") {
  const auto a = generate_synthetic({.seed = 11});
  const auto b = generate_synthetic({.seed = 11});
  const auto c = generate_synthetic({.seed = 12});
  CHECK(a.ntriples == b.ntriples);
  CHECK(dataset_to_json(a.records) == dataset_to_json(b.records));
  CHECK(a.ntriples != c.ntriples);
  CHECK(KnowledgeGraph::parse(std::string_view(a.ntriples)).triple_count() > 0);
  CHECK_THROWS_AS(generate_synthetic({.scale = 0}), ArgumentError);
}
