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

// Benchmark evaluation: datasets with precomputed gold answers, QALD-style
// per-question precision/recall, macro averages and ablation presets.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qamp/engine.hpp"
#include "qamp/inference.hpp"
#include "qamp/question.hpp"

namespace qamp {

// SELECT -> URI list, COUNT -> integer, ASK -> boolean.
using GoldAnswer = std::variant<std::vector<std::string>, std::int64_t, bool>;

struct QARecord {
  std::string id;
  std::string question;
  QuestionType type = QuestionType::kSelect;
  GoldAnswer gold;
  std::optional<GoldInterpretation> gold_interpretation;
};

// JSON array of records; see README for the schema. Throws LoadError with
// the record index on schema violations and on duplicate ids.
std::vector<QARecord> parse_dataset(std::string_view json_text);
std::vector<QARecord> load_dataset(const std::filesystem::path& path);
std::string dataset_to_json(std::span<const QARecord> records);

// A standalone interpretation file: {"type"?: ..., "hops": [...]}, with the
// same hop layout as a record's gold_interpretation.
struct AnnotatedInterpretation {
  std::optional<QuestionType> type;
  GoldInterpretation interpretation;
};
AnnotatedInterpretation parse_interpretation(std::string_view json_text);

struct QuestionScore {
  double precision = 0;
  double recall = 0;

  friend bool operator==(const QuestionScore&, const QuestionScore&) = default;
};

// QALD rules: P = R = 0 when the answer type differs from the gold type,
// when a SELECT answer is empty but the gold set is not, and when a COUNT
// or ASK answer differs from the gold value.
QuestionScore score_question(const Answer& predicted, const QARecord& record);

struct QuestionResult {
  std::string id;
  double precision = 0;
  double recall = 0;
  double runtime_seconds = 0;
};

struct RuntimeStats {
  double min = 0;
  double median = 0;
  double mean = 0;
  double max = 0;
};

struct EvalReport {
  std::string label;  // mode or ablation setup
  std::vector<QuestionResult> per_question;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f = 0;  // 2PR / (P + R) over the macro values
  RuntimeStats runtime;
};

// Recomputes the macro metrics and runtime statistics from the rows.
EvalReport report_from_rows(std::string label, std::vector<QuestionResult> rows);
std::string report_to_json(const EvalReport& report);
void write_report(const EvalReport& report, const std::filesystem::path& path);

enum class EvalMode { kAuto, kGt, kGtSpanPlus };

enum class AblationSetup {
  kGtAll,
  kQuestionType,
  kIgnoreClasses,
  kClassesSpan,
  kEntitiesSpan,
  kEntitiesParsed,
  kPredicatesSpan,
  kPredicatesParsed,
};

EvalMode parse_eval_mode(std::string_view name);
std::string to_string(EvalMode mode);
AblationSetup parse_ablation_setup(std::string_view name);
std::string to_string(AblationSetup setup);

// Where each interpretation channel comes from.
enum class ChannelSource { kGt, kGtSpanPlus, kParsed, kNone };

struct InterpretationPlan {
  bool parsed_type = false;
  ChannelSource entities = ChannelSource::kGt;
  ChannelSource properties = ChannelSource::kGt;
  ChannelSource classes = ChannelSource::kGt;
  bool class_filter = true;

  bool fully_parsed() const {
    return parsed_type && entities == ChannelSource::kParsed &&
           properties == ChannelSource::kParsed && classes == ChannelSource::kParsed;
  }
};

InterpretationPlan plan_for(EvalMode mode);
InterpretationPlan plan_for(AblationSetup setup);

struct EvalOptions {
  std::size_t threads = 1;
  double distractor_scale = 0.5;
  MatchLimits limits;
};

// Interpretation of one record under a plan. Throws ConfigurationError when
// the plan needs a gold interpretation the record lacks.
InterpretedQuestion plan_interpretation(const QARecord& record, const Engine& engine,
                                        const InterpretationPlan& plan,
                                        const EvalOptions& options = {});

EvalReport run_plan(std::span<const QARecord> records, const Engine& engine,
                    const InferenceConfig& config, const InterpretationPlan& plan,
                    const EvalOptions& options = {}, std::string label = {});

EvalReport evaluate(std::span<const QARecord> records, const Engine& engine,
                    const InferenceConfig& config, EvalMode mode,
                    const EvalOptions& options = {});

EvalReport run_ablation(AblationSetup setup, std::span<const QARecord> records,
                        const Engine& engine, const InferenceConfig& config,
                        const EvalOptions& options = {});

}  // namespace qamp
