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

// qamp: build an index, answer questions, run evaluations and ablations.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qamp/engine.hpp"
#include "qamp/error.hpp"
#include "qamp/eval.hpp"
#include "qamp/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

struct InferenceFlags {
  double threshold = 0.5;
  std::string norm = "alg1";
  bool no_classes = false;
  std::size_t top_entities = qamp::kEntityTopK;
  std::size_t top_properties = qamp::kPropertyTopK;
  std::size_t top_classes = qamp::kClassTopK;

  void attach(CLI::App* cmd) {
    cmd->add_option("--threshold", threshold, "Answer score threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--norm", norm, "Activation normalization")
        ->check(CLI::IsMember({"alg1", "edge-mean"}));
    cmd->add_flag("--no-classes", no_classes, "Disable the answer class filter");
    cmd->add_option("--top-entities", top_entities, "Entity candidates per reference")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--top-properties", top_properties, "Property candidates per reference")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--top-classes", top_classes, "Class candidates per reference")
        ->check(CLI::PositiveNumber);
  }

  qamp::InferenceConfig config() const {
    qamp::InferenceConfig c;
    c.threshold = threshold;
    c.norm = qamp::parse_norm_mode(norm);
    c.apply_class_filter = !no_classes;
    return c;
  }

  qamp::MatchLimits limits() const { return {top_entities, top_properties, top_classes}; }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qamp::LoadError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string answer_json(const std::string& question, const qamp::Answer& answer) {
  nlohmann::json answers = nlohmann::json::array();
  for (const auto& e : answer.entities) answers.push_back({{"uri", e.uri}, {"score", e.score}});
  nlohmann::json doc{{"question", question},
                     {"type", qamp::to_string(answer.type)},
                     {"answers", std::move(answers)}};
  if (answer.type == qamp::QuestionType::kCount) doc["count"] = answer.count;
  if (answer.type == qamp::QuestionType::kAsk) doc["boolean"] = answer.boolean;
  return doc.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised question answering over knowledge graphs", "qamp"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "Encode a graph into an index directory");
  fs::path graph_file, out_dir, vector_file;
  std::string type_property{qamp::kRdfType}, label_property{qamp::kRdfsLabel};
  build->add_option("--graph", graph_file, "N-Triples or TSV graph file")->required();
  build->add_option("--vectors", vector_file, "Word vector file (word v1 ... vd)");
  build->add_option("--out", out_dir, "Index directory")->required();
  build->add_option("--type-property", type_property, "URI of the type property");
  build->add_option("--label-property", label_property, "URI of the label property");

  // ask
  auto* ask = app.add_subcommand("ask", "Answer one question");
  fs::path index_dir, interpretation_file;
  std::string question;
  InferenceFlags ask_flags;
  ask->add_option("--index", index_dir, "Index directory")->required();
  ask->add_option("--interpretation", interpretation_file,
                  "Use an annotated interpretation instead of parsing the question");
  ask_flags.attach(ask);
  ask->add_option("question", question, "Question text")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a dataset");
  fs::path dataset_file, report_file;
  std::string mode = "auto";
  std::size_t threads = 1;
  double delta = 0.5;
  InferenceFlags eval_flags;
  eval->add_option("--index", index_dir, "Index directory")->required();
  eval->add_option("--dataset", dataset_file, "Dataset file")->required();
  eval->add_option("--mode", mode, "Interpretation mode")
      ->check(CLI::IsMember({"auto", "gt", "gt-span-plus"}));
  eval->add_option("--report", report_file, "Report output file")->required();
  eval->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  eval->add_option("--delta", delta, "Distractor scale for gt-span-plus")
      ->check(CLI::Range(0.0, 1.0));
  eval_flags.attach(eval);

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Run one ablation setup");
  std::string setup;
  InferenceFlags ablate_flags;
  ablate->add_option("--setup", setup, "Ablation setup")
      ->required()
      ->check(CLI::IsMember({"gt-all", "question-type", "ignore-classes", "classes-span",
                             "entities-span", "entities-parsed", "predicates-span",
                             "predicates-parsed"}));
  ablate->add_option("--index", index_dir, "Index directory")->required();
  ablate->add_option("--dataset", dataset_file, "Dataset file")->required();
  ablate->add_option("--report", report_file, "Report output file")->required();
  ablate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  ablate->add_option("--delta", delta, "Distractor scale for span setups")
      ->check(CLI::Range(0.0, 1.0));
  ablate_flags.attach(ablate);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a synthetic graph and dataset");
  qamp::SyntheticOptions synthetic;
  generate->add_option("--out", out_dir, "Output directory")->required();
  generate->add_option("--seed", synthetic.seed, "Random seed");
  generate->add_option("--scale", synthetic.scale, "Size multiplier (1 gives about 1k triples)")
      ->check(CLI::PositiveNumber);
  generate->add_option("--questions", synthetic.questions, "Number of questions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "qamp: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (build->parsed()) {
      qamp::GraphConfig config{type_property, label_property};
      std::optional<fs::path> vectors;
      if (!vector_file.empty()) vectors = vector_file;
      qamp::Engine::build_index(graph_file, vectors, out_dir, config);
      const auto engine = qamp::Engine::load_index(out_dir);
      const auto stats = engine.graph().stats();
      std::cout << "indexed " << stats.triples << " triples, " << stats.entities << " entities, "
                << stats.properties << " properties into " << out_dir.string() << "\n";
    } else if (ask->parsed()) {
      const auto engine = qamp::Engine::load_index(index_dir);
      qamp::Answer answer;
      if (!interpretation_file.empty()) {
        const auto annotated = qamp::parse_interpretation(read_file(interpretation_file));
        qamp::GoldOptions options;
        options.channels = {qamp::GoldMode::kAnnotated, qamp::GoldMode::kAnnotated,
                            qamp::GoldMode::kAnnotated};
        const auto type = annotated.type.value_or(qamp::detect_question_type(question));
        const auto iq = qamp::load_gold_interpretation(type, annotated.interpretation,
                                                       engine.graph(), options);
        answer = engine.answer(iq, ask_flags.config());
      } else {
        answer = engine.ask(question, ask_flags.config(), ask_flags.limits());
      }
      std::cout << answer_json(question, answer);
    } else if (eval->parsed() || ablate->parsed()) {
      const auto& flags = eval->parsed() ? eval_flags : ablate_flags;
      const auto engine = qamp::Engine::load_index(index_dir);
      const auto records = qamp::load_dataset(dataset_file);
      qamp::EvalOptions options;
      options.threads = threads;
      options.distractor_scale = delta;
      options.limits = flags.limits();
      const auto report =
          eval->parsed()
              ? qamp::evaluate(records, engine, flags.config(), qamp::parse_eval_mode(mode),
                               options)
              : qamp::run_ablation(qamp::parse_ablation_setup(setup), records, engine,
                                   flags.config(), options);
      qamp::write_report(report, report_file);
      std::cout << report.label << ": P " << report.macro_precision << " R "
                << report.macro_recall << " F " << report.macro_f << " over "
                << report.per_question.size() << " questions, median "
                << report.runtime.median << " s\n";
    } else if (generate->parsed()) {
      const auto data = qamp::generate_synthetic(synthetic);
      qamp::write_synthetic(data, out_dir);
      std::cout << "wrote " << data.triple_count << " triples and " << data.records.size()
                << " questions to " << out_dir.string() << "\n";
    }
  } catch (const qamp::Error& e) {
    std::cerr << "qamp: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "qamp: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
