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

#include <filesystem>
#include <optional>
#include <string_view>

#include "qamp/graph_store.hpp"
#include "qamp/inference.hpp"
#include "qamp/question.hpp"
#include "qamp/term_catalog.hpp"

namespace qamp {

// A loaded graph together with its label catalog.
class Engine {
 public:
  Engine(KnowledgeGraph graph, TermCatalog catalog)
      : graph_(std::move(graph)), catalog_(std::move(catalog)) {}

  static Engine from_files(const std::filesystem::path& graph_file,
                           const std::optional<std::filesystem::path>& vector_file,
                           const GraphConfig& config = {});

  // Index directory: the encoded graph plus an optional copy of the vector
  // file; the catalog is rebuilt from the stored labels on load.
  static void build_index(const std::filesystem::path& graph_file,
                          const std::optional<std::filesystem::path>& vector_file,
                          const std::filesystem::path& out_dir, const GraphConfig& config = {});
  static Engine load_index(const std::filesystem::path& dir);

  const KnowledgeGraph& graph() const { return graph_; }
  const TermCatalog& catalog() const { return catalog_; }

  InterpretedQuestion interpret(std::string_view question, const MatchLimits& limits = {}) const {
    return qamp::interpret(question, catalog_, limits);
  }
  Answer answer(const InterpretedQuestion& question, const InferenceConfig& config) const {
    return answer_question(graph_, question, config);
  }
  Answer ask(std::string_view question, const InferenceConfig& config,
             const MatchLimits& limits = {}) const {
    return answer(interpret(question, limits), config);
  }

 private:
  KnowledgeGraph graph_;
  TermCatalog catalog_;
};

}  // namespace qamp
