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

#include "qamp/engine.hpp"

#include "qamp/error.hpp"

namespace qamp {

namespace {
constexpr const char* kVectorFile = "vectors.txt";
}

Engine Engine::from_files(const std::filesystem::path& graph_file,
                          const std::optional<std::filesystem::path>& vector_file,
                          const GraphConfig& config) {
  auto graph = KnowledgeGraph::load_file(graph_file, config);
  auto catalog = TermCatalog::build(graph, vector_file);
  return Engine(std::move(graph), std::move(catalog));
}

void Engine::build_index(const std::filesystem::path& graph_file,
                         const std::optional<std::filesystem::path>& vector_file,
                         const std::filesystem::path& out_dir, const GraphConfig& config) {
  const auto graph = KnowledgeGraph::load_file(graph_file, config);
  // parse before writing anything so a bad vector file leaves no index behind
  if (vector_file) WordVectors::load(*vector_file);
  graph.save_index(out_dir);
  const auto target = out_dir / kVectorFile;
  std::error_code ec;
  std::filesystem::remove(target, ec);
  if (vector_file) {
    std::filesystem::copy_file(*vector_file, target,
                               std::filesystem::copy_options::overwrite_existing);
  }
}

Engine Engine::load_index(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw LoadError("index directory not found: " + dir.string());
  }
  auto graph = KnowledgeGraph::load_index(dir);
  std::optional<std::filesystem::path> vectors;
  if (std::filesystem::exists(dir / kVectorFile)) vectors = dir / kVectorFile;
  auto catalog = TermCatalog::build(graph, vectors);
  return Engine(std::move(graph), std::move(catalog));
}

}  // namespace qamp
