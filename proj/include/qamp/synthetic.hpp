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

// Deterministic synthetic knowledge graph with a matching question set.
//
// Persons, cities, countries and companies connected by bornIn, worksFor,
// nationality, locatedIn, headquarteredIn and foundedBy. Every question is
// answerable by following edges without regard to their direction, and the
// gold answers are computed by directed traversal of the generated facts.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qamp/eval.hpp"

namespace qamp {

struct SyntheticOptions {
  std::uint64_t seed = 7;
  double scale = 1.0;           // 1.0 gives roughly 1k triples
  std::size_t questions = 30;   // cycles over the question templates
};

struct SyntheticData {
  std::string ntriples;
  std::size_t triple_count = 0;
  std::vector<QARecord> records;
};

inline constexpr std::string_view kSyntheticResource = "http://example.org/qamp/resource/";
inline constexpr std::string_view kSyntheticOntology = "http://example.org/qamp/ontology/";

SyntheticData generate_synthetic(const SyntheticOptions& options = {});

// Writes graph.nt and dataset.json into dir.
void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir);

}  // namespace qamp
