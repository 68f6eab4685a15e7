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
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "qamp/error.hpp"
#include "qamp/graph_store.hpp"

using qamp::KnowledgeGraph;

namespace {

const char* kGraph = R"(# founders
<http://ex.org/Tesla> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/Company> .
<http://ex.org/SpaceX> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/Company> .
<http://ex.org/Tesla> <http://ex.org/foundedBy> <http://ex.org/Elon_Musk> .
<http://ex.org/SpaceX> <http://ex.org/founder> <http://ex.org/Elon_Musk> .
<http://ex.org/Elon_Musk> <http://ex.org/bornIn> <http://ex.org/Pretoria> .
<http://ex.org/Elon_Musk> <http://ex.org/bornIn> <http://ex.org/Pretoria> .
<http://ex.org/Pretoria> <http://ex.org/twin> <http://ex.org/Pretoria> .

<http://ex.org/Elon_Musk> <http://www.w3.org/2000/01/rdf-schema#label> "Elon Musk"@en .
<http://ex.org/Elon_Musk> <http://www.w3.org/2000/01/rdf-schema#label> "Elon R. \"Musk\""^^<http://www.w3.org/2001/XMLSchema#string> .
<http://ex.org/Elon_Musk> <http://ex.org/age> "54" .
)";

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("parse builds dictionaries in URI order") {
  const auto kg = KnowledgeGraph::parse(std::string_view(kGraph));
  CHECK(kg.entity_count() == 5);  // Company, Elon_Musk, Pretoria, SpaceX, Tesla
  CHECK(kg.triple_count() == 6);  // duplicate bornIn collapsed
  for (std::size_t i = 1; i < kg.entity_count(); ++i) {
    CHECK(kg.entity_uri(static_cast<qamp::EntityId>(i - 1)) <
          kg.entity_uri(static_cast<qamp::EntityId>(i)));
  }
  const auto musk = kg.find_entity("http://ex.org/Elon_Musk");
  REQUIRE(musk);
  CHECK(kg.entity_uri(*musk) == "http://ex.org/Elon_Musk");
  CHECK_FALSE(kg.find_entity("http://ex.org/Nobody"));
  CHECK(kg.find_property("http://ex.org/bornIn"));
  CHECK_THROWS_AS(kg.entity_uri(999), qamp::LookupError);
  CHECK_THROWS_AS(kg.property_uri(999), qamp::LookupError);
}

TEST_CASE("labels prefer explicit values over URI fallback") {
  const auto kg = KnowledgeGraph::parse(std::string_view(kGraph));
  const auto musk = *kg.find_entity("http://ex.org/Elon_Musk");
  const auto labels = kg.entity_labels(musk);
  REQUIRE(labels.size() == 2);
  CHECK(std::find(labels.begin(), labels.end(), "elon musk") != labels.end());
  CHECK(std::find(labels.begin(), labels.end(), "elon r. \"musk\"") != labels.end());
  const auto tesla = *kg.find_entity("http://ex.org/Tesla");
  REQUIRE(kg.entity_labels(tesla).size() == 1);
  CHECK(kg.entity_labels(tesla)[0] == "tesla");
  const auto founded_by = *kg.find_property("http://ex.org/foundedBy");
  CHECK(kg.property_labels(founded_by)[0] == "founded by");
}

TEST_CASE("type index and class set") {
  const auto kg = KnowledgeGraph::parse(std::string_view(kGraph));
  const auto company = *kg.find_entity("http://ex.org/Company");
  const auto tesla = *kg.find_entity("http://ex.org/Tesla");
  const auto musk = *kg.find_entity("http://ex.org/Elon_Musk");
  REQUIRE(kg.classes_of(tesla).size() == 1);
  CHECK(kg.classes_of(tesla)[0] == company);
  CHECK(kg.classes_of(musk).empty());
  CHECK(kg.is_class(company));
  CHECK_FALSE(kg.is_class(tesla));
  CHECK(kg.classes().size() == 1);
}

TEST_CASE("incidence is undirected and drops self loops") {
  const auto kg = KnowledgeGraph::parse(std::string_view(kGraph));
  const auto musk = *kg.find_entity("http://ex.org/Elon_Musk");
  const auto pretoria = *kg.find_entity("http://ex.org/Pretoria");
  const auto inc = kg.incident(musk);
  CHECK(inc.size() == 3);  // foundedBy, founder, bornIn
  CHECK(std::is_sorted(inc.begin(), inc.end(), [](const auto& a, const auto& b) {
    return std::pair(a.property, a.neighbor) < std::pair(b.property, b.neighbor);
  }));
  const auto back = kg.incident(pretoria);
  REQUIRE(back.size() == 1);
  CHECK(back[0].neighbor == musk);
}

TEST_CASE("encoding does not depend on line order") {
  auto lines = lines_of(kGraph);
  const auto reference = KnowledgeGraph::parse(std::string_view(kGraph));
  std::mt19937 rng(11);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    const auto kg = KnowledgeGraph::parse(std::string_view(text));
    CHECK(std::ranges::equal(kg.triples(), reference.triples()));
    for (std::size_t i = 0; i < kg.entity_count(); ++i) {
      const auto id = static_cast<qamp::EntityId>(i);
      CHECK(kg.entity_uri(id) == reference.entity_uri(id));
    }
  }
}

TEST_CASE("tab separated input") {
  const auto kg = KnowledgeGraph::parse(std::string_view("a\tp\tb\nb\tq\tc\n"));
  CHECK(kg.entity_count() == 3);
  CHECK(kg.property_count() == 2);
  CHECK(kg.triple_count() == 2);
}

TEST_CASE("configurable type and label properties") {
  qamp::GraphConfig config{"http://ex.org/isA", "http://ex.org/name"};
  const auto kg = KnowledgeGraph::parse(std::string_view(
      "<http://ex.org/x> <http://ex.org/isA> <http://ex.org/C> .\n"
      "<http://ex.org/x> <http://ex.org/name> \"Ex\" .\n"),
      config);
  const auto x = *kg.find_entity("http://ex.org/x");
  CHECK(kg.classes_of(x).size() == 1);
  CHECK(kg.entity_labels(x)[0] == "ex");
}

TEST_CASE("malformed input names the line") {
  const std::string bad = "<http://a> <http://p> <http://b> .\n<http://a> <http://p> .\n";
  try {
    KnowledgeGraph::parse(std::string_view(bad));
    FAIL("expected LoadError");
  } catch (const qamp::LoadError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(KnowledgeGraph::parse(std::string_view("<http://a> <http://p> <http://b>\n")),
                  qamp::LoadError);
  CHECK_THROWS_AS(KnowledgeGraph::load_file("/nonexistent/graph.nt"), qamp::LoadError);
}

TEST_CASE("index round trip") {
  const auto kg = KnowledgeGraph::parse(std::string_view(kGraph));
  const auto dir = std::filesystem::temp_directory_path() / "qamp_graph_index_test";
  std::filesystem::remove_all(dir);
  kg.save_index(dir);
  const auto loaded = KnowledgeGraph::load_index(dir);
  CHECK(std::ranges::equal(loaded.triples(), kg.triples()));
  CHECK(loaded.entity_count() == kg.entity_count());
  for (std::size_t i = 0; i < kg.entity_count(); ++i) {
    const auto id = static_cast<qamp::EntityId>(i);
    CHECK(loaded.entity_uri(id) == kg.entity_uri(id));
    CHECK(std::ranges::equal(loaded.entity_labels(id), kg.entity_labels(id)));
  }
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(KnowledgeGraph::load_index(dir), qamp::LoadError);
}
