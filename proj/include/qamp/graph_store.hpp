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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qamp {

using EntityId = std::uint32_t;
using PropertyId = std::uint32_t;

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfsLabel =
    "http://www.w3.org/2000/01/rdf-schema#label";

struct GraphConfig {
  std::string type_property{kRdfType};
  std::string label_property{kRdfsLabel};
};

struct Triple {
  EntityId subject;
  PropertyId property;
  EntityId object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// One undirected incidence of an entity: the edge (entity, property,
// neighbor) exists in the graph in at least one direction.
struct Incidence {
  PropertyId property;
  EntityId neighbor;

  friend auto operator<=>(const Incidence&, const Incidence&) = default;
};

struct GraphStats {
  std::size_t entities = 0;
  std::size_t properties = 0;
  std::size_t triples = 0;
};

// Dictionary-encoded triple store. Ids are dense and assigned in ascending
// URI byte order, so they do not depend on the order of the source lines.
// Immutable after construction.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  // Parses N-Triples-style lines (<s> <p> <o> .) or tab-separated lines
  // (s<TAB>p<TAB>o). Lines starting with '#' and blank lines are skipped.
  // Literal objects are kept only as labels of the configured label
  // property. Throws LoadError naming the line number on malformed input.
  static KnowledgeGraph parse(std::istream& in, const GraphConfig& config = {});
  static KnowledgeGraph parse(std::string_view text, const GraphConfig& config = {});
  static KnowledgeGraph load_file(const std::filesystem::path& path,
                                  const GraphConfig& config = {});

  // Encoded form used by the index directory written by `qamp build`.
  void save_index(const std::filesystem::path& dir) const;
  static KnowledgeGraph load_index(const std::filesystem::path& dir);

  const GraphConfig& config() const { return config_; }
  GraphStats stats() const;
  std::size_t entity_count() const { return entity_uris_.size(); }
  std::size_t property_count() const { return property_uris_.size(); }
  std::size_t triple_count() const { return triples_.size(); }

  std::optional<EntityId> find_entity(std::string_view uri) const;
  std::optional<PropertyId> find_property(std::string_view uri) const;

  // Throw LookupError for unregistered ids.
  const std::string& entity_uri(EntityId id) const;
  const std::string& property_uri(PropertyId id) const;
  // Lowercased, whitespace collapsed.
  std::span<const std::string> entity_labels(EntityId id) const;
  std::span<const std::string> property_labels(PropertyId id) const;

  // Objects of type-property triples whose subject is entity, ascending.
  std::span<const EntityId> classes_of(EntityId entity) const;
  // All entities that occur as the object of a type-property triple.
  std::span<const EntityId> classes() const { return classes_; }
  bool is_class(EntityId entity) const;

  // Sorted (property, neighbor) pairs over both edge directions; self loops
  // are omitted.
  std::span<const Incidence> incident(EntityId entity) const;

  std::span<const Triple> triples() const { return triples_; }

 private:
  struct Raw;
  static KnowledgeGraph build(Raw raw, GraphConfig config);
  void finalize();
  void check_entity(EntityId id) const;

  GraphConfig config_;
  std::vector<std::string> entity_uris_;
  std::vector<std::string> property_uris_;
  std::vector<std::string> entity_labels_flat_;
  std::vector<std::uint32_t> entity_label_offsets_;
  std::vector<std::string> property_labels_flat_;
  std::vector<std::uint32_t> property_label_offsets_;
  std::vector<Triple> triples_;
  std::vector<std::uint32_t> incidence_offsets_;
  std::vector<Incidence> incidences_;
  std::vector<std::uint32_t> type_offsets_;
  std::vector<EntityId> types_;
  std::vector<EntityId> classes_;
};

}  // namespace qamp
