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
#include "qamp/graph_store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qamp/error.hpp"
#include "qamp/text.hpp"

namespace qamp {

struct KnowledgeGraph::Raw {
  struct Statement {
    std::string subject, property, object;
  };
  struct Label {
    std::string term;
    std::string label;
  };
  std::vector<Statement> statements;
  std::vector<Label> labels;
};

namespace {

struct Term {
  std::string value;
  bool literal = false;
};

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw LoadError("line " + std::to_string(line_no_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' ||
                                   line_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  void advance() { ++pos_; }

  Term term() {
    skip_ws();
    if (at_end()) fail("unexpected end of line");
    const char c = peek();
    if (c == '<') return iri();
    if (c == '"') return literal();
    if (c == '_' && line_.substr(pos_, 2) == "_:") return blank();
    fail(std::string("unexpected character '") + c + "'");
  }

  void expect_end_dot() {
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' after object");
    advance();
    skip_ws();
    if (!at_end() && peek() != '#') fail("trailing content after '.'");
  }

 private:
  Term iri() {
    const auto close = line_.find('>', pos_);
    if (close == std::string_view::npos) fail("unterminated IRI");
    std::string value(line_.substr(pos_ + 1, close - pos_ - 1));
    if (value.empty()) fail("empty IRI");
    if (value.find_first_of(" \t") != std::string::npos) fail("whitespace in IRI");
    pos_ = close + 1;
    return {std::move(value), false};
  }

  Term blank() {
    const auto start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') ++pos_;
    if (pos_ - start <= 2) fail("empty blank node label");
    return {std::string(line_.substr(start, pos_ - start)), false};
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  Term literal() {
    advance();  // opening quote
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated literal");
      const char c = peek();
      advance();
      if (c == '"') break;
      if (c != '\\') {
        value += c;
        continue;
      }
      if (at_end()) fail("dangling escape in literal");
      const char e = peek();
      advance();
      switch (e) {
        case 't': value += '\t'; break;
        case 'n': value += '\n'; break;
        case 'r': value += '\r'; break;
        case 'b': value += '\b'; break;
        case 'f': value += '\f'; break;
        case '"': value += '"'; break;
        case '\'': value += '\''; break;
        case '\\': value += '\\'; break;
        case 'u':
        case 'U': {
          const std::size_t digits = e == 'u' ? 4 : 8;
          if (pos_ + digits > line_.size()) fail("truncated unicode escape");
          std::uint32_t cp = 0;
          const auto* first = line_.data() + pos_;
          const auto [ptr, ec] = std::from_chars(first, first + digits, cp, 16);
          if (ec != std::errc() || ptr != first + digits) fail("bad unicode escape");
          append_utf8(value, cp);
          pos_ += digits;
          break;
        }
        default:
          fail(std::string("unknown escape \\") + e);
      }
    }
    // language tag or datatype
    if (!at_end() && peek() == '@') {
      while (!at_end() && peek() != ' ' && peek() != '\t') advance();
    } else if (line_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (at_end() || peek() != '<') fail("expected datatype IRI");
      iri();
    }
    return {std::move(value), true};
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Term tsv_field(std::string_view field, std::size_t line_no) {
  field = trim(field);
  if (field.empty()) {
    throw LoadError("line " + std::to_string(line_no) + ": empty field");
  }
  if (field.front() == '"') {
    LineParser parser(field, line_no);
    return parser.term();
  }
  if (field.front() == '<') {
    if (field.back() != '>' || field.size() < 3) {
      throw LoadError("line " + std::to_string(line_no) + ": malformed IRI");
    }
    field = field.substr(1, field.size() - 2);
  }
  if (field.find_first_of(" \t") != std::string_view::npos) {
    throw LoadError("line " + std::to_string(line_no) + ": whitespace in term");
  }
  return {std::string(field), false};
}

std::vector<std::string> flatten_labels(std::vector<std::vector<std::string>>& per_term,
                                        std::vector<std::uint32_t>& offsets) {
  std::vector<std::string> flat;
  offsets.assign(1, 0);
  for (auto& labels : per_term) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (auto& label : labels) flat.push_back(std::move(label));
    offsets.push_back(static_cast<std::uint32_t>(flat.size()));
  }
  return flat;
}

std::string clean_label(std::string_view label) {
  std::string out;
  for (const char c : text::to_lower_ascii(label)) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (space) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += c;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace

KnowledgeGraph KnowledgeGraph::parse(std::istream& in, const GraphConfig& config) {
  Raw raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;

    Term s, p, o;
    const auto tabs = std::count(content.begin(), content.end(), '\t');
    if (tabs == 2 && content.front() != '<') {
      const auto t1 = content.find('\t');
      const auto t2 = content.find('\t', t1 + 1);
      s = tsv_field(content.substr(0, t1), line_no);
      p = tsv_field(content.substr(t1 + 1, t2 - t1 - 1), line_no);
      auto third = trim(content.substr(t2 + 1));
      if (third.size() > 2 && third.ends_with(" .")) third.remove_suffix(2);
      o = tsv_field(third, line_no);
    } else {
      LineParser parser(content, line_no);
      s = parser.term();
      p = parser.term();
      o = parser.term();
      parser.expect_end_dot();
    }
    if (s.literal) {
      throw LoadError("line " + std::to_string(line_no) + ": literal subject");
    }
    if (p.literal) {
      throw LoadError("line " + std::to_string(line_no) + ": literal predicate");
    }
    if (o.literal) {
      if (p.value == config.label_property) {
        raw.labels.push_back({std::move(s.value), std::move(o.value)});
      }
      continue;
    }
    raw.statements.push_back({std::move(s.value), std::move(p.value), std::move(o.value)});
  }
  return build(std::move(raw), config);
}

KnowledgeGraph KnowledgeGraph::parse(std::string_view text, const GraphConfig& config) {
  std::istringstream in{std::string(text)};
  return parse(in, config);
}

KnowledgeGraph KnowledgeGraph::load_file(const std::filesystem::path& path,
                                         const GraphConfig& config) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open graph file " + path.string());
  return parse(in, config);
}

KnowledgeGraph KnowledgeGraph::build(Raw raw, GraphConfig config) {
  KnowledgeGraph kg;
  kg.config_ = std::move(config);

  std::unordered_set<std::string_view> property_set;
  std::unordered_set<std::string_view> entity_set;
  for (const auto& st : raw.statements) {
    entity_set.insert(st.subject);
    entity_set.insert(st.object);
    property_set.insert(st.property);
  }
  // A labelled term that never occurs in a triple is registered as an
  // entity so that its label is not orphaned.
  for (const auto& label : raw.labels) {
    if (!property_set.contains(label.term)) entity_set.insert(label.term);
  }
  kg.entity_uris_.assign(entity_set.begin(), entity_set.end());
  kg.property_uris_.assign(property_set.begin(), property_set.end());
  std::sort(kg.entity_uris_.begin(), kg.entity_uris_.end());
  std::sort(kg.property_uris_.begin(), kg.property_uris_.end());

  kg.triples_.reserve(raw.statements.size());
  for (const auto& st : raw.statements) {
    kg.triples_.push_back({*kg.find_entity(st.subject), *kg.find_property(st.property),
                           *kg.find_entity(st.object)});
  }
  std::sort(kg.triples_.begin(), kg.triples_.end());
  kg.triples_.erase(std::unique(kg.triples_.begin(), kg.triples_.end()), kg.triples_.end());

  std::vector<std::vector<std::string>> entity_labels(kg.entity_uris_.size());
  std::vector<std::vector<std::string>> property_labels(kg.property_uris_.size());
  for (const auto& label : raw.labels) {
    auto cleaned = clean_label(label.label);
    if (cleaned.empty()) continue;
    if (const auto pid = kg.find_property(label.term)) property_labels[*pid].push_back(cleaned);
    if (const auto eid = kg.find_entity(label.term)) entity_labels[*eid].push_back(cleaned);
  }
  auto fallback = [](std::vector<std::vector<std::string>>& labels,
                     const std::vector<std::string>& uris) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!labels[i].empty()) continue;
      auto derived = text::label_from_uri(uris[i]);
      labels[i].push_back(derived.empty() ? text::to_lower_ascii(uris[i]) : derived);
    }
  };
  fallback(entity_labels, kg.entity_uris_);
  fallback(property_labels, kg.property_uris_);
  kg.entity_labels_flat_ = flatten_labels(entity_labels, kg.entity_label_offsets_);
  kg.property_labels_flat_ = flatten_labels(property_labels, kg.property_label_offsets_);

  kg.finalize();
  return kg;
}

void KnowledgeGraph::finalize() {
  const auto n = entity_uris_.size();

  std::vector<std::uint32_t> degree(n + 1, 0);
  for (const auto& t : triples_) {
    if (t.subject == t.object) continue;
    ++degree[t.subject + 1];
    ++degree[t.object + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) degree[i] += degree[i - 1];
  incidence_offsets_ = degree;
  incidences_.assign(incidence_offsets_.back(), {});
  auto cursor = incidence_offsets_;
  for (const auto& t : triples_) {
    if (t.subject == t.object) continue;
    incidences_[cursor[t.subject]++] = {t.property, t.object};
    incidences_[cursor[t.object]++] = {t.property, t.subject};
  }
  for (std::size_t e = 0; e < n; ++e) {
    auto first = incidences_.begin() + incidence_offsets_[e];
    auto last = incidences_.begin() + incidence_offsets_[e + 1];
    std::sort(first, last);
  }
  // (a,p,b) together with (b,p,a) is one undirected incidence
  std::vector<Incidence> unique;
  unique.reserve(incidences_.size());
  std::vector<std::uint32_t> offsets(n + 1, 0);
  for (std::size_t e = 0; e < n; ++e) {
    auto first = incidences_.begin() + incidence_offsets_[e];
    auto last = incidences_.begin() + incidence_offsets_[e + 1];
    for (auto it = first; it != last; ++it) {
      if (it != first && *it == *(it - 1)) continue;
      unique.push_back(*it);
    }
    offsets[e + 1] = static_cast<std::uint32_t>(unique.size());
  }
  incidences_ = std::move(unique);
  incidence_offsets_ = std::move(offsets);

  types_.clear();
  type_offsets_.assign(n + 1, 0);
  classes_.clear();
  if (const auto type_pid = find_property(config_.type_property)) {
    // triples_ is sorted by subject, so per-subject runs are contiguous
    for (const auto& t : triples_) {
      if (t.property == *type_pid) ++type_offsets_[t.subject + 1];
    }
    for (std::size_t i = 1; i <= n; ++i) type_offsets_[i] += type_offsets_[i - 1];
    types_.resize(type_offsets_.back());
    auto next = type_offsets_;
    for (const auto& t : triples_) {
      if (t.property != *type_pid) continue;
      types_[next[t.subject]++] = t.object;
      classes_.push_back(t.object);
    }
    for (std::size_t e = 0; e < n; ++e) {
      std::sort(types_.begin() + type_offsets_[e], types_.begin() + type_offsets_[e + 1]);
    }
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  }
}

GraphStats KnowledgeGraph::stats() const {
  return {entity_count(), property_count(), triple_count()};
}

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view uri) const {
  const auto it = std::lower_bound(entity_uris_.begin(), entity_uris_.end(), uri);
  if (it == entity_uris_.end() || *it != uri) return std::nullopt;
  return static_cast<EntityId>(it - entity_uris_.begin());
}

std::optional<PropertyId> KnowledgeGraph::find_property(std::string_view uri) const {
  const auto it = std::lower_bound(property_uris_.begin(), property_uris_.end(), uri);
  if (it == property_uris_.end() || *it != uri) return std::nullopt;
  return static_cast<PropertyId>(it - property_uris_.begin());
}

void KnowledgeGraph::check_entity(EntityId id) const {
  if (id >= entity_uris_.size()) {
    throw LookupError("unregistered entity id " + std::to_string(id));
  }
}

const std::string& KnowledgeGraph::entity_uri(EntityId id) const {
  check_entity(id);
  return entity_uris_[id];
}

const std::string& KnowledgeGraph::property_uri(PropertyId id) const {
  if (id >= property_uris_.size()) {
    throw LookupError("unregistered property id " + std::to_string(id));
  }
  return property_uris_[id];
}

std::span<const std::string> KnowledgeGraph::entity_labels(EntityId id) const {
  check_entity(id);
  return std::span(entity_labels_flat_)
      .subspan(entity_label_offsets_[id], entity_label_offsets_[id + 1] - entity_label_offsets_[id]);
}

std::span<const std::string> KnowledgeGraph::property_labels(PropertyId id) const {
  property_uri(id);
  return std::span(property_labels_flat_)
      .subspan(property_label_offsets_[id],
               property_label_offsets_[id + 1] - property_label_offsets_[id]);
}

std::span<const EntityId> KnowledgeGraph::classes_of(EntityId entity) const {
  check_entity(entity);
  return std::span(types_).subspan(type_offsets_[entity],
                                   type_offsets_[entity + 1] - type_offsets_[entity]);
}

bool KnowledgeGraph::is_class(EntityId entity) const {
  return std::binary_search(classes_.begin(), classes_.end(), entity);
}

std::span<const Incidence> KnowledgeGraph::incident(EntityId entity) const {
  check_entity(entity);
  return std::span(incidences_)
      .subspan(incidence_offsets_[entity],
               incidence_offsets_[entity + 1] - incidence_offsets_[entity]);
}

// Index directory layout:
//   graph.meta      key<TAB>value lines (format, type/label property URIs)
//   entities.txt    one URI per line, line number = id
//   properties.txt  likewise
//   triples.tsv     subject<TAB>property<TAB>object ids
//   labels.tsv      E|P<TAB>id<TAB>label
void KnowledgeGraph::save_index(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw LoadError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("graph.meta");
    out << "format\tqamp-graph-1\n"
        << "type_property\t" << config_.type_property << '\n'
        << "label_property\t" << config_.label_property << '\n';
  }
  {
    auto out = open("entities.txt");
    for (const auto& uri : entity_uris_) out << uri << '\n';
  }
  {
    auto out = open("properties.txt");
    for (const auto& uri : property_uris_) out << uri << '\n';
  }
  {
    auto out = open("triples.tsv");
    for (const auto& t : triples_) {
      out << t.subject << '\t' << t.property << '\t' << t.object << '\n';
    }
  }
  {
    auto out = open("labels.tsv");
    for (EntityId e = 0; e < entity_uris_.size(); ++e) {
      for (const auto& label : entity_labels(e)) out << "E\t" << e << '\t' << label << '\n';
    }
    for (PropertyId p = 0; p < property_uris_.size(); ++p) {
      for (const auto& label : property_labels(p)) out << "P\t" << p << '\t' << label << '\n';
    }
  }
}

namespace {

std::uint32_t parse_id(std::string_view field, std::size_t bound, const std::string& file,
                       std::size_t line_no) {
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || value >= bound) {
    throw LoadError(file + " line " + std::to_string(line_no) + ": bad id '" +
                    std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

KnowledgeGraph KnowledgeGraph::load_index(const std::filesystem::path& dir) {
  auto open = [&](const char* name) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) throw LoadError("missing index file " + (dir / name).string());
    return in;
  };
  KnowledgeGraph kg;
  std::string line;
  {
    auto in = open("graph.meta");
    bool format_ok = false;
    while (std::getline(in, line)) {
      const auto fields = split_tabs(line);
      if (fields.size() != 2) continue;
      if (fields[0] == "format") format_ok = fields[1] == "qamp-graph-1";
      if (fields[0] == "type_property") kg.config_.type_property = fields[1];
      if (fields[0] == "label_property") kg.config_.label_property = fields[1];
    }
    if (!format_ok) throw LoadError("unsupported index format in " + dir.string());
  }
  {
    auto in = open("entities.txt");
    while (std::getline(in, line)) kg.entity_uris_.push_back(line);
  }
  {
    auto in = open("properties.txt");
    while (std::getline(in, line)) kg.property_uris_.push_back(line);
  }
  if (!std::is_sorted(kg.entity_uris_.begin(), kg.entity_uris_.end()) ||
      !std::is_sorted(kg.property_uris_.begin(), kg.property_uris_.end())) {
    throw LoadError("index dictionaries are not in canonical order");
  }
  {
    auto in = open("triples.tsv");
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto f = split_tabs(line);
      if (f.size() != 3) throw LoadError("triples.tsv line " + std::to_string(line_no) + ": expected 3 fields");
      kg.triples_.push_back({parse_id(f[0], kg.entity_uris_.size(), "triples.tsv", line_no),
                             parse_id(f[1], kg.property_uris_.size(), "triples.tsv", line_no),
                             parse_id(f[2], kg.entity_uris_.size(), "triples.tsv", line_no)});
    }
    std::sort(kg.triples_.begin(), kg.triples_.end());
    kg.triples_.erase(std::unique(kg.triples_.begin(), kg.triples_.end()), kg.triples_.end());
  }
  {
    std::vector<std::vector<std::string>> entity_labels(kg.entity_uris_.size());
    std::vector<std::vector<std::string>> property_labels(kg.property_uris_.size());
    auto in = open("labels.tsv");
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto f = split_tabs(line);
      if (f.size() != 3 || (f[0] != "E" && f[0] != "P")) {
        throw LoadError("labels.tsv line " + std::to_string(line_no) + ": malformed");
      }
      if (f[0] == "E") {
        entity_labels[parse_id(f[1], entity_labels.size(), "labels.tsv", line_no)]
            .emplace_back(f[2]);
      } else {
        property_labels[parse_id(f[1], property_labels.size(), "labels.tsv", line_no)]
            .emplace_back(f[2]);
      }
    }
    kg.entity_labels_flat_ = flatten_labels(entity_labels, kg.entity_label_offsets_);
    kg.property_labels_flat_ = flatten_labels(property_labels, kg.property_label_offsets_);
  }
  kg.finalize();
  return kg;
}

}  // namespace qamp
