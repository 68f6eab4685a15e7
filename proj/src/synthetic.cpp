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

#include "qamp/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "qamp/error.hpp"
#include "qamp/graph_store.hpp"

namespace qamp {

namespace {

constexpr std::array<std::string_view, 36> kSyllables = {
    "ka", "lor", "ven", "dos", "min", "tal", "ber", "sa", "ri", "mon", "gu", "zel",
    "fa", "nor", "pel", "tis", "var", "quo", "bre", "hal", "dri", "os", "ul", "mek",
    "sto", "wen", "yar", "cal", "bis", "tov", "ler", "ga", "phi", "rud", "sen", "ko"};

constexpr std::array<std::string_view, 5> kCompanySuffixes = {"Labs", "Group", "Dynamics",
                                                              "Holdings", "Foundry"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // modulo mapping keeps the sequence identical across standard libraries
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

std::string capitalize(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 32);
  return word;
}

class NameGenerator {
 public:
  explicit NameGenerator(Rng& rng) : rng_(rng) {}

  std::string word(std::size_t syllables) {
    std::string out;
    for (std::size_t i = 0; i < syllables; ++i) out += kSyllables[rng_.below(kSyllables.size())];
    return capitalize(out);
  }

  template <typename Make>
  std::string unique(Make make) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      auto name = make();
      if (used_.insert(name).second) return name;
    }
    throw ArgumentError("synthetic name space exhausted; use a smaller scale");
  }

 private:
  Rng& rng_;
  std::unordered_set<std::string> used_;
};

struct Node {
  std::string label;
  std::string uri;
};

std::string resource_uri(const std::string& label) {
  std::string local = label;
  std::replace(local.begin(), local.end(), ' ', '_');
  return std::string(kSyntheticResource) + local;
}

std::string ontology_uri(std::string_view local) {
  return std::string(kSyntheticOntology) + std::string(local);
}

struct World {
  std::vector<Node> persons, cities, countries, companies;
  std::vector<std::size_t> born_in, works_for, nationality;  // per person
  std::vector<std::size_t> city_country;                     // per city
  std::vector<std::size_t> company_hq, company_country;      // per company
  std::vector<std::vector<std::size_t>> founders;            // per company
};

std::size_t scaled(double base, double scale, std::size_t floor) {
  return std::max<std::size_t>(floor, static_cast<std::size_t>(std::llround(base * scale)));
}

World make_world(Rng& rng, double scale) {
  World w;
  NameGenerator names(rng);
  const auto n_persons = scaled(130, scale, 4);
  const auto n_cities = scaled(32, scale, 4);
  const auto n_countries = scaled(6, scale, 2);
  const auto n_companies = scaled(44, scale, 2);

  auto add = [](std::vector<Node>& out, std::string label) {
    out.push_back({label, resource_uri(label)});
  };
  for (std::size_t i = 0; i < n_countries; ++i) add(w.countries, names.unique([&] { return names.word(3); }));
  for (std::size_t i = 0; i < n_cities; ++i) add(w.cities, names.unique([&] { return names.word(3) + "a"; }));
  for (std::size_t i = 0; i < n_persons; ++i) {
    add(w.persons, names.unique([&] { return names.word(2) + " " + names.word(2); }));
  }
  for (std::size_t i = 0; i < n_companies; ++i) {
    add(w.companies, names.unique([&] {
      return names.word(3) + " " + std::string(kCompanySuffixes[rng.below(kCompanySuffixes.size())]);
    }));
  }

  // the last quarter of the cities has no births, so some ASK answers are false
  const std::size_t birth_cities = n_cities - std::max<std::size_t>(1, n_cities / 4);
  for (std::size_t c = 0; c < n_cities; ++c) {
    w.city_country.push_back(c < n_countries ? c : rng.below(n_countries));
  }
  for (std::size_t p = 0; p < n_persons; ++p) {
    w.born_in.push_back(rng.below(birth_cities));
    w.works_for.push_back(rng.below(n_companies));
    w.nationality.push_back(rng.below(n_countries));
  }
  w.founders.resize(n_companies);
  for (std::size_t y = 0; y < n_companies; ++y) {
    w.company_hq.push_back(rng.below(n_cities));
    w.company_country.push_back(w.city_country[w.company_hq[y]]);
    const std::size_t count = 1 + rng.below(2);
    while (w.founders[y].size() < count) {
      const auto p = rng.below(n_persons);
      if (std::find(w.founders[y].begin(), w.founders[y].end(), p) == w.founders[y].end()) {
        w.founders[y].push_back(p);
      }
    }
    std::sort(w.founders[y].begin(), w.founders[y].end());
  }
  return w;
}

struct Vocabulary {
  std::string type = std::string(kRdfType);
  std::string label = std::string(kRdfsLabel);
  std::string born_in = ontology_uri("bornIn");
  std::string works_for = ontology_uri("worksFor");
  std::string nationality = ontology_uri("nationality");
  std::string located_in = ontology_uri("locatedIn");
  std::string headquartered_in = ontology_uri("headquarteredIn");
  std::string founded_by = ontology_uri("foundedBy");
  std::string person = ontology_uri("Person");
  std::string city = ontology_uri("City");
  std::string country = ontology_uri("Country");
  std::string company = ontology_uri("Company");
};

class TripleWriter {
 public:
  void link(const std::string& s, const std::string& p, const std::string& o) {
    out_ << '<' << s << "> <" << p << "> <" << o << "> .\n";
    ++count_;
  }
  void label(const std::string& s, const std::string& p, const std::string& text) {
    out_ << '<' << s << "> <" << p << "> \"" << text << "\"@en .\n";
    ++count_;
  }
  std::string text() const { return out_.str(); }
  std::size_t count() const { return count_; }

 private:
  std::ostringstream out_;
  std::size_t count_ = 0;
};

std::pair<std::string, std::size_t> serialize(const World& w, const Vocabulary& v) {
  TripleWriter out;
  const std::pair<const std::string*, const char*> property_labels[] = {
      {&v.born_in, "born in"},       {&v.works_for, "works for"},
      {&v.nationality, "nationality"}, {&v.located_in, "located in"},
      {&v.headquartered_in, "headquartered in"}, {&v.founded_by, "founded by"}};
  for (const auto& [uri, text] : property_labels) out.label(*uri, v.label, text);
  const std::pair<const std::string*, const char*> class_labels[] = {
      {&v.person, "person"}, {&v.city, "city"}, {&v.country, "country"}, {&v.company, "company"}};
  for (const auto& [uri, text] : class_labels) out.label(*uri, v.label, text);

  for (const auto& c : w.countries) {
    out.link(c.uri, v.type, v.country);
    out.label(c.uri, v.label, c.label);
  }
  for (std::size_t i = 0; i < w.cities.size(); ++i) {
    const auto& c = w.cities[i];
    out.link(c.uri, v.type, v.city);
    out.label(c.uri, v.label, c.label);
    out.link(c.uri, v.located_in, w.countries[w.city_country[i]].uri);
  }
  for (std::size_t i = 0; i < w.persons.size(); ++i) {
    const auto& p = w.persons[i];
    out.link(p.uri, v.type, v.person);
    out.label(p.uri, v.label, p.label);
    out.link(p.uri, v.born_in, w.cities[w.born_in[i]].uri);
    out.link(p.uri, v.works_for, w.companies[w.works_for[i]].uri);
    out.link(p.uri, v.nationality, w.countries[w.nationality[i]].uri);
  }
  for (std::size_t i = 0; i < w.companies.size(); ++i) {
    const auto& y = w.companies[i];
    out.link(y.uri, v.type, v.company);
    out.label(y.uri, v.label, y.label);
    out.link(y.uri, v.headquartered_in, w.cities[w.company_hq[i]].uri);
    out.link(y.uri, v.located_in, w.countries[w.company_country[i]].uri);
    for (const auto f : w.founders[i]) out.link(y.uri, v.founded_by, w.persons[f].uri);
  }
  return {out.text(), out.count()};
}

// --- questions -------------------------------------------------------------

GoldReference ref(std::string span, const std::string& uri) {
  GoldReference r;
  r.span = std::move(span);
  r.uris.push_back({uri, std::nullopt});
  return r;
}

GoldHop hop(std::vector<GoldReference> entities, std::vector<GoldReference> properties,
            std::vector<GoldReference> classes = {}) {
  return {std::move(entities), std::move(properties), std::move(classes)};
}

std::vector<std::string> uris_of(const std::vector<Node>& nodes, const std::set<std::size_t>& idx) {
  std::vector<std::string> out;
  for (const auto i : idx) out.push_back(nodes[i].uri);
  std::sort(out.begin(), out.end());
  return out;
}

class QuestionFactory {
 public:
  QuestionFactory(const World& w, const Vocabulary& v, Rng& rng) : w_(w), v_(v), rng_(rng) {
    for (std::size_t p = 0; p < w.persons.size(); ++p) {
      births_[w.born_in[p]].insert(p);
      employees_[w.works_for[p]].insert(p);
    }
    for (std::size_t y = 0; y < w.companies.size(); ++y) {
      hq_[w.company_hq[y]].insert(y);
      for (const auto f : w.founders[y]) founded_[f].insert(y);
    }
  }

  static constexpr std::size_t kTemplates = 10;

  QARecord make(std::size_t template_id, std::size_t ordinal) {
    QARecord r;
    GoldInterpretation gi;
    switch (template_id) {
      case 0: {
        const auto p = rng_.below(w_.persons.size());
        const auto& person = w_.persons[p];
        r.question = "Where was " + person.label + " born?";
        gi.hops.push_back(hop({ref(person.label, person.uri)}, {ref("born", v_.born_in)}));
        r.gold = uris_of(w_.cities, {w_.born_in[p]});
        break;
      }
      case 1: {
        const auto z = rng_.below(w_.countries.size());
        const auto& country = w_.countries[z];
        r.question = "Which cities are located in " + country.label + "?";
        gi.hops.push_back(hop({ref(country.label, country.uri)}, {ref("located in", v_.located_in)},
                              {ref("cities", v_.city)}));
        std::set<std::size_t> cities;
        for (std::size_t c = 0; c < w_.cities.size(); ++c) {
          if (w_.city_country[c] == z) cities.insert(c);
        }
        r.gold = uris_of(w_.cities, cities);
        break;
      }
      case 2: {
        const auto y = rng_.below(w_.companies.size());
        const auto& company = w_.companies[y];
        r.question = "Who founded " + company.label + "?";
        gi.hops.push_back(hop({ref(company.label, company.uri)}, {ref("founded", v_.founded_by)}));
        r.gold = uris_of(w_.persons, {w_.founders[y].begin(), w_.founders[y].end()});
        break;
      }
      case 3: {
        const auto p = rng_.below(w_.persons.size());
        const auto& person = w_.persons[p];
        r.question = "What is the nationality of " + person.label + "?";
        gi.hops.push_back(hop({ref(person.label, person.uri)}, {ref("nationality", v_.nationality)}));
        r.gold = uris_of(w_.countries, {w_.nationality[p]});
        break;
      }
      case 4: {
        const auto c = rng_.below(w_.cities.size());
        const auto& city = w_.cities[c];
        r.type = QuestionType::kCount;
        r.question = "How many people were born in " + city.label + "?";
        gi.hops.push_back(hop({ref(city.label, city.uri)}, {ref("born", v_.born_in)},
                              {ref("people", v_.person)}));
        r.gold = static_cast<std::int64_t>(count_in(births_, c));
        break;
      }
      case 5: {
        // alternate between cities with and without births
        const bool want_births = ordinal % 2 == 0;
        std::size_t c = 0;
        do {
          c = rng_.below(w_.cities.size());
        } while ((count_in(births_, c) > 0) != want_births);
        const auto& city = w_.cities[c];
        r.type = QuestionType::kAsk;
        r.question = "Was anyone born in " + city.label + "?";
        gi.hops.push_back(hop({ref(city.label, city.uri)}, {ref("born", v_.born_in)}));
        r.gold = count_in(births_, c) > 0;
        break;
      }
      case 6: {
        const auto p = rng_.below(w_.persons.size());
        const auto& person = w_.persons[p];
        r.question = "In which country is the birthplace of " + person.label + "?";
        gi.hops.push_back(hop({ref(person.label, person.uri)}, {ref("birthplace", v_.born_in)}));
        gi.hops.push_back(hop({}, {ref("in", v_.located_in)}, {ref("country", v_.country)}));
        r.gold = uris_of(w_.countries, {w_.city_country[w_.born_in[p]]});
        break;
      }
      case 7: {
        std::size_t c = 0;
        std::set<std::size_t> people;
        do {
          c = rng_.below(w_.cities.size());
          people.clear();
          if (auto it = hq_.find(c); it != hq_.end()) {
            for (const auto y : it->second) {
              if (auto e = employees_.find(y); e != employees_.end()) {
                people.insert(e->second.begin(), e->second.end());
              }
            }
          }
        } while (people.empty());
        const auto& city = w_.cities[c];
        r.question = "Who works for a company headquartered in " + city.label + "?";
        gi.hops.push_back(hop({ref(city.label, city.uri)},
                              {ref("headquartered in", v_.headquartered_in)}));
        gi.hops.push_back(hop({}, {ref("works for", v_.works_for)}));
        r.gold = uris_of(w_.persons, people);
        break;
      }
      case 8: {
        std::size_t p = 0;
        do {
          p = rng_.below(w_.persons.size());
        } while (!founded_.contains(p));
        const auto& person = w_.persons[p];
        std::set<std::size_t> people;
        for (const auto y : founded_.at(p)) {
          if (auto e = employees_.find(y); e != employees_.end()) {
            people.insert(e->second.begin(), e->second.end());
          }
        }
        r.type = QuestionType::kCount;
        r.question = "How many people work for the company founded by " + person.label + "?";
        gi.hops.push_back(hop({ref(person.label, person.uri)}, {ref("founded by", v_.founded_by)}));
        gi.hops.push_back(hop({}, {ref("work", v_.works_for)}));
        r.gold = static_cast<std::int64_t>(people.size());
        break;
      }
      default: {
        std::size_t c = 0;
        do {
          c = rng_.below(w_.cities.size());
        } while (!hq_.contains(c));
        const auto& city = w_.cities[c];
        r.question = "Which companies are headquartered in " + city.label + "?";
        gi.hops.push_back(hop({ref(city.label, city.uri)},
                              {ref("headquartered in", v_.headquartered_in)},
                              {ref("companies", v_.company)}));
        r.gold = uris_of(w_.companies, hq_.at(c));
        break;
      }
    }
    r.gold_interpretation = std::move(gi);
    return r;
  }

 private:
  static std::size_t count_in(const std::map<std::size_t, std::set<std::size_t>>& m,
                              std::size_t key) {
    const auto it = m.find(key);
    return it == m.end() ? 0 : it->second.size();
  }

  const World& w_;
  const Vocabulary& v_;
  Rng& rng_;
  std::map<std::size_t, std::set<std::size_t>> births_, employees_, hq_, founded_;
};

}  // namespace

SyntheticData generate_synthetic(const SyntheticOptions& options) {
  if (!(options.scale > 0)) throw ArgumentError("synthetic scale must be positive");
  Rng rng(options.seed);
  const auto world = make_world(rng, options.scale);
  const Vocabulary vocabulary;
  SyntheticData data;
  std::tie(data.ntriples, data.triple_count) = serialize(world, vocabulary);

  QuestionFactory factory(world, vocabulary, rng);
  std::vector<std::size_t> seen(QuestionFactory::kTemplates, 0);
  std::set<std::string> asked;
  for (std::size_t i = 0; data.records.size() < options.questions; ++i) {
    const auto t = data.records.size() % QuestionFactory::kTemplates;
    auto record = factory.make(t, seen[t]);
    // small worlds may run out of distinct questions; accept repeats then
    if (!asked.insert(record.question).second && i < options.questions * 20) continue;
    ++seen[t];
    char id[32];
    std::snprintf(id, sizeof id, "q%03zu", data.records.size() + 1);
    record.id = id;
    data.records.push_back(std::move(record));
  }
  return data;
}

void write_synthetic(const SyntheticData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "graph.nt", std::ios::binary);
    if (!out) throw LoadError("cannot write " + (dir / "graph.nt").string());
    out << data.ntriples;
  }
  std::ofstream out(dir / "dataset.json", std::ios::binary);
  if (!out) throw LoadError("cannot write " + (dir / "dataset.json").string());
  out << dataset_to_json(data.records);
}

}  // namespace qamp
