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
#include "qamp/text.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace qamp::text {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

// U+2019 RIGHT SINGLE QUOTATION MARK
constexpr std::string_view kRightQuote = "\xE2\x80\x99";

// Length of an apostrophe at pos (ASCII or typographic), 0 if none.
std::size_t apostrophe_at(std::string_view s, std::size_t pos) {
  if (pos < s.size() && s[pos] == '\'') return 1;
  if (s.substr(pos, kRightQuote.size()) == kRightQuote) return kRightQuote.size();
  return 0;
}

// Martin Porter's reference implementation, operating on a lowercase
// buffer b with the word occupying b[0..k].
class PorterStemmer {
 public:
  explicit PorterStemmer(std::string word) : b_(std::move(word)) {
    k_ = static_cast<int>(b_.size()) - 1;
  }

  std::string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  bool cons(int i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_consonant(int j) const {
    if (j < 1) return false;
    if (b_[j] != b_[j - 1]) return false;
    return cons(j);
  }

  // cvc(i) is true when b[i-2..i] is consonant-vowel-consonant and the
  // second consonant is not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = b_[i];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(k_ - len + 1, len) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.resize(static_cast<std::size_t>(j_ + 1));
    b_ += s;
    k_ = static_cast<int>(b_.size()) - 1;
  }

  void replace(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  void truncate_to(int k) {
    k_ = k;
    b_.resize(static_cast<std::size_t>(k_ + 1));
  }

  void step1ab() {
    if (b_[k_] == 's') {
      if (ends("sses")) {
        truncate_to(k_ - 2);
      } else if (ends("ies")) {
        set_to("i");
      } else if (b_[k_ - 1] != 's') {
        truncate_to(k_ - 1);
      }
    }
    if (ends("eed")) {
      if (m() > 0) truncate_to(k_ - 1);
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      truncate_to(j_);
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_consonant(k_)) {
        const char ch = b_[k_ - 1];
        if (ch != 'l' && ch != 's' && ch != 'z') truncate_to(k_ - 1);
      } else if (m() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[k_] = 'i';
  }

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  // Applies the first rule whose suffix matches; later rules are not tried
  // even when the measure condition blocks the replacement.
  template <std::size_t N>
  void apply_first(const std::array<Rule, N>& rules) {
    for (const auto& rule : rules) {
      if (ends(rule.suffix)) {
        replace(rule.replacement);
        return;
      }
    }
  }

  void step2() {
    static constexpr std::array<Rule, 21> kRules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"bli", "ble"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},  {"logi", "log"},
    }};
    apply_first(kRules);
  }

  void step3() {
    static constexpr std::array<Rule, 7> kRules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_first(kRules);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible",
        "ant", "ement", "ment", "ent", "ion", "ou",  "ism",
        "ate", "iti",  "ous",  "ive", "ize"};
    for (const auto suffix : kSuffixes) {
      if (!ends(suffix)) continue;
      if (suffix == "ion" && !(j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't'))) {
        continue;
      }
      if (m() > 1) truncate_to(j_);
      return;
    }
  }

  void step5() {
    j_ = k_;
    if (b_[k_] == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) truncate_to(k_ - 1);
    }
    if (b_[k_] == 'l' && double_consonant(k_) && m() > 1) truncate_to(k_ - 1);
  }

  std::string b_;
  int k_ = 0;
  int j_ = 0;
};

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  if (!std::all_of(word.begin(), word.end(),
                   [](char c) { return c >= 'a' && c <= 'z'; })) {
    return std::string(word);
  }
  return PorterStemmer(std::string(word)).run();
}

bool is_stopword(std::string_view lower) {
  static const std::unordered_set<std::string_view> kStopwords{
      "a",     "about", "all",   "also",  "an",    "and",   "any",   "are",
      "as",    "at",    "be",    "been",  "by",    "can",   "count", "did",
      "do",    "does",  "for",   "from",  "give",  "had",   "has",   "have",
      "how",   "i",     "in",    "into",  "is",    "it",    "its",   "list",
      "many",  "me",    "much",  "of",    "on",    "or",    "s",     "show",
      "some",  "tell",  "that",  "the",   "their", "there", "these", "this",
      "those", "to",    "total", "us",    "was",   "were",  "what",  "when",
      "where", "which", "who",   "whom",  "whose", "why",   "with",  "number"};
  return kStopwords.contains(lower);
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i, kRightQuote.size()) == kRightQuote ||
        !is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text.substr(j, kRightQuote.size()) != kRightQuote &&
           is_word_byte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    Token token;
    token.begin = i;
    token.end = j;
    token.lower = to_lower_ascii(text.substr(i, j - i));
    token.stem = porter_stem(token.lower);
    token.stopword = is_stopword(token.lower);
    i = j;
    // A trailing 's marks a possessive and is not a token of its own.
    if (const auto quote = apostrophe_at(text, j); quote > 0) {
      const std::size_t s = j + quote;
      if (s < text.size() && (text[s] == 's' || text[s] == 'S') &&
          (s + 1 == text.size() ||
           !is_word_byte(static_cast<unsigned char>(text[s + 1])))) {
        token.possessive = true;
        i = s + 1;
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::string normalize(std::string_view text) {
  std::string out;
  for (const auto& token : tokenize(text)) {
    if (!out.empty()) out += ' ';
    out += token.lower;
  }
  return out;
}

std::vector<std::string> char_trigrams(std::string_view normalized) {
  std::string padded;
  padded.reserve(normalized.size() + 2);
  padded += ' ';
  padded += normalized;
  padded += ' ';
  std::vector<std::string> grams;
  if (padded.size() < 3) return grams;
  grams.reserve(padded.size() - 2);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    grams.emplace_back(padded.substr(i, 3));
  }
  return grams;
}

std::string label_from_uri(std::string_view uri) {
  if (!uri.empty() && uri.front() == '<' && uri.back() == '>') {
    uri = uri.substr(1, uri.size() - 2);
  }
  std::string_view local = uri;
  if (const auto cut = uri.find_last_of("#/:"); cut != std::string_view::npos &&
                                                cut + 1 < uri.size()) {
    local = uri.substr(cut + 1);
  }
  std::string spaced;
  for (std::size_t i = 0; i < local.size(); ++i) {
    const char c = local[i];
    if (c == '_') {
      spaced += ' ';
      continue;
    }
    const bool upper = c >= 'A' && c <= 'Z';
    const bool prev_lower =
        i > 0 && ((local[i - 1] >= 'a' && local[i - 1] <= 'z') ||
                  (local[i - 1] >= '0' && local[i - 1] <= '9'));
    if (upper && prev_lower) spaced += ' ';
    spaced += c;
  }
  // collapse runs of spaces
  std::string out;
  for (const char c : to_lower_ascii(spaced)) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += c;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace qamp::text
