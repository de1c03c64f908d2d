// Copyright 2026 The bioevents Authors.
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

#include "bioevents/core/text.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bioevents::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

const std::set<std::string>& abbreviations() {
  static const std::set<std::string> kAbbrev = {
      "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "mt", "gen", "col",
      "lt", "capt", "rev", "gov", "sen", "rep", "vs", "inc", "ltd", "co",
      "no", "vol", "ed", "eds", "jan", "feb", "mar", "apr", "jun", "jul",
      "aug", "sep", "sept", "oct", "nov", "dec", "ca", "c", "fl", "approx",
      "dept", "univ", "e.g", "i.e", "u.s", "u.k", "a.d", "b.c", "ph.d",
  };
  return kAbbrev;
}

bool keeps_period(const std::string& body) {
  if (body.empty()) return false;
  std::string lower = to_lower(body);
  if (abbreviations().count(lower)) return true;
  // Initials such as "J." and dotted acronyms such as "U.S".
  if (body.size() == 1 && std::isupper(static_cast<unsigned char>(body[0]))) {
    return true;
  }
  return body.find('.') != std::string::npos &&
         std::all_of(body.begin(), body.end(), [](char c) {
           return std::isalpha(static_cast<unsigned char>(c)) || c == '.';
         });
}

bool is_leading_punct(char c) {
  return c == '(' || c == '[' || c == '{' || c == '"' || c == '\'';
}

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' ||
         c == '?' || c == ')' || c == ']' || c == '}' || c == '"' || c == '\'';
}

bool is_closer(const std::string& t) {
  return t == ")" || t == "]" || t == "}" || t == "\"" || t == "'";
}

bool is_terminal(const std::string& t) {
  return t == "." || t == "!" || t == "?";
}

void tokenize_chunk(std::string chunk, std::vector<std::string>& out) {
  std::size_t lead = 0;
  while (lead < chunk.size() && is_leading_punct(chunk[lead])) {
    out.emplace_back(1, chunk[lead]);
    ++lead;
  }
  chunk.erase(0, lead);

  std::vector<std::string> trailing;
  while (!chunk.empty() && is_trailing_punct(chunk.back())) {
    if (chunk.back() == '.' && keeps_period(chunk.substr(0, chunk.size() - 1))) {
      break;
    }
    trailing.emplace_back(1, chunk.back());
    chunk.pop_back();
  }

  if (!chunk.empty()) {
    std::string lower = to_lower(chunk);
    if (lower.size() > 3 && lower.ends_with("n't")) {
      out.push_back(chunk.substr(0, chunk.size() - 3));
      out.push_back(chunk.substr(chunk.size() - 3));
    } else if (lower.size() > 2 && lower.ends_with("'s")) {
      out.push_back(chunk.substr(0, chunk.size() - 2));
      out.push_back(chunk.substr(chunk.size() - 2));
    } else {
      out.push_back(std::move(chunk));
    }
  }
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

const std::unordered_map<std::string, std::string>& irregular_lemmas() {
  static const std::unordered_map<std::string, std::string> kTable = {
      {"is", "be"}, {"am", "be"}, {"are", "be"}, {"was", "be"},
      {"were", "be"}, {"been", "be"}, {"being", "be"}, {"'s", "be"},
      {"has", "have"}, {"had", "have"}, {"having", "have"},
      {"does", "do"}, {"did", "do"}, {"done", "do"}, {"doing", "do"},
      {"went", "go"}, {"gone", "go"}, {"goes", "go"},
      {"wrote", "write"}, {"written", "write"}, {"writing", "write"},
      {"made", "make"}, {"making", "make"},
      {"took", "take"}, {"taken", "take"}, {"taking", "take"},
      {"gave", "give"}, {"given", "give"}, {"giving", "give"},
      {"got", "get"}, {"gotten", "get"}, {"getting", "get"},
      {"became", "become"}, {"becoming", "become"},
      {"began", "begin"}, {"begun", "begin"}, {"beginning", "begin"},
      {"born", "bear"}, {"bore", "bear"},
      {"came", "come"}, {"coming", "come"},
      {"saw", "see"}, {"seen", "see"}, {"seeing", "see"},
      {"said", "say"}, {"says", "say"},
      {"told", "tell"}, {"knew", "know"}, {"known", "know"},
      {"grew", "grow"}, {"grown", "grow"},
      {"won", "win"}, {"winning", "win"},
      {"lost", "lose"}, {"losing", "lose"},
      {"left", "leave"}, {"leaving", "leave"},
      {"led", "lead"}, {"met", "meet"},
      {"ran", "run"}, {"running", "run"},
      {"sold", "sell"}, {"taught", "teach"}, {"thought", "think"},
      {"brought", "bring"}, {"bought", "buy"}, {"found", "find"},
      {"held", "hold"}, {"kept", "keep"}, {"felt", "feel"},
      {"fled", "flee"}, {"fought", "fight"}, {"built", "build"},
      {"rebuilt", "rebuild"}, {"sent", "send"}, {"spent", "spend"},
      {"stood", "stand"}, {"understood", "understand"},
      {"wore", "wear"}, {"worn", "wear"},
      {"chose", "choose"}, {"chosen", "choose"},
      {"drew", "draw"}, {"drawn", "draw"},
      {"flew", "fly"}, {"flown", "fly"},
      {"forgot", "forget"}, {"forgotten", "forget"},
      {"hid", "hide"}, {"hidden", "hide"},
      {"rose", "rise"}, {"risen", "rise"},
      {"sang", "sing"}, {"sung", "sing"},
      {"spoke", "speak"}, {"spoken", "speak"},
      {"stole", "steal"}, {"stolen", "steal"},
      {"struck", "strike"}, {"swore", "swear"}, {"sworn", "swear"},
      {"threw", "throw"}, {"thrown", "throw"},
      {"woke", "wake"}, {"broke", "break"}, {"broken", "break"},
      {"fell", "fall"}, {"fallen", "fall"},
      {"ate", "eat"}, {"eaten", "eat"},
      {"drove", "drive"}, {"driven", "drive"},
      {"rode", "ride"}, {"ridden", "ride"},
      {"shot", "shoot"}, {"shook", "shake"}, {"slept", "sleep"},
      {"sat", "sit"}, {"lain", "lie"}, {"laid", "lay"}, {"paid", "pay"},
      {"heard", "hear"}, {"meant", "mean"}, {"dealt", "deal"},
      {"lent", "lend"}, {"dug", "dig"}, {"fed", "feed"},
      {"forgave", "forgive"}, {"forgiven", "forgive"},
      {"overcame", "overcome"},
      {"undertook", "undertake"}, {"undertaken", "undertake"},
      {"withdrew", "withdraw"}, {"withdrawn", "withdraw"},
      {"rewrote", "rewrite"}, {"rewritten", "rewrite"},
      {"died", "die"}, {"dying", "die"}, {"dies", "die"},
      {"lied", "lie"}, {"tied", "tie"},
      {"agreed", "agree"}, {"freed", "free"},
      {"men", "man"}, {"women", "woman"}, {"children", "child"},
      {"wives", "wife"}, {"feet", "foot"},
  };
  return kTable;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Restores the silent final 'e' dropped before -ed/-ing, when the stem ending
// makes that near-certain in English ("mov" -> "move", "graduat" -> "graduate").
std::string restore_e(std::string stem) {
  auto ends = [&](std::string_view s) { return stem.ends_with(s); };
  std::size_t n = stem.size();
  if (n < 2) return stem;
  char last = stem[n - 1];
  char prev = stem[n - 2];
  bool add = false;
  if (last == 'v' || last == 'c' || last == 'u') {
    add = true;
  } else if (last == 'z' && prev != 'z') {
    add = true;
  } else if (ends("at")) {
    add = !ends("eat") && !ends("oat");
  } else if (ends("id")) {
    add = !ends("oid") && !ends("aid") && !ends("eid");
  } else if (ends("in")) {
    add = !ends("ain") && !ends("oin") && !ends("ein") && !ends("uin") &&
          !ends("ign");
  } else if (ends("am")) {
    add = !ends("eam") && !ends("oam");
  } else if (ends("ib") || ends("um") || ends("os") || ends("as") ||
             ends("ir") || ends("ur") || ends("rg") || ends("dg") ||
             ends("lg") || ends("ang") || ends("eng")) {
    add = true;
  } else if (ends("ot")) {
    add = !ends("oot");
  } else if (ends("ut")) {
    add = !ends("out");
  } else if (last == 's' && (prev == 'r' || prev == 'n' || prev == 'l' ||
                             prev == 'p')) {
    add = true;
  } else if (last == 'l' && !is_vowel(prev) && prev != 'l' && prev != 'r' &&
             prev != 'w') {
    add = true;
  }
  if (add) stem.push_back('e');
  return stem;
}

std::string undouble(std::string stem) {
  std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1])) {
    char c = stem[n - 1];
    if (c == 'l') {
      if (n >= 6 && stem[n - 3] == 'e') stem.pop_back();
    } else if (c != 's' && c != 'z' && c != 'f') {
      stem.pop_back();
    }
  }
  return stem;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      break;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokenize_chunk(std::string(text.substr(start, i - start)), tokens);
  }
  return tokens;
}

std::vector<std::vector<std::string>> split_sentences(
    const std::vector<std::string>& tokens) {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    current.push_back(tokens[i]);
    if (!is_terminal(tokens[i])) continue;
    std::size_t j = i + 1;
    while (j < tokens.size() && is_closer(tokens[j])) {
      current.push_back(tokens[j]);
      ++j;
    }
    i = j - 1;
    bool next_lower = j < tokens.size() && !tokens[j].empty() &&
                      std::islower(static_cast<unsigned char>(tokens[j][0]));
    if (!next_lower) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

std::string lemmatize(std::string_view word) {
  std::string w = to_lower(word);
  const auto& table = irregular_lemmas();
  if (auto it = table.find(w); it != table.end()) return it->second;
  if (w.size() <= 3 || !std::all_of(w.begin(), w.end(), [](char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '-';
      })) {
    return w;
  }
  if (w.ends_with("ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (w.ends_with("ied") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (w.ends_with("eed")) return w;
  if (w.ends_with("ing") && w.size() > 5) {
    std::string stem = w.substr(0, w.size() - 3);
    if (!std::any_of(stem.begin(), stem.end(), is_vowel) && stem.find('y') == std::string::npos) {
      return w;
    }
    std::string undoubled = undouble(stem);
    if (undoubled != stem) return undoubled;
    return restore_e(stem);
  }
  if (w.ends_with("ed") && w.size() > 4) {
    std::string stem = w.substr(0, w.size() - 2);
    std::string undoubled = undouble(stem);
    if (undoubled != stem) return undoubled;
    return restore_e(stem);
  }
  if (w.ends_with("sses")) return w.substr(0, w.size() - 2);
  if (w.ends_with("ches") || w.ends_with("shes") || w.ends_with("xes") ||
      w.ends_with("zes")) {
    return w.substr(0, w.size() - 2);
  }
  if (w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") &&
      !w.ends_with("is")) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

AnnotatedDocument document_from_text(std::string doc_id,
                                     std::string target_entity_name,
                                     std::string_view text) {
  AnnotatedDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.target_entity_name = std::move(target_entity_name);
  int sentence = 0;
  // Line breaks are hard sentence boundaries.
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    for (auto& words : split_sentences(tokenize(line))) {
      for (auto& word : words) {
        Token token;
        token.index = static_cast<int>(doc.tokens.size());
        token.lemma = lemmatize(word);
        token.text = std::move(word);
        token.sentence_index = sentence;
        doc.tokens.push_back(std::move(token));
      }
      ++sentence;
    }
  }
  return doc;
}

std::string detokenize(const AnnotatedDocument& doc) {
  std::string out;
  for (const auto& [begin, end] : doc.sentence_ranges()) {
    for (int i = begin; i < end; ++i) {
      if (i > begin) out += ' ';
      out += doc.tokens[i].text;
    }
    out += '\n';
  }
  return out;
}

}  // namespace bioevents::text
