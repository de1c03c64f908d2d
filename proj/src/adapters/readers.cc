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

#include <algorithm>
#include <charconv>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "bioevents/adapters/source.h"
#include "bioevents/core/error.h"
#include "bioevents/core/text.h"

namespace bioevents::adapters {

namespace {

std::vector<std::filesystem::path> input_files(const std::filesystem::path& path,
                                               std::initializer_list<std::string_view> suffixes) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, "no such file or directory: " + path.string());
  }
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(path)) {
    files.push_back(path);
    return files;
  }
  for (const auto& entry : std::filesystem::recursive_directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    for (auto suffix : suffixes) {
      if (name.ends_with(suffix)) {
        files.push_back(entry.path());
        break;
      }
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

[[noreturn]] void parse_error(const std::filesystem::path& file, int line,
                              const std::string& message) {
  throw Error(ErrorCode::kParse, file.string() + ":" + std::to_string(line) + ": " + message);
}

std::vector<std::string> whitespace_fields(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> fields;
  std::string f;
  while (in >> f) fields.push_back(f);
  return fields;
}

Token make_token(int index, std::string text, int sentence,
                 std::optional<std::string> lemma = std::nullopt,
                 std::optional<std::string> pos = std::nullopt) {
  Token t;
  t.index = index;
  t.lemma = lemma ? std::move(lemma) : std::optional<std::string>(text::lemmatize(text));
  t.text = std::move(text);
  t.sentence_index = sentence;
  t.pos = std::move(pos);
  return t;
}

// Bracket column parser shared by the NE and coreference columns of
// CoNLL-2012: "(X*", "*)", "(X)", and for coreference "(12", "12)", "(12)",
// joined by '|'.
struct OpenSpan {
  std::string key;
  int start;
};

void parse_coref_cell(const std::string& cell, int token,
                      std::map<std::string, std::vector<OpenSpan>>& open,
                      std::map<std::string, CorefChain>& chains,
                      std::vector<std::string>& chain_order) {
  if (cell == "-" || cell == "_") return;
  for (const auto& part : text::split(cell, '|')) {
    if (part.empty()) continue;
    bool opens = part.front() == '(';
    bool closes = part.back() == ')';
    std::string id = part.substr(opens ? 1 : 0);
    if (closes && !id.empty()) id.pop_back();
    if (!chains.count(id)) {
      chains[id].id = id;
      chain_order.push_back(id);
    }
    if (opens && closes) {
      chains[id].mentions.push_back({token, token});
    } else if (opens) {
      open[id].push_back({id, token});
    } else if (closes) {
      auto& stack = open[id];
      if (stack.empty()) continue;
      chains[id].mentions.push_back({stack.back().start, token});
      stack.pop_back();
    }
  }
}

void finish_chains(SourceDocument& doc, std::map<std::string, CorefChain>& chains,
                   const std::vector<std::string>& order) {
  for (const auto& id : order) {
    auto& chain = chains[id];
    std::sort(chain.mentions.begin(), chain.mentions.end());
    if (!chain.mentions.empty()) doc.chains.push_back(std::move(chain));
  }
}

std::string decode_entities(std::string s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  for (const auto& [entity, c] : kEntities) {
    std::size_t pos = 0;
    while ((pos = s.find(entity, pos)) != std::string::npos) {
      s.replace(pos, entity.size(), 1, c);
      ++pos;
    }
  }
  return s;
}

bool is_punct_token(const std::string& t) {
  return std::none_of(t.begin(), t.end(),
                      [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

}  // namespace

std::vector<SourceDocument> read_ontonotes_conll(const std::filesystem::path& path) {
  std::vector<SourceDocument> docs;
  for (const auto& file : input_files(path, {"_conll", ".conll"})) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string());

    SourceDocument doc;
    bool in_doc = false;
    int sentence = 0;
    bool sentence_has_tokens = false;
    std::map<std::string, std::vector<OpenSpan>> open_coref;
    std::map<std::string, CorefChain> chains;
    std::vector<std::string> chain_order;
    std::optional<std::pair<std::string, int>> open_ne;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.starts_with("#begin document")) {
        doc = SourceDocument{};
        doc.verb_only_events = true;
        auto lp = line.find('(');
        auto rp = line.find(')');
        auto part = line.find("part ");
        if (lp == std::string::npos || rp == std::string::npos) {
          parse_error(file, line_no, "malformed #begin document line");
        }
        doc.doc_id = line.substr(lp + 1, rp - lp - 1);
        if (part != std::string::npos) doc.doc_id += "_part" + text::trim(line.substr(part + 5));
        in_doc = true;
        sentence = 0;
        sentence_has_tokens = false;
        open_coref.clear();
        chains.clear();
        chain_order.clear();
        open_ne.reset();
        continue;
      }
      if (line.starts_with("#end document")) {
        if (!in_doc) parse_error(file, line_no, "#end document without #begin");
        finish_chains(doc, chains, chain_order);
        docs.push_back(std::move(doc));
        in_doc = false;
        continue;
      }
      if (text::trim(line).empty()) {
        if (sentence_has_tokens) ++sentence;
        sentence_has_tokens = false;
        continue;
      }
      if (!in_doc) parse_error(file, line_no, "token line outside a document");

      auto f = whitespace_fields(line);
      if (f.size() < 12) {
        parse_error(file, line_no, "expected at least 12 columns, found " + std::to_string(f.size()));
      }
      int index = static_cast<int>(doc.tokens.size());
      std::optional<std::string> lemma;
      if (f[6] != "-") lemma = text::to_lower(f[6]);
      doc.tokens.push_back(make_token(index, f[3], sentence, lemma, f[4]));
      doc.parse_bits.push_back(f[5]);
      sentence_has_tokens = true;
      if (f[6] != "-" && f[7] != "-") doc.event_tokens.push_back(index);

      const std::string& ne = f[10];
      if (ne.front() == '(') {
        std::string type = ne.substr(1);
        while (!type.empty() && (type.back() == '*' || type.back() == ')')) type.pop_back();
        if (ne.back() == ')') {
          doc.named_entities.push_back({{index, index}, type});
        } else {
          open_ne = {type, index};
        }
      } else if (ne.back() == ')' && open_ne) {
        doc.named_entities.push_back({{open_ne->second, index}, open_ne->first});
        open_ne.reset();
      }
      parse_coref_cell(f.back(), index, open_coref, chains, chain_order);
    }
    if (in_doc) parse_error(file, line_no, "document not closed with #end document");
  }
  return docs;
}

std::vector<SourceDocument> read_gum_conllu(const std::filesystem::path& path) {
  std::vector<SourceDocument> docs;
  for (const auto& file : input_files(path, {".conllu"})) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string());

    std::optional<SourceDocument> doc;
    int sentence = 0;
    bool sentence_has_tokens = false;
    std::map<std::string, std::vector<int>> open;
    std::map<std::string, CorefChain> chains;
    std::vector<std::string> chain_order;

    auto flush = [&]() {
      if (!doc) return;
      finish_chains(*doc, chains, chain_order);
      docs.push_back(std::move(*doc));
      doc.reset();
      open.clear();
      chains.clear();
      chain_order.clear();
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.starts_with("# newdoc id")) {
        flush();
        doc = SourceDocument{};
        auto eq = line.find('=');
        doc->doc_id = text::trim(line.substr(eq + 1));
        sentence = 0;
        sentence_has_tokens = false;
        continue;
      }
      if (line.starts_with("#")) continue;
      if (text::trim(line).empty()) {
        if (sentence_has_tokens) ++sentence;
        sentence_has_tokens = false;
        continue;
      }
      auto f = text::split(line, '\t');
      if (f.size() != 10) {
        parse_error(file, line_no, "expected 10 tab-separated columns, found " + std::to_string(f.size()));
      }
      if (f[0].find_first_of("-.") != std::string::npos) continue;  // multiword / empty nodes
      if (!doc) {
        doc = SourceDocument{};
        doc->doc_id = file.stem().string();
      }
      int index = static_cast<int>(doc->tokens.size());
      std::optional<std::string> lemma;
      if (f[2] != "_") lemma = text::to_lower(f[2]);
      std::optional<std::string> pos;
      if (f[4] != "_") pos = f[4];
      doc->tokens.push_back(make_token(index, f[1], sentence, lemma, pos));
      sentence_has_tokens = true;

      for (const auto& misc : text::split(f[9], '|')) {
        if (!misc.starts_with("Entity=")) continue;
        std::string value = misc.substr(7);
        std::size_t i = 0;
        while (i < value.size()) {
          if (value[i] == '(') {
            std::size_t j = i + 1;
            while (j < value.size() && value[j] != '(' && value[j] != ')') ++j;
            std::string body = value.substr(i + 1, j - i - 1);
            auto fields = text::split(body, '-');
            std::string id = fields[0];
            if (!chains.count(id)) {
              chains[id].id = id;
              chain_order.push_back(id);
            }
            if (fields.size() > 1) chains[id].type = text::to_lower(fields[1]);
            if (j < value.size() && value[j] == ')') {
              chains[id].mentions.push_back({index, index});
              i = j + 1;
            } else {
              open[id].push_back(index);
              i = j;
            }
          } else if (std::isalnum(static_cast<unsigned char>(value[i]))) {
            std::size_t j = i;
            while (j < value.size() && value[j] != ')') ++j;
            std::string id = value.substr(i, j - i);
            auto& stack = open[id];
            if (!stack.empty()) {
              chains[id].mentions.push_back({stack.back(), index});
              stack.pop_back();
            }
            i = j + 1;
          } else {
            ++i;
          }
        }
      }
    }
    flush();
  }
  return docs;
}

std::vector<SourceDocument> read_timeml(const std::filesystem::path& path) {
  std::vector<SourceDocument> docs;
  for (const auto& file : input_files(path, {".tml", ".xml"})) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string xml = buf.str();

    SourceDocument doc;
    doc.doc_id = file.stem().string();
    if (auto a = xml.find("<DOCID>"); a != std::string::npos) {
      auto b = xml.find("</DOCID>", a);
      if (b != std::string::npos) doc.doc_id = text::trim(xml.substr(a + 7, b - a - 7));
    }
    std::size_t begin = 0;
    std::size_t end = xml.size();
    if (auto a = xml.find("<TEXT>"); a != std::string::npos) {
      begin = a + 6;
      end = xml.find("</TEXT>", begin);
      if (end == std::string::npos) {
        throw Error(ErrorCode::kParse, file.string() + ": <TEXT> is not closed");
      }
    }

    // Walk the markup, tokenizing each text run on its own so that event
    // boundaries always coincide with token boundaries.
    std::vector<std::string> words;
    std::vector<int> event_tokens;
    std::vector<std::size_t> hard_breaks;  // token counts at </s> or blank lines
    bool in_event = false;
    int event_start = -1;
    std::size_t i = begin;
    auto add_text = [&](std::string_view run) {
      std::string decoded = decode_entities(std::string(run));
      std::istringstream lines(decoded);
      std::string line;
      bool first = true;
      while (std::getline(lines, line)) {
        if (!first && text::trim(line).empty()) hard_breaks.push_back(words.size());
        first = false;
        for (auto& w : text::tokenize(line)) words.push_back(std::move(w));
      }
    };
    while (i < end) {
      std::size_t lt = xml.find('<', i);
      if (lt == std::string::npos || lt >= end) {
        add_text(std::string_view(xml).substr(i, end - i));
        break;
      }
      add_text(std::string_view(xml).substr(i, lt - i));
      std::size_t gt = xml.find('>', lt);
      if (gt == std::string::npos || gt > end) {
        throw Error(ErrorCode::kParse, file.string() + ": unterminated tag");
      }
      std::string tag = xml.substr(lt + 1, gt - lt - 1);
      if (tag.starts_with("EVENT") && !tag.ends_with("/")) {
        if (in_event) throw Error(ErrorCode::kParse, file.string() + ": nested <EVENT>");
        in_event = true;
        event_start = static_cast<int>(words.size());
      } else if (tag == "/EVENT") {
        if (!in_event) throw Error(ErrorCode::kParse, file.string() + ": stray </EVENT>");
        in_event = false;
        for (int t = static_cast<int>(words.size()) - 1; t >= event_start; --t) {
          if (!is_punct_token(words[t])) {
            event_tokens.push_back(t);
            break;
          }
        }
      } else if (tag == "/s") {
        hard_breaks.push_back(words.size());
      }
      i = gt + 1;
    }
    if (in_event) throw Error(ErrorCode::kParse, file.string() + ": <EVENT> is not closed");

    // Sentence split inside each hard-bounded region.
    hard_breaks.push_back(words.size());
    std::sort(hard_breaks.begin(), hard_breaks.end());
    int sentence = 0;
    std::size_t region_start = 0;
    for (std::size_t brk : hard_breaks) {
      if (brk <= region_start) continue;
      std::vector<std::string> region(words.begin() + region_start, words.begin() + brk);
      for (auto& s : text::split_sentences(region)) {
        for (auto& w : s) {
          int index = static_cast<int>(doc.tokens.size());
          doc.tokens.push_back(make_token(index, std::move(w), sentence));
        }
        ++sentence;
      }
      region_start = brk;
    }
    doc.event_tokens = std::move(event_tokens);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<SourceDocument> read_litbank_lines(const std::filesystem::path& path) {
  std::vector<SourceDocument> docs;
  for (const auto& file : input_files(path, {".txt", ".tsv"})) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string());
    std::optional<SourceDocument> doc;
    int sentence = 0;
    std::string line;
    int line_no = 0;
    auto flush = [&]() {
      if (doc && !doc->tokens.empty()) docs.push_back(std::move(*doc));
      doc.reset();
    };
    while (std::getline(in, line)) {
      ++line_no;
      if (line.starts_with("# doc_id")) {
        flush();
        doc = SourceDocument{};
        doc->doc_id = text::trim(line.substr(line.find('=') + 1));
        sentence = 0;
        continue;
      }
      if (line.starts_with("#") || text::trim(line).empty()) continue;
      if (!doc) {
        doc = SourceDocument{};
        doc->doc_id = file.stem().string();
      }
      auto tab = line.find('\t');
      std::string words = tab == std::string::npos ? line : line.substr(0, tab);
      std::string offsets = tab == std::string::npos ? "" : text::trim(line.substr(tab + 1));
      auto tokens = whitespace_fields(words);
      int base = static_cast<int>(doc->tokens.size());
      for (auto& w : tokens) {
        int index = static_cast<int>(doc->tokens.size());
        doc->tokens.push_back(make_token(index, std::move(w), sentence));
      }
      if (!offsets.empty() && offsets != "_") {
        for (const auto& o : text::split(offsets, ',')) {
          std::string field = text::trim(o);
          int off = -1;
          auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), off);
          if (ec != std::errc() || end != field.data() + field.size()) {
            parse_error(file, line_no, "bad event offset '" + o + "'");
          }
          if (off < 0 || off >= static_cast<int>(tokens.size())) {
            parse_error(file, line_no, "event offset " + o + " outside sentence");
          }
          doc->event_tokens.push_back(base + off);
        }
      }
      ++sentence;
    }
    flush();
  }
  return docs;
}

std::vector<std::unique_ptr<ParseNode>> build_parse_trees(const SourceDocument& doc) {
  std::vector<std::unique_ptr<ParseNode>> trees;
  if (doc.parse_bits.size() != doc.tokens.size()) return trees;
  AnnotatedDocument shape;
  shape.tokens = doc.tokens;
  for (const auto& [begin, end] : shape.sentence_ranges()) {
    auto root = std::make_unique<ParseNode>();
    root->label = "ROOT";
    ParseNode* top = root.get();
    bool ok = true;
    for (int t = begin; t < end && ok; ++t) {
      const std::string& bits = doc.parse_bits[t];
      std::size_t i = 0;
      while (i < bits.size() && ok) {
        char c = bits[i];
        if (c == '(') {
          std::size_t j = i + 1;
          while (j < bits.size() && bits[j] != '(' && bits[j] != '*' && bits[j] != ')') ++j;
          std::string label = bits.substr(i + 1, j - i - 1);
          if (auto dash = label.find('-'); dash != std::string::npos && dash > 0) {
            label.erase(dash);
          }
          auto node = std::make_unique<ParseNode>();
          node->label = label;
          node->parent = top;
          ParseNode* raw = node.get();
          top->children.push_back(std::move(node));
          top = raw;
          i = j;
        } else if (c == '*') {
          auto leaf = std::make_unique<ParseNode>();
          leaf->label = doc.tokens[t].pos.value_or("X");
          leaf->token = t;
          leaf->parent = top;
          top->children.push_back(std::move(leaf));
          ++i;
        } else if (c == ')') {
          if (top == root.get()) {
            ok = false;
          } else {
            top = top->parent;
          }
          ++i;
        } else {
          ++i;
        }
      }
    }
    if (!ok || top != root.get()) root.reset();
    trees.push_back(std::move(root));
  }
  return trees;
}

}  // namespace bioevents::adapters
