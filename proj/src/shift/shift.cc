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

#include "bioevents/shift/shift.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bioevents/core/error.h"
#include "bioevents/core/io.h"
#include "bioevents/core/text.h"
#include "bioevents/metrics/metrics.h"
#include "json.hpp"

namespace bioevents::shift {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string exact(double v) { return fmt("%.17g", v); }

std::string event_type(const Token& token, TypeMode mode) {
  if (mode == TypeMode::kSurface) return text::to_lower(token.text);
  if (token.lemma && !token.lemma->empty()) return text::to_lower(*token.lemma);
  return text::to_lower(text::lemmatize(text::to_lower(token.text)));
}

}  // namespace

std::string_view to_string(TypeMode mode) {
  return mode == TypeMode::kLemma ? "lemma" : "surface";
}

TypeMode parse_type_mode(std::string_view s) {
  std::string lower = text::to_lower(s);
  if (lower == "lemma") return TypeMode::kLemma;
  if (lower == "surface") return TypeMode::kSurface;
  throw Error(ErrorCode::kParse, "unknown event type mode '" + std::string(s) + "'");
}

std::string_view to_string(Side side) { return side == Side::kFirst ? "FIRST" : "SECOND"; }

double EventDistribution::average_events() const {
  return n_biographies == 0 ? 0.0 : static_cast<double>(n_events) / n_biographies;
}

std::map<std::string, double> EventDistribution::normalized() const {
  double total = 0.0;
  for (const auto& [type, f] : freq) total += f;
  if (freq.empty() || total <= 0.0) {
    throw Error(ErrorCode::kNotNormalized, "distribution '" + name + "' has no events");
  }
  std::map<std::string, double> out;
  for (const auto& [type, f] : freq) out[type] = f / total;
  return out;
}

EventDistribution group_distribution(std::span<const AnnotatedDocument> docs, std::string name,
                                     TypeMode mode) {
  if (docs.empty()) throw Error(ErrorCode::kEmptyGroup, "group '" + name + "' has no biographies");
  EventDistribution d;
  d.name = std::move(name);
  d.group = docs.front().group;
  for (const auto& doc : docs) {
    if (doc.group != d.group) d.group.reset();
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : docs) {
    for (const auto& e : doc.events) {
      if (e.token_index < 0 || e.token_index >= static_cast<int>(doc.tokens.size())) {
        throw Error(ErrorCode::kValidation,
                    doc.doc_id + ": event token " + std::to_string(e.token_index) + " out of range");
      }
      ++counts[event_type(doc.tokens[e.token_index], mode)];
      ++d.n_events;
    }
  }
  d.n_biographies = docs.size();
  for (const auto& [type, c] : counts) d.freq[type] = static_cast<double>(c) / d.n_biographies;
  d.n_types = d.freq.size();
  return d;
}

std::map<GroupLabel, EventDistribution> group_distributions(
    std::span<const AnnotatedDocument> docs, TypeMode mode) {
  std::map<GroupLabel, std::vector<AnnotatedDocument>> by_group;
  for (const auto& doc : docs) {
    if (doc.group) by_group[*doc.group].push_back(doc);
  }
  std::map<GroupLabel, EventDistribution> out;
  for (const auto& [group, members] : by_group) {
    out.emplace(group, group_distribution(members, group_code(group), mode));
  }
  return out;
}

EventDistribution merge(const EventDistribution& a, const EventDistribution& b, std::string name) {
  EventDistribution d;
  d.name = std::move(name);
  if (a.group == b.group) d.group = a.group;
  d.n_biographies = a.n_biographies + b.n_biographies;
  d.n_events = a.n_events + b.n_events;
  if (d.n_biographies == 0) return d;
  for (const auto* part : {&a, &b}) {
    for (const auto& [type, f] : part->freq) {
      d.freq[type] += f * static_cast<double>(part->n_biographies) / d.n_biographies;
    }
  }
  d.n_types = d.freq.size();
  return d;
}

ShiftResult jsd_shift(const EventDistribution& d1, const EventDistribution& d2) {
  const auto p = d1.normalized();
  const auto q = d2.normalized();
  ShiftResult r;
  r.first = d1.name;
  r.second = d2.name;
  for (const auto& [type, delta] : metrics::jsd_terms(p, q)) {
    Contribution c;
    c.type = type;
    auto ip = p.find(type);
    auto iq = q.find(type);
    c.p1 = ip == p.end() ? 0.0 : ip->second;
    c.p2 = iq == q.end() ? 0.0 : iq->second;
    c.delta = delta;
    c.side = c.p2 > c.p1 ? Side::kSecond : Side::kFirst;
    r.total_jsd += delta;
    r.contributions.push_back(std::move(c));
  }
  std::sort(r.contributions.begin(), r.contributions.end(),
            [](const Contribution& a, const Contribution& b) {
              if (a.delta != b.delta) return a.delta > b.delta;
              return a.type < b.type;
            });
  return r;
}

std::vector<Contribution> top_k_shift(const ShiftResult& result, std::size_t k,
                                      std::optional<Side> side) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  std::vector<Contribution> out;
  for (const auto& c : result.contributions) {
    if (side && c.side != *side) continue;
    out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), [](const Contribution& a, const Contribution& b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    return a.type < b.type;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

OverlapStats overlap_stats(const EventDistribution& d1, const EventDistribution& d2) {
  if (d1.freq.empty() || d2.freq.empty()) {
    throw Error(ErrorCode::kEmptySupport,
                "overlap of '" + d1.name + "' and '" + d2.name + "' needs non-empty supports");
  }
  OverlapStats s;
  for (const auto& [type, f] : d1.freq) s.shared += d2.freq.contains(type) ? 1 : 0;
  s.of_first = static_cast<double>(s.shared) / d1.freq.size();
  s.of_second = static_cast<double>(s.shared) / d2.freq.size();
  return s;
}

std::vector<std::pair<std::string, std::string>> focal_pairs(
    std::string_view focal, const std::vector<std::string>& names) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& n : names) {
    if (n != focal) out.emplace_back(std::string(focal), n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string stem(const ShiftResult& r) { return r.first + "__vs__" + r.second; }

}  // namespace

std::string render_svg(const ShiftResult& result, std::size_t top_k) {
  std::vector<Contribution> rows;
  if (top_k > 0) {
    rows = top_k_shift(result, top_k, Side::kFirst);
    auto second = top_k_shift(result, top_k, Side::kSecond);
    rows.insert(rows.end(), second.begin(), second.end());
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Contribution& a, const Contribution& b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    return a.type < b.type;
  });
  double max_delta = 0.0;
  for (const auto& c : rows) max_delta = std::max(max_delta, c.delta);

  const int width = 800;
  const int row_h = 18;
  const int top = 60;
  const int center = width / 2;
  const int half = 300;
  const int height = top + static_cast<int>(rows.size()) * row_h + 40;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" data-total-jsd=\""
      << exact(result.total_jsd) << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << center << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << xml_escape(result.first) << " vs " << xml_escape(result.second)
      << ": JSD = " << fmt("%.6f", result.total_jsd) << "</text>\n";
  svg << "  <text x=\"" << center - 10 << "\" y=\"44\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"12\">more in "
      << xml_escape(result.first) << "</text>\n";
  svg << "  <text x=\"" << center + 10 << "\" y=\"44\" font-family=\"sans-serif\" font-size=\"12\">"
      << "more in " << xml_escape(result.second) << "</text>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& c = rows[i];
    const double len = max_delta > 0 ? c.delta / max_delta * half : 0.0;
    const int y = top + static_cast<int>(i) * row_h;
    const bool right = c.side == Side::kSecond;
    const double x = right ? center : center - len;
    svg << "  <rect x=\"" << fmt("%.2f", x) << "\" y=\"" << y << "\" width=\"" << fmt("%.2f", len)
        << "\" height=\"" << row_h - 4 << "\" fill=\"" << (right ? "#d98c2b" : "#3b75af")
        << "\" data-type=\"" << xml_escape(c.type) << "\" data-delta=\"" << exact(c.delta)
        << "\"/>\n";
    svg << "  <text x=\"" << fmt("%.2f", right ? center + len + 4 : center - len - 4) << "\" y=\""
        << y + row_h - 7 << "\" font-family=\"sans-serif\" font-size=\"11\""
        << (right ? "" : " text-anchor=\"end\"") << ">" << xml_escape(c.type) << "</text>\n";
  }
  svg << "  <line x1=\"" << center << "\" y1=\"" << top - 4 << "\" x2=\"" << center << "\" y2=\""
      << height - 36 << "\" stroke=\"black\"/>\n";
  svg << "  <text x=\"" << center << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
         "per-type contribution to the divergence (bits)</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

ReportFiles emit_report(std::span<const ShiftResult> results,
                        std::span<const EventDistribution> distributions,
                        const ReportOptions& options) {
  if (options.out_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "no output directory");
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + options.out_dir.string() + ": " + ec.message());

  ReportFiles files;
  for (const auto& r : results) {
    std::ostringstream csv;
    csv << "type,p1,p2,delta,side,rank\n";
    for (std::size_t i = 0; i < r.contributions.size(); ++i) {
      const auto& c = r.contributions[i];
      csv << csv_field(c.type) << ',' << exact(c.p1) << ',' << exact(c.p2) << ',' << exact(c.delta)
          << ',' << to_string(c.side) << ',' << i + 1 << '\n';
    }
    auto csv_path = options.out_dir / (stem(r) + ".csv");
    write_file_atomic(csv_path, csv.str());
    files.csvs.push_back(csv_path);
    auto svg_path = options.out_dir / (stem(r) + ".svg");
    write_file_atomic(svg_path, render_svg(r, options.top_k));
    files.plots.push_back(svg_path);
  }

  std::ostringstream summary;
  summary << "group,biographies,events,avg,types\n";
  for (const auto& d : distributions) {
    summary << csv_field(d.name) << ',' << d.n_biographies << ',' << d.n_events << ','
            << fmt("%.2f", d.average_events()) << ',' << d.n_types << '\n';
  }
  files.summary = options.out_dir / "summary.csv";
  write_file_atomic(files.summary, summary.str());

  std::map<std::string, const EventDistribution*> by_name;
  for (const auto& d : distributions) by_name[d.name] = &d;
  std::ostringstream overlap;
  overlap << "first,second,shared,ratio_of_first,ratio_of_second\n";
  for (const auto& r : results) {
    auto a = by_name.find(r.first);
    auto b = by_name.find(r.second);
    if (a == by_name.end() || b == by_name.end()) continue;
    if (a->second->freq.empty() || b->second->freq.empty()) continue;
    OverlapStats s = overlap_stats(*a->second, *b->second);
    overlap << csv_field(r.first) << ',' << csv_field(r.second) << ',' << s.shared << ','
            << fmt("%.6f", s.of_first) << ',' << fmt("%.6f", s.of_second) << '\n';
  }
  files.overlap = options.out_dir / "overlap.csv";
  write_file_atomic(files.overlap, overlap.str());

  nlohmann::json meta = {{"type_mode", std::string(to_string(options.mode))},
                         {"top_k", options.top_k},
                         {"smoothing", "none"},
                         {"tie_side", "FIRST"},
                         {"pairs", nlohmann::json::array()}};
  for (const auto& r : results) {
    meta["pairs"].push_back({{"first", r.first}, {"second", r.second}, {"total_jsd", r.total_jsd}});
  }
  files.metadata = options.out_dir / "shift_meta.json";
  write_file_atomic(files.metadata, meta.dump(2) + "\n");
  return files;
}

std::vector<Contribution> load_shift_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (text::trim(line) != "type,p1,p2,delta,side,rank") {
    throw Error(ErrorCode::kParse, path.string() + ":1: unexpected header");
  }
  std::vector<Contribution> out;
  for (int n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    auto f = csv_split(line);
    if (f.size() != 6) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(n) + ": expected 6 fields");
    }
    Contribution c;
    c.type = f[0];
    try {
      c.p1 = std::stod(f[1]);
      c.p2 = std::stod(f[2]);
      c.delta = std::stod(f[3]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(n) + ": bad number");
    }
    c.side = f[4] == "SECOND" ? Side::kSecond : Side::kFirst;
    out.push_back(std::move(c));
  }
  return out;
}

double plotted_total(const std::filesystem::path& svg_path) {
  const std::string svg = read_file(svg_path);
  const std::string key = "data-total-jsd=\"";
  auto pos = svg.find(key);
  if (pos == std::string::npos) throw Error(ErrorCode::kParse, svg_path.string() + ": no total");
  return std::stod(svg.substr(pos + key.size()));
}

}  // namespace bioevents::shift
