// Copyright 2026 The kepath Authors.
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

#include "extract/extract.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

#include "common/error.hpp"
#include "common/io.hpp"
#include "common/log.hpp"
#include "common/parallel.hpp"

namespace kepath {
namespace {

const std::set<std::string>& LinkingFillers() {
  static const std::set<std::string> kFillers = {"the", "a", "an", "just", "right", "very", "quite"};
  return kFillers;
}

const std::set<std::string>& TrailingArticles() {
  static const std::set<std::string> kArticles = {"the", "a", "an"};
  return kArticles;
}

std::vector<std::string> TokenTexts(std::string_view phrase) {
  std::vector<std::string> out;
  for (const auto& t : Tokenize(phrase)) out.push_back(FoldText(t.text));
  return out;
}

std::vector<std::string> ReadWordList(const std::filesystem::path& path) {
  std::vector<std::string> words;
  const auto text = ReadFile(path);
  for (auto line : SplitLines(text)) {
    if (IsSkippableLine(line)) continue;
    words.push_back(NormalizeName(line));
  }
  return words;
}

}  // namespace

RelationLexicon::RelationLexicon(std::vector<std::string> relations, std::set<std::string> verbs)
    : relations_(std::move(relations)) {
  if (relations_.empty()) throw Error(ErrorCode::kConfig, "relation lexicon is empty");
  std::set<std::string> seen;
  for (auto& r : relations_) {
    r = NormalizeName(r);
    if (r.empty()) throw Error(ErrorCode::kConfig, "relation lexicon contains an empty entry");
    if (!seen.insert(r).second) {
      throw Error(ErrorCode::kConfig, "duplicate relation '" + r + "' in lexicon");
    }
    relation_tokens_.push_back(TokenTexts(r));
  }
  for (const auto& v : verbs) {
    auto key = NormalizeName(v);
    if (!key.empty()) verbs_.insert(std::move(key));
  }
}

RelationLexicon RelationLexicon::Default() {
  return RelationLexicon({"near", "next to", "close to", "at", "in", "close by"},
                         {"is", "was", "are", "were", "lies", "lie", "sits", "sit", "stands",
                          "stand", "located", "situated"});
}

RelationLexicon RelationLexicon::Load(const std::filesystem::path& relations_path,
                                      const std::filesystem::path& verbs_path) {
  // An empty path keeps the built-in list for that half.
  if (relations_path.empty() && verbs_path.empty()) return Default();
  auto relations = relations_path.empty() ? Default().surfaces() : ReadWordList(relations_path);
  if (verbs_path.empty()) return RelationLexicon(std::move(relations), Default().verbs());
  auto verb_list = ReadWordList(verbs_path);
  return RelationLexicon(std::move(relations), std::set<std::string>(verb_list.begin(), verb_list.end()));
}

std::size_t RelationLexicon::IndexOf(std::string_view surface) const {
  const auto key = NormalizeName(surface);
  auto it = std::find(relations_.begin(), relations_.end(), key);
  return static_cast<std::size_t>(it - relations_.begin());
}

std::vector<EntitySpan> SpotEntities(const std::vector<Token>& tokens, const Gazetteer& gazetteer) {
  std::vector<EntitySpan> spans;
  if (gazetteer.empty()) return spans;
  std::vector<std::string> folded;
  folded.reserve(tokens.size());
  for (const auto& t : tokens) folded.push_back(FoldText(t.text));

  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::size_t max_n = std::min(kMaxEntityTokens, tokens.size() - i);
    const Poi* hit = nullptr;
    std::size_t hit_n = 0;
    for (std::size_t n = max_n; n >= 1 && hit == nullptr; --n) {
      std::string key = folded[i];
      for (std::size_t k = 1; k < n; ++k) {
        key.push_back(' ');
        key += folded[i + k];
      }
      if (const Poi* p = gazetteer.Lookup(key)) {
        hit = p;
        hit_n = n;
      }
    }
    if (hit != nullptr) {
      spans.push_back({i, i + hit_n, hit});
      i += hit_n;
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<RelationTriplet> MatchRelations(const std::vector<Token>& tokens,
                                            const std::vector<EntitySpan>& entities,
                                            const RelationLexicon& lexicon) {
  std::vector<RelationTriplet> out;
  if (entities.size() < 2) return out;

  // Relation candidates tried longest first; equal lengths keep lexicon order.
  std::vector<std::size_t> order(lexicon.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lexicon.tokens(a).size() > lexicon.tokens(b).size();
  });

  auto linking = [&](const std::string& w) {
    return lexicon.verbs().count(w) > 0 || LinkingFillers().count(w) > 0;
  };

  for (std::size_t e = 0; e + 1 < entities.size(); ++e) {
    const auto& left = entities[e];
    const auto& right = entities[e + 1];
    if (left.poi->id == right.poi->id) continue;
    const std::size_t gap_begin = left.end;
    const std::size_t gap_end = right.begin;
    if (gap_end - gap_begin > kMaxGapTokens) continue;

    std::vector<std::string> gap;
    for (std::size_t t = gap_begin; t < gap_end; ++t) gap.push_back(FoldText(tokens[t].text));

    bool matched = false;
    std::size_t relation = 0;
    for (std::size_t p = 0; p < gap.size() && !matched; ++p) {
      for (std::size_t k : order) {
        const auto& rel = lexicon.tokens(k);
        if (p + rel.size() > gap.size()) continue;
        if (!std::equal(rel.begin(), rel.end(), gap.begin() + static_cast<std::ptrdiff_t>(p))) continue;
        const bool tail_ok = std::all_of(gap.begin() + static_cast<std::ptrdiff_t>(p + rel.size()), gap.end(),
                                         [](const std::string& w) { return TrailingArticles().count(w) > 0; });
        if (tail_ok) {
          matched = true;
          relation = k;
          break;
        }
      }
      // Everything before a relation phrase must be a linking word.
      if (!matched && !linking(gap[p])) break;
    }
    if (!matched) continue;
    RelationTriplet t;
    t.poi_a = left.poi->id;
    t.relation_index = relation;
    t.poi_b = right.poi->id;
    t.token_index = left.begin;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<RelationTriplet> ExtractDocument(const Document& doc, const Gazetteer& gazetteer,
                                             const RelationLexicon& lexicon) {
  std::vector<RelationTriplet> out;
  const auto sentences = SegmentSentences(doc.text);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto tokens = Tokenize(sentences[s]);
    const auto entities = SpotEntities(tokens, gazetteer);
    if (entities.size() < 2) continue;
    for (auto& t : MatchRelations(tokens, entities, lexicon)) {
      t.doc_id = doc.id;
      t.sentence_index = s;
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<RelationTriplet> ExtractDocuments(const std::vector<Document>& docs,
                                              const Gazetteer& gazetteer,
                                              const RelationLexicon& lexicon, unsigned threads) {
  std::vector<std::vector<RelationTriplet>> per_doc(docs.size());
  ParallelFor(docs.size(), threads,
              [&](std::size_t i) { per_doc[i] = ExtractDocument(docs[i], gazetteer, lexicon); });
  std::vector<RelationTriplet> all;
  for (auto& v : per_doc) {
    for (auto& t : v) all.push_back(std::move(t));
  }
  auto key = [](const RelationTriplet& t) {
    return std::tie(t.doc_id, t.sentence_index, t.token_index, t.poi_a, t.poi_b, t.relation_index);
  };
  std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::set<std::tuple<std::string, std::size_t, PoiId, PoiId, std::size_t>> seen;
  std::vector<RelationTriplet> unique;
  for (auto& t : all) {
    if (seen.emplace(t.doc_id, t.sentence_index, t.poi_a, t.poi_b, t.relation_index).second) {
      unique.push_back(std::move(t));
    }
  }
  return unique;
}

std::vector<Document> LoadCorpus(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<Document> docs;
  std::set<std::string> ids;
  auto add = [&](Document d, const std::string& where) {
    if (d.text.empty()) {
      LogWarning("skipping document " + where + ": empty text");
      return;
    }
    if (!ids.insert(d.id).second) {
      LogWarning("skipping document " + where + ": duplicate id '" + d.id + "'");
      return;
    }
    docs.push_back(std::move(d));
  };

  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        add(Document{f.filename().string(), ReadFile(f)}, f.string());
      } catch (const Error& e) {
        LogWarning(std::string("skipping document: ") + e.what());
      }
    }
  } else {
    const auto text = ReadFile(path);
    const auto lines = SplitLines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      if (Trim(lines[n]).empty()) continue;
      const std::string where = path.filename().string() + ":" + std::to_string(n + 1);
      try {
        const auto j = nlohmann::json::parse(lines[n]);
        if (!j.is_object() || !j.contains("id") || !j.contains("text") || !j["text"].is_string()) {
          LogWarning("skipping document " + where + ": expected object with id and text");
          continue;
        }
        std::string id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
        add(Document{std::move(id), j["text"].get<std::string>()}, where);
      } catch (const nlohmann::json::exception& e) {
        LogWarning("skipping document " + where + ": " + e.what());
      }
    }
  }
  if (docs.empty()) throw Error(ErrorCode::kIo, "no readable documents in corpus " + path.string());
  return docs;
}

std::vector<RelationTriplet> ExtractCorpus(const std::filesystem::path& corpus_path,
                                           const Gazetteer& gazetteer,
                                           const RelationLexicon& lexicon, unsigned threads) {
  return ExtractDocuments(LoadCorpus(corpus_path), gazetteer, lexicon, threads);
}

std::string TripletsToJsonl(const std::vector<RelationTriplet>& triplets,
                            const RelationLexicon& lexicon, const Gazetteer* gazetteer) {
  std::string out;
  for (const auto& t : triplets) {
    nlohmann::ordered_json j;
    j["poi_a"] = t.poi_a;
    j["relation"] = lexicon.surface(t.relation_index);
    j["poi_b"] = t.poi_b;
    j["doc_id"] = t.doc_id;
    j["sentence_index"] = t.sentence_index;
    if (gazetteer != nullptr) {
      const Poi* a = gazetteer->FindById(t.poi_a);
      const Poi* b = gazetteer->FindById(t.poi_b);
      if (a != nullptr) j["poi_a_name"] = a->canonical_name;
      if (b != nullptr) j["poi_b_name"] = b->canonical_name;
    }
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<RelationTriplet> TripletsFromJsonl(std::string_view jsonl, const RelationLexicon& lexicon) {
  std::vector<RelationTriplet> out;
  const auto lines = SplitLines(jsonl);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (Trim(lines[n]).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(lines[n]);
      RelationTriplet t;
      t.poi_a = j.at("poi_a").get<PoiId>();
      t.poi_b = j.at("poi_b").get<PoiId>();
      const auto rel = j.at("relation").get<std::string>();
      t.relation_index = lexicon.IndexOf(rel);
      if (t.relation_index == lexicon.size()) {
        throw Error(ErrorCode::kParse,
                    "triplets line " + std::to_string(n + 1) + ": relation '" + rel + "' not in lexicon");
      }
      t.doc_id = j.at("doc_id").get<std::string>();
      t.sentence_index = j.at("sentence_index").get<std::size_t>();
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "triplets line " + std::to_string(n + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Poi> ReferencedPois(const std::vector<RelationTriplet>& triplets, const Gazetteer& gazetteer) {
  std::set<PoiId> ids;
  for (const auto& t : triplets) {
    ids.insert(t.poi_a);
    ids.insert(t.poi_b);
  }
  std::vector<Poi> pois;
  for (auto id : ids) {
    const Poi* p = gazetteer.FindById(id);
    if (p == nullptr) throw Error(ErrorCode::kInternal, "triplet references unknown PoI " + std::to_string(id));
    pois.push_back(*p);
  }
  return pois;
}

std::string PoisToTsv(const std::vector<Poi>& pois) {
  std::string out = "# id\tname\tlat\tlon\n";
  for (const auto& p : pois) {
    out += std::to_string(p.id) + '\t' + p.canonical_name + '\t' + FormatDouble(p.coord.lat) + '\t' +
           FormatDouble(p.coord.lon) + '\n';
  }
  return out;
}

PoiTable PoisFromTsv(std::string_view tsv) {
  PoiTable table;
  const auto lines = SplitLines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (IsSkippableLine(lines[n])) continue;
    const auto f = SplitTabs(lines[n]);
    if (f.size() < 4) throw Error(ErrorCode::kParse, "pois line " + std::to_string(n + 1) + ": expected 4 columns");
    Poi p;
    p.id = ParseInt(f[0], "poi id", n + 1);
    p.canonical_name = std::string(f[1]);
    p.coord.lat = ParseDouble(f[2], "lat", n + 1);
    p.coord.lon = ParseDouble(f[3], "lon", n + 1);
    table.emplace(p.id, std::move(p));
  }
  return table;
}

}  // namespace kepath
