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

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "extract/gazetteer.hpp"
#include "extract/text.hpp"

namespace kepath {

struct Document {
  std::string id;
  std::string text;
};

// Ordered closeness relations (the order fixes each relation's index) plus the
// linking verbs that may precede a relation phrase.
class RelationLexicon {
 public:
  RelationLexicon(std::vector<std::string> relations, std::set<std::string> verbs);

  static RelationLexicon Default();
  static RelationLexicon Load(const std::filesystem::path& relations_path,
                              const std::filesystem::path& verbs_path);

  std::size_t size() const { return relations_.size(); }
  const std::string& surface(std::size_t k) const { return relations_.at(k); }
  const std::vector<std::string>& surfaces() const { return relations_; }
  const std::vector<std::string>& tokens(std::size_t k) const { return relation_tokens_.at(k); }
  const std::set<std::string>& verbs() const { return verbs_; }

  // Index of a surface form, or size() when unknown.
  std::size_t IndexOf(std::string_view surface) const;

 private:
  std::vector<std::string> relations_;
  std::vector<std::vector<std::string>> relation_tokens_;
  std::set<std::string> verbs_;
};

struct EntitySpan {
  std::size_t begin = 0;  // token range [begin, end)
  std::size_t end = 0;
  const Poi* poi = nullptr;
};

struct RelationTriplet {
  PoiId poi_a = 0;
  std::size_t relation_index = 0;
  PoiId poi_b = 0;
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;  // first token of poi_a's span; ordering only

  friend bool operator==(const RelationTriplet&, const RelationTriplet&) = default;
};

// Greedy left-to-right longest match of up to 6-token n-grams; spans never
// overlap.
std::vector<EntitySpan> SpotEntities(const std::vector<Token>& tokens, const Gazetteer& gazetteer);

inline constexpr std::size_t kMaxEntityTokens = 6;
inline constexpr std::size_t kMaxGapTokens = 8;

// Checks every adjacent entity pair. The gap between them must be at most 8
// tokens and read as [linking words] RELATION [article], where linking words
// come from the verb lexicon or a small article/adverb list.
std::vector<RelationTriplet> MatchRelations(const std::vector<Token>& tokens,
                                            const std::vector<EntitySpan>& entities,
                                            const RelationLexicon& lexicon);

std::vector<RelationTriplet> ExtractDocument(const Document& doc, const Gazetteer& gazetteer,
                                             const RelationLexicon& lexicon);

// Output is sorted by (doc_id, sentence_index, token_index) and deduplicated
// only on identical (doc, sentence, pair, relation).
std::vector<RelationTriplet> ExtractDocuments(const std::vector<Document>& docs,
                                              const Gazetteer& gazetteer,
                                              const RelationLexicon& lexicon,
                                              unsigned threads = 1);

// JSONL with "id"/"text" per line, or a directory of .txt files (id = file
// name). Unreadable documents are logged and skipped; throws if none remain.
std::vector<Document> LoadCorpus(const std::filesystem::path& path);

std::vector<RelationTriplet> ExtractCorpus(const std::filesystem::path& corpus_path,
                                           const Gazetteer& gazetteer,
                                           const RelationLexicon& lexicon, unsigned threads = 1);

std::string TripletsToJsonl(const std::vector<RelationTriplet>& triplets,
                            const RelationLexicon& lexicon, const Gazetteer* gazetteer = nullptr);
std::vector<RelationTriplet> TripletsFromJsonl(std::string_view jsonl, const RelationLexicon& lexicon);

// PoIs referenced by the triplets, sorted by id.
std::vector<Poi> ReferencedPois(const std::vector<RelationTriplet>& triplets, const Gazetteer& gazetteer);

using PoiTable = std::map<PoiId, Poi>;

std::string PoisToTsv(const std::vector<Poi>& pois);
PoiTable PoisFromTsv(std::string_view tsv);

}  // namespace kepath
