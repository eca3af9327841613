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

#include "pipeline/fixture.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "common/error.hpp"
#include "common/io.hpp"

namespace kepath {
namespace {

constexpr std::array<const char*, 25> kFirstWords{
    "Amber", "Birch", "Cobalt", "Dune", "Elm", "Falcon", "Granite", "Harbor", "Ivory",
    "Juniper", "Kestrel", "Linden", "Maple", "Nimbus", "Oak", "Pine", "Quarry", "Raven",
    "Slate", "Thistle", "Umber", "Vale", "Willow", "Yarrow", "Zephyr"};
constexpr std::array<const char*, 12> kSecondWords{
    "Tower", "Gate", "Hall", "Market", "Bridge", "Garden",
    "Chapel", "Museum", "Theatre", "Fountain", "Square", "Library"};

struct PlantedPoi {
  std::string name;
  double y = 0.0;
  double x = 0.0;
  bool corridor = false;
};

std::string Cm(double v) { return FormatDouble(std::round(v * 100.0) / 100.0); }

// Relation surface for a mention at the given separation. Bands overlap on
// purpose so every relation sees a spread of distances.
std::string PickRelation(double d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  if (d <= 180.0) return r < 0.6 ? "next to" : (r < 0.9 ? "close to" : "near");
  if (d <= 380.0) return r < 0.5 ? "close to" : "near";
  return r < 0.8 ? "near" : "close by";
}

std::string Mention(const std::string& a, const std::string& rel, const std::string& b, std::size_t variant) {
  switch (variant % 6) {
    case 0: return a + " is " + rel + " " + b + ".";
    case 1: return a + " lies " + rel + " the " + b + ".";
    case 2: return a + " sits right " + rel + " " + b + ".";
    case 3: return "We found that " + a + " is " + rel + " " + b + ".";
    case 4: return "Visitors say " + a + " stands " + rel + " " + b + ".";
    default: return a + " was " + rel + " " + b + ", which surprised us.";
  }
}

std::string Distractor(const std::string& a, const std::string& b, std::size_t variant) {
  switch (variant % 5) {
    case 0: return a + " invested 10 million dollars in " + b + ".";
    case 1: return a + " and " + b + " are both worth a visit.";
    case 2: return "From " + a + " we walked for an hour to " + b + ".";
    case 3: return a + " is far from " + b + ".";
    default: return a + " is north of " + b + ".";
  }
}

}  // namespace

FixtureBundle BuildFixture(const FixtureConfig& config, std::uint64_t seed) {
  if (config.rows < 2 || config.cols < 2) throw Error(ErrorCode::kConfig, "fixture grid needs at least 2x2 vertices");
  if (!(config.spacing_m > 0.0)) throw Error(ErrorCode::kConfig, "fixture spacing must be positive");
  const std::size_t names_available = kFirstWords.size() * kSecondWords.size();
  if (config.corridor_pois + config.scattered_pois > names_available) {
    throw Error(ErrorCode::kConfig, "fixture asks for more PoIs than names available");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FixtureBundle out;
  const std::size_t R = config.rows;
  const std::size_t C = config.cols;
  const double S = config.spacing_m;
  auto vid = [&](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * C + c); };

  out.nodes_tsv = "# id\tlat\tlon\n";
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      out.nodes_tsv += std::to_string(vid(r, c)) + '\t' + FormatDouble(r * S) + '\t' + FormatDouble(c * S) + '\n';
    }
  }
  out.vertex_count = R * C;
  out.edges_tsv = "# src\tdst\n";
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      if (c + 1 < C) {
        out.edges_tsv += std::to_string(vid(r, c)) + '\t' + std::to_string(vid(r, c + 1)) + '\n';
        ++out.edge_count;
      }
      if (r + 1 < R) {
        out.edges_tsv += std::to_string(vid(r, c)) + '\t' + std::to_string(vid(r + 1, c)) + '\n';
        ++out.edge_count;
      }
    }
  }

  // Names.
  std::vector<std::string> names;
  for (const char* a : kFirstWords) {
    for (const char* b : kSecondWords) names.push_back(std::string(a) + " " + b);
  }
  std::shuffle(names.begin(), names.end(), rng);
  std::size_t next_name = 0;

  // Corridor along the main diagonal, one PoI per grid step.
  std::vector<PlantedPoi> pois;
  std::uniform_real_distribution<double> jitter(-15.0, 15.0);
  const std::size_t n_corr = std::min({config.corridor_pois, R, C});
  const std::size_t r0 = (R - n_corr) / 2;
  const std::size_t c0 = (C - n_corr) / 2;
  for (std::size_t k = 0; k < n_corr; ++k) {
    pois.push_back({names[next_name++], (r0 + k) * S + jitter(rng), (c0 + k) * S + jitter(rng), true});
  }
  out.corridor_pois = n_corr;
  const double max_y = (R - 1) * S;
  const double max_x = (C - 1) * S;
  std::size_t attempts = 0;
  while (pois.size() < n_corr + config.scattered_pois && attempts < 100000) {
    ++attempts;
    const double y = std::round(unit(rng) * (R - 1)) * S + jitter(rng);
    const double x = std::round(unit(rng) * (C - 1)) * S + jitter(rng);
    const bool crowded = std::any_of(pois.begin(), pois.end(), [&](const PlantedPoi& p) {
      return std::hypot(p.y - y, p.x - x) < 1.5 * S;
    });
    if (crowded) continue;
    pois.push_back({names[next_name++], std::clamp(y, 0.0, max_y), std::clamp(x, 0.0, max_x), false});
  }
  out.poi_count = pois.size();

  // Gazetteer: planted PoIs first so their row index is their id, then
  // unrelated places and lower-population namesakes.
  std::uniform_int_distribution<std::int64_t> population(1000, 100000);
  out.gazetteer_tsv = "name\tlat\tlon\tpopulation\n";
  std::vector<std::int64_t> pops;
  for (const auto& p : pois) {
    pops.push_back(population(rng));
    out.gazetteer_tsv += p.name + '\t' + Cm(p.y) + '\t' + Cm(p.x) + '\t' + std::to_string(pops.back()) + '\n';
  }
  out.gazetteer_tsv += "Deutsche Bank\t-5000\t-5000\t500000\n";
  out.gazetteer_tsv += "Brazil\t-9000\t-9000\t200000000\n";
  for (std::size_t k = 0; k < std::min<std::size_t>(3, pois.size()); ++k) {
    const auto& p = pois[k * 7 % pois.size()];
    out.gazetteer_tsv += p.name + '\t' + Cm(max_y - p.y) + '\t' + Cm(p.x) + '\t' +
                         std::to_string(pops[k * 7 % pois.size()] / 2) + '\n';
  }

  // Relation mentions between nearby PoIs, each (pair, direction, relation)
  // at most once.
  std::vector<std::string> sentences;
  std::set<std::tuple<std::size_t, std::size_t, std::string>> said;
  std::size_t variant = 0;
  const double reach = 6.0 * S;
  for (std::size_t i = 0; i < pois.size(); ++i) {
    for (std::size_t j = 0; j < pois.size(); ++j) {
      if (i == j) continue;
      const double d = std::hypot(pois[i].y - pois[j].y, pois[i].x - pois[j].x);
      if (d > reach) continue;
      const double p_mention = (pois[i].corridor && pois[j].corridor) ? 0.85 : 0.6;
      if (unit(rng) > p_mention) continue;
      const std::size_t n_rel = unit(rng) < 0.3 ? 2 : 1;
      for (std::size_t m = 0; m < n_rel; ++m) {
        auto rel = PickRelation(d * 100.0 / S, rng);
        if (!said.insert({i, j, rel}).second) continue;
        sentences.push_back(Mention(pois[i].name, rel, pois[j].name, variant++));
        ++out.relation_mentions;
        // "close by" is always accompanied by "near" in the text.
        if (rel == "close by" && said.insert({i, j, "near"}).second) {
          sentences.push_back(Mention(pois[i].name, "near", pois[j].name, variant++));
          ++out.relation_mentions;
        }
      }
    }
  }
  // Two "at" mentions: too few to train on, so the relation is skipped.
  for (std::size_t k = 0; k < 2 && k + 1 < n_corr; ++k) {
    sentences.push_back(pois[k].name + " is at " + pois[k + 1].name + ".");
    ++out.relation_mentions;
  }
  std::uniform_int_distribution<std::size_t> any_poi(0, pois.size() - 1);
  const std::size_t n_distract = sentences.size() / 5 + 1;
  for (std::size_t k = 0; k < n_distract; ++k) {
    std::size_t a = any_poi(rng);
    std::size_t b = any_poi(rng);
    if (a == b) b = (b + 1) % pois.size();
    sentences.push_back(Distractor(pois[a].name, pois[b].name, k));
  }
  sentences.push_back("Deutsche Bank invested 10 million dollars in Brazil.");
  std::shuffle(sentences.begin(), sentences.end(), rng);
  out.sentence_count = sentences.size();

  constexpr std::size_t kSentencesPerDoc = 8;
  for (std::size_t start = 0, doc = 0; start < sentences.size(); start += kSentencesPerDoc, ++doc) {
    std::string text;
    for (std::size_t k = start; k < std::min(sentences.size(), start + kSentencesPerDoc); ++k) {
      if (!text.empty()) text += ' ';
      text += sentences[k];
    }
    char id[32];
    std::snprintf(id, sizeof id, "blog-%04zu", doc);
    nlohmann::ordered_json j;
    j["id"] = id;
    j["text"] = text;
    out.corpus_jsonl += j.dump() + '\n';
  }

  // Photos: tight clusters at PoIs, heavier on the corridor, over a uniform
  // background.
  std::normal_distribution<double> spread(0.0, config.photo_sigma_m);
  out.photos_tsv = "# id\tlat\tlon\n";
  auto add_photo = [&](double y, double x) {
    char id[32];
    std::snprintf(id, sizeof id, "ph%06zu", out.photo_count++);
    out.photos_tsv += std::string(id) + '\t' + Cm(y) + '\t' + Cm(x) + '\n';
  };
  for (const auto& p : pois) {
    const std::size_t n = p.corridor ? 60 : 25;
    for (std::size_t k = 0; k < n; ++k) add_photo(p.y + spread(rng), p.x + spread(rng));
  }
  for (std::size_t k = 0; k < config.background_photos; ++k) add_photo(unit(rng) * max_y, unit(rng) * max_x);

  // Default route query: parallel to the corridor, a few blocks off it.
  auto cell = [&](double fr, double fc) {
    return vid(static_cast<std::size_t>(std::lround(fr * (R - 1))), static_cast<std::size_t>(std::lround(fc * (C - 1))));
  };
  out.route_source = cell(0.2, 0.1);
  out.route_target = cell(0.8, 0.7);

  out.manifest =
      "# synthetic city, seed " + std::to_string(seed) + "\n"
      "mode = planar\n"
      "seed = " + std::to_string(seed) + "\n"
      "gazetteer = gazetteer.tsv\n"
      "corpus = corpus.jsonl\n"
      "nodes = nodes.tsv\n"
      "edges = edges.tsv\n"
      "photos = photos.tsv\n"
      "out_dir = run\n"
      "\n[route]\n"
      "source = " + std::to_string(out.route_source) + "\n"
      "target = " + std::to_string(out.route_target) + "\n";
  return out;
}

void WriteFixture(const FixtureBundle& bundle, const std::filesystem::path& dir) {
  WriteFile(dir / "nodes.tsv", bundle.nodes_tsv);
  WriteFile(dir / "edges.tsv", bundle.edges_tsv);
  WriteFile(dir / "gazetteer.tsv", bundle.gazetteer_tsv);
  WriteFile(dir / "corpus.jsonl", bundle.corpus_jsonl);
  WriteFile(dir / "photos.tsv", bundle.photos_tsv);
  WriteFile(dir / "manifest.toml", bundle.manifest);
}

}  // namespace kepath
