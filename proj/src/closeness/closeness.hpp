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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "extract/extract.hpp"
#include "features/features.hpp"
#include "mixture/mixture.hpp"

namespace kepath {

// All observations between two PoIs, merged across both orientations. The
// feature vector is measured from the smaller id to the larger one.
struct PairObservation {
  PoiId poi_i = 0;  // poi_i < poi_j
  PoiId poi_j = 0;
  std::vector<std::size_t> relations;  // every mention, sorted; repeats kept
  FeatureVector features;

  std::vector<std::size_t> DistinctRelations() const;
};

std::vector<PairObservation> AggregatePairs(const std::vector<RelationTriplet>& triplets,
                                            const PoiTable& pois, DistanceMode mode);

// Frequency of relation k within the pair's multiset; 0 when absent.
double RelationPrior(const PairObservation& pair, std::size_t k);

// Bayes posteriors over the pair's distinct observed relations that have a
// trained model, computed in log space. Relations without a model take no part.
std::map<std::size_t, double> Posteriors(const PairObservation& pair, const ModelBundle& models);
double Posterior(const PairObservation& pair, std::size_t k, const ModelBundle& models);

// Per relation, the largest posterior it reaches over all pairs observing it.
std::map<std::size_t, double> GlobalMaxPosteriors(const std::vector<PairObservation>& pairs,
                                                  const ModelBundle& models);

// Sum over distinct relations of posterior / relation maximum, divided by the
// lexicon size, clamped to [0, 1].
double ClosenessScore(const PairObservation& pair, const ModelBundle& models,
                      const std::map<std::size_t, double>& maxima, std::size_t lexicon_size);

struct RelationshipEdge {
  PoiId poi_i = 0;
  PoiId poi_j = 0;
  double weight = 0.0;      // closeness score in [0, 1]
  double distance_m = 0.0;  // straight-line PoI separation
  std::vector<std::size_t> relations;
};

// Closeness graph over PoIs: one undirected edge per observed pair.
struct RelationshipGraph {
  PoiTable pois;
  std::vector<RelationshipEdge> edges;  // sorted by (poi_i, poi_j)
};

RelationshipGraph BuildRelationshipGraph(const std::vector<PairObservation>& pairs, const ModelBundle& models,
                                         const PoiTable& pois, std::size_t lexicon_size, DistanceMode mode,
                                         unsigned threads = 1);

std::string RelationshipGraphToJsonl(const RelationshipGraph& graph, const RelationLexicon& lexicon);
// Node coordinates come from `pois`; every referenced PoI must be present.
RelationshipGraph RelationshipGraphFromJsonl(std::string_view jsonl, const RelationLexicon& lexicon,
                                             const PoiTable& pois);

}  // namespace kepath
