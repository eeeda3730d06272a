#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hini/io.hpp"

namespace hini {

struct RelationSpec {
  std::string name;
  std::string from;
  std::string to;
  double mean_degree = 1.0;  // Poisson mean of out-degree per `from` entity
  std::size_t min_degree = 0;
  std::size_t max_degree = 8;
};

/// Planted-rule link prediction data. The target relation R(s, t) holds
/// exactly when the planted relation sequence connects s to t in the final
/// (noisy) graph; R itself is never written as edges.
struct SyntheticSpec {
  std::vector<std::pair<std::string, std::size_t>> entity_counts;
  std::vector<std::pair<std::string, std::string>> hierarchy;
  std::vector<RelationSpec> relations;
  /// Relation names along the planted path, `name~` for inverse traversal.
  std::vector<std::string> planted;
  /// Random extra edges as a fraction of the base edge count.
  double noise_rate = 0.1;
  std::size_t train_per_class = 100;
  std::size_t test_per_class = 100;
  std::uint64_t seed = 42;
  /// Search depth the data is meant for; a longer planted path warns.
  std::size_t max_depth = 4;

  /// Five types, 10,000 entities, Person -worksAt-> Organization
  /// -locatedIn-> City planted.
  static SyntheticSpec planted_rule(std::uint64_t seed = 42);
};

struct SyntheticBundle {
  RawBundle raw;
  std::vector<ExampleRow> train;  // labelled 1/0
  std::vector<ExampleRow> test;
  std::string planted_path;  // meta-path string form
  std::string source_type;
  std::string target_type;
  std::vector<std::string> warnings;
};

/// Deterministic for a given spec (std::mt19937_64). Throws
/// PreconditionError for a type with zero entities, an inconsistent planted
/// chain, or when too few positive/negative pairs exist.
SyntheticBundle generate_synthetic(const SyntheticSpec& spec);

/// Bibliographic network in several research areas: venues, papers and
/// authors (publishIn, authorOf, cite). Authors and citations stay inside
/// their area except for a `cross_area_rate` fraction.
struct BiblioSpec {
  std::size_t areas = 3;
  std::size_t venues_per_area = 10;
  std::size_t authors_per_area = 60;
  std::size_t papers_per_venue = 30;
  std::size_t max_authors_per_paper = 3;
  std::size_t citations_per_paper = 2;
  double cross_area_rate = 0.05;
  std::size_t example_pairs_per_area = 3;
  std::uint64_t seed = 7;
};

struct BiblioBundle {
  RawBundle raw;
  std::vector<ExampleRow> examples;  // same-area venue pairs
  std::map<std::string, std::size_t> venue_area;
};

BiblioBundle generate_biblio(const BiblioSpec& spec);

}  // namespace hini
