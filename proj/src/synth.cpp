#include "hini/synth.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "hini/pcrw.hpp"

namespace hini {

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::string padded(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::vector<std::string> make_names(const std::string& prefix,
                                    std::size_t count) {
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    names.push_back(prefix + "_" + padded(i, width));
  }
  return names;
}

}  // namespace

SyntheticSpec SyntheticSpec::planted_rule(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.entity_counts = {{"Person", 6000},
                        {"Organization", 1500},
                        {"City", 1500},
                        {"Country", 500},
                        {"Award", 500}};
  spec.hierarchy = {{"Person", "Object"},   {"Organization", "Object"},
                    {"Location", "Object"}, {"City", "Location"},
                    {"Country", "Location"}, {"Award", "Object"}};
  spec.relations = {
      {"worksAt", "Person", "Organization", 1.5, 1, 3},
      {"locatedIn", "Organization", "City", 1.0, 1, 1},
      {"bornIn", "Person", "City", 1.0, 1, 1},
      {"cityOf", "City", "Country", 1.0, 1, 1},
      {"won", "Person", "Award", 0.5, 0, 3},
      {"knows", "Person", "Person", 2.0, 0, 6},
      {"sponsors", "Organization", "Award", 1.0, 0, 3},
  };
  spec.planted = {"worksAt", "locatedIn"};
  spec.seed = seed;
  return spec;
}

SyntheticBundle generate_synthetic(const SyntheticSpec& spec) {
  SyntheticBundle out;
  Rng rng(spec.seed);

  std::unordered_map<std::string, std::vector<std::string>> members;
  for (const auto& [type, count] : spec.entity_counts) {
    if (count == 0) {
      throw PreconditionError("synthetic spec: type '" + type +
                              "' has zero entities");
    }
    members[type] = make_names(type, count);
    for (const auto& name : members[type]) out.raw.types.push_back({name, type});
  }
  auto members_of = [&](const std::string& type) -> const std::vector<std::string>& {
    auto it = members.find(type);
    if (it == members.end()) {
      throw PreconditionError("synthetic spec: relation uses type '" + type +
                              "' with no entity count");
    }
    return it->second;
  };
  out.raw.hierarchy = spec.hierarchy;

  // Planted chain: resolve endpoint types and check consistency.
  if (spec.planted.empty()) {
    throw PreconditionError("synthetic spec: planted path is empty");
  }
  std::string planted_text;
  std::string current;
  for (std::size_t i = 0; i < spec.planted.size(); ++i) {
    std::string name = spec.planted[i];
    const bool inverted = name.ends_with('~');
    if (inverted) name.pop_back();
    auto rel = std::find_if(spec.relations.begin(), spec.relations.end(),
                            [&](const RelationSpec& r) { return r.name == name; });
    if (rel == spec.relations.end()) {
      throw PreconditionError("synthetic spec: planted relation '" + name +
                              "' is not in the schema");
    }
    const std::string& from = inverted ? rel->to : rel->from;
    const std::string& to = inverted ? rel->from : rel->to;
    if (i == 0) {
      current = from;
      out.source_type = from;
      planted_text = from;
    } else if (from != current) {
      throw PreconditionError("synthetic spec: planted path breaks at '" +
                              spec.planted[i] + "'");
    }
    planted_text += " -" + spec.planted[i] + "-> " + to;
    current = to;
  }
  out.target_type = current;
  out.planted_path = planted_text;
  if (spec.planted.size() > spec.max_depth) {
    out.warnings.push_back("planted path of length " +
                           std::to_string(spec.planted.size()) +
                           " exceeds max_depth " +
                           std::to_string(spec.max_depth));
  }

  // Base edges.
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  auto add_edge = [&](const std::string& s, const std::string& r,
                      const std::string& t) {
    if (seen.emplace(s, r, t).second) out.raw.edges.push_back({s, r, t});
  };
  for (const auto& rel : spec.relations) {
    const auto& from = members_of(rel.from);
    const auto& to = members_of(rel.to);
    std::poisson_distribution<std::size_t> degree(rel.mean_degree);
    for (const auto& u : from) {
      const std::size_t d =
          std::min(std::clamp(degree(rng), rel.min_degree, rel.max_degree),
                   to.size());
      for (std::size_t k = 0; k < d; ++k) add_edge(u, rel.name, to[pick(rng, to.size())]);
    }
  }
  const auto noise = static_cast<std::size_t>(
      std::llround(spec.noise_rate * static_cast<double>(out.raw.edges.size())));
  for (std::size_t k = 0; k < noise; ++k) {
    const auto& rel = spec.relations[pick(rng, spec.relations.size())];
    const auto& from = members_of(rel.from);
    const auto& to = members_of(rel.to);
    add_edge(from[pick(rng, from.size())], rel.name, to[pick(rng, to.size())]);
  }

  // Ground truth on the final graph.
  const BuiltGraph hin = build_graph(out.raw);
  const MetaPath planted = parse_metapath(planted_text, hin.graph, hin.hierarchy);
  const auto& sources = members_of(out.source_type);
  const auto& targets = members_of(out.target_type);
  std::unordered_map<std::string, WalkDistribution> reach;
  auto reachable = [&](const std::string& s) -> const WalkDistribution& {
    auto it = reach.find(s);
    if (it == reach.end()) {
      it = reach.emplace(s, walk_distribution(hin.graph, hin.hierarchy,
                                              hin.graph.entity(s), planted))
               .first;
    }
    return it->second;
  };

  const std::size_t per_class = spec.train_per_class + spec.test_per_class;
  std::set<std::pair<std::string, std::string>> used;
  std::vector<ExampleRow> positives;
  std::vector<ExampleRow> negatives;
  const std::size_t max_attempts = 1000 * (per_class + 1);
  for (std::size_t attempt = 0;
       positives.size() < per_class && attempt < max_attempts; ++attempt) {
    const auto& s = sources[pick(rng, sources.size())];
    const auto& dist = reachable(s);
    if (dist.mass.empty()) continue;
    const auto& t =
        hin.graph.entity_name(dist.mass[pick(rng, dist.mass.size())].first);
    if (used.emplace(s, t).second) positives.push_back({s, t, 1.0, 1});
  }
  for (std::size_t attempt = 0;
       negatives.size() < per_class && attempt < max_attempts; ++attempt) {
    const auto& s = sources[pick(rng, sources.size())];
    const auto& t = targets[pick(rng, targets.size())];
    if (reachable(s).at(hin.graph.entity(t)) > 0.0) continue;
    if (used.emplace(s, t).second) negatives.push_back({s, t, 1.0, 0});
  }
  if (positives.size() < per_class || negatives.size() < per_class) {
    throw PreconditionError("synthetic spec: could not sample enough "
                            "positive and negative pairs");
  }
  auto split = [&](std::size_t begin, std::size_t end) {
    std::vector<ExampleRow> rows(positives.begin() + static_cast<std::ptrdiff_t>(begin),
                                 positives.begin() + static_cast<std::ptrdiff_t>(end));
    rows.insert(rows.end(), negatives.begin() + static_cast<std::ptrdiff_t>(begin),
                negatives.begin() + static_cast<std::ptrdiff_t>(end));
    return rows;
  };
  out.train = split(0, spec.train_per_class);
  out.test = split(spec.train_per_class, per_class);
  return out;
}

BiblioBundle generate_biblio(const BiblioSpec& spec) {
  if (spec.areas == 0 || spec.venues_per_area == 0 ||
      spec.authors_per_area == 0 || spec.papers_per_venue == 0 ||
      spec.max_authors_per_paper == 0) {
    throw PreconditionError("biblio spec: every count must be positive");
  }
  BiblioBundle out;
  Rng rng(spec.seed);
  std::bernoulli_distribution cross(spec.cross_area_rate);

  out.raw.hierarchy = {{"Venue", "Object"}, {"Paper", "Object"},
                       {"Author", "Object"}};
  std::vector<std::vector<std::string>> venues(spec.areas);
  std::vector<std::vector<std::string>> authors(spec.areas);
  std::vector<std::vector<std::string>> papers(spec.areas);
  for (std::size_t a = 0; a < spec.areas; ++a) {
    const std::string area = "a" + std::to_string(a);
    venues[a] = make_names("venue_" + area, spec.venues_per_area);
    authors[a] = make_names("author_" + area, spec.authors_per_area);
    for (const auto& v : venues[a]) {
      out.raw.types.push_back({v, "Venue"});
      out.venue_area[v] = a;
    }
    for (const auto& au : authors[a]) out.raw.types.push_back({au, "Author"});
  }

  auto other_area = [&](std::size_t a) {
    if (spec.areas == 1) return a;
    const std::size_t shift = 1 + pick(rng, spec.areas - 1);
    return (a + shift) % spec.areas;
  };

  std::set<std::pair<std::string, std::string>> authored;
  for (std::size_t a = 0; a < spec.areas; ++a) {
    for (const auto& v : venues[a]) {
      for (const auto& p : make_names("paper_" + v.substr(6), spec.papers_per_venue)) {
        papers[a].push_back(p);
        out.raw.types.push_back({p, "Paper"});
        out.raw.edges.push_back({p, "publishIn", v});
        const std::size_t n_authors = 1 + pick(rng, spec.max_authors_per_paper);
        for (std::size_t k = 0; k < n_authors; ++k) {
          const std::size_t area = cross(rng) ? other_area(a) : a;
          const auto& au = authors[area][pick(rng, authors[area].size())];
          if (authored.emplace(au, p).second) {
            out.raw.edges.push_back({au, "authorOf", p});
          }
        }
      }
    }
  }
  std::set<std::pair<std::string, std::string>> cited;
  for (std::size_t a = 0; a < spec.areas; ++a) {
    for (const auto& p : papers[a]) {
      for (std::size_t k = 0; k < spec.citations_per_paper; ++k) {
        const std::size_t area = cross(rng) ? other_area(a) : a;
        const auto& q = papers[area][pick(rng, papers[area].size())];
        if (q != p && cited.emplace(p, q).second) {
          out.raw.edges.push_back({p, "cite", q});
        }
      }
    }
  }

  std::set<std::pair<std::string, std::string>> chosen;
  for (std::size_t a = 0; a < spec.areas; ++a) {
    const auto& vs = venues[a];
    if (vs.size() < 2) break;
    std::size_t made = 0;
    for (std::size_t attempt = 0;
         made < spec.example_pairs_per_area && attempt < 1000; ++attempt) {
      const auto& s = vs[pick(rng, vs.size())];
      const auto& t = vs[pick(rng, vs.size())];
      if (s == t || !chosen.emplace(s, t).second) continue;
      out.examples.push_back({s, t, 1.0, std::nullopt});
      ++made;
    }
  }
  return out;
}

}  // namespace hini
