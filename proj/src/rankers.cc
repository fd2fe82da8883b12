#include "wikirank/rankers.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "wikirank/io.h"
#include "wikirank/title.h"
#include "wikirank/wikitext.h"

namespace wikirank {
namespace {

bool ParseDouble(std::string_view s, double *out) {
  const std::string t = io::TrimCopy(s);
  if (t.empty()) return false;
  const char *end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

std::string Lowered(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Scores each universe entity with `fn`; entities without an article score 0.
template <typename Fn>
ScoreMap ScoreUniverse(const CorpusStore &store, const Universe &universe,
                       Diagnostics *diagnostics, Fn fn) {
  ScoreMap scores;
  for (const std::string &entity : universe) {
    const ParsedPage *page = store.FindArticle(entity);
    if (page == nullptr) {
      if (diagnostics) diagnostics->Warn(entity, "not in corpus; scored 0");
      scores[entity] = 0.0;
      continue;
    }
    scores[entity] = fn(entity, *page);
  }
  return scores;
}

const AttributeGroup *FindGroup(const std::vector<AttributeGroup> &groups,
                                const std::string &id) {
  for (const AttributeGroup &g : groups) {
    if (g.group_id == id) return &g;
  }
  return nullptr;
}

// Universities (restricted to `candidates`) referenced by one infobox value.
std::set<std::string> ReferencedUniversities(
    const CorpusStore &store, const std::string &value,
    const std::set<std::string> &candidates) {
  std::set<std::string> found;
  for (const std::string &target : ExtractLinkTargets(value)) {
    std::string resolved;
    try {
      resolved = ResolveRedirect(store, target);
    } catch (const Error &) {
      continue;
    }
    if (candidates.count(resolved)) found.insert(resolved);
  }
  for (const std::string &name : candidates) {
    if (!found.count(name) && ContainsBounded(value, name)) found.insert(name);
  }
  return found;
}

// group index -> university -> person count.
std::vector<std::map<std::string, size_t>> CountGroups(
    const CorpusStore &store, const std::set<std::string> &universities,
    const std::vector<const AttributeGroup *> &groups) {
  std::map<std::string, size_t> key_group;
  for (size_t g = 0; g < groups.size(); ++g) {
    if (groups[g] == nullptr) continue;
    for (const std::string &key : groups[g]->keys) key_group.emplace(key, g);
  }
  std::vector<std::map<std::string, size_t>> counts(groups.size());
  for (const auto &[title, page] : store.pages()) {
    if (page.is_redirect || store.KindOf(title) != EntityKind::kPerson) {
      continue;
    }
    std::vector<std::set<std::string>> hits(groups.size());
    for (const Infobox &box : page.infoboxes) {
      for (const auto &[key, value] : box.attributes) {
        auto it = key_group.find(key);
        if (it == key_group.end()) continue;
        hits[it->second].merge(ReferencedUniversities(store, value,
                                                      universities));
      }
    }
    for (size_t g = 0; g < groups.size(); ++g) {
      for (const std::string &u : hits[g]) ++counts[g][u];
    }
  }
  return counts;
}

std::vector<double> Softmax(std::span<const double> z) {
  const double peak = *std::max_element(z.begin(), z.end());
  std::vector<double> w(z.size());
  double total = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    w[i] = std::exp(z[i] - peak);
    total += w[i];
  }
  for (double &v : w) v /= total;
  return w;
}

// Every point of the simplex lattice with denominator `resolution`, in
// lexicographic order of the integer numerators.
void EnumerateLattice(size_t k, int resolution, std::vector<int> &prefix,
                      std::vector<std::vector<double>> &out) {
  const int used = std::accumulate(prefix.begin(), prefix.end(), 0);
  if (prefix.size() + 1 == k) {
    const double step = 1.0 / resolution;
    std::vector<double> w;
    for (int p : prefix) w.push_back(p * step);
    w.push_back((resolution - used) * step);
    out.push_back(std::move(w));
    return;
  }
  for (int i = resolution - used; i >= 0; --i) {
    prefix.push_back(i);
    EnumerateLattice(k, resolution, prefix, out);
    prefix.pop_back();
  }
}

// Finest lattice with at most ~6000 points (capped at 1/100, which three
// components still reach).
int LatticeResolution(size_t k) {
  if (k <= 1) return 1;
  int best = 1;
  for (int r = 1; r <= 100; ++r) {
    double points = 1.0;  // C(r + k - 1, k - 1)
    for (size_t j = 1; j < k; ++j) {
      points = points * static_cast<double>(r + j) / static_cast<double>(j);
    }
    if (points > 6000.0) break;
    best = r;
  }
  return best;
}

}  // namespace

RankingList MakeRanking(std::string method_id, const ScoreMap &scores) {
  RankingList list;
  list.method_id = std::move(method_id);
  for (const auto &[entity, score] : scores) {
    list.entries.push_back({entity, score, 0.0});
  }
  // Map iteration is title-ascending already; a stable sort keeps it for ties.
  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const RankingEntry &a, const RankingEntry &b) {
                     return a.score > b.score;
                   });
  size_t i = 0;
  while (i < list.entries.size()) {
    size_t j = i;
    while (j + 1 < list.entries.size() &&
           list.entries[j + 1].score == list.entries[i].score) {
      ++j;
    }
    const double rank = static_cast<double>(i + j + 2) / 2.0;
    for (size_t t = i; t <= j; ++t) list.entries[t].rank = rank;
    i = j + 1;
  }
  return list;
}

std::string FormatRankingCsv(const RankingList &ranking) {
  std::string out = "rank,entity,score\n";
  for (const RankingEntry &e : ranking.entries) {
    out += fmt::format("{},{},{}\n", e.rank, io::CsvField(e.entity),
                       io::FormatScore(e.score));
  }
  return out;
}

AliasTable LoadAliasTable(std::istream &in, Diagnostics *diagnostics) {
  AliasTable table;
  for (const auto &row : io::ReadTsv(in)) {
    if (row.size() < 2) {
      if (diagnostics) diagnostics->Warn("aliases", "row without a tab");
      continue;
    }
    auto alias = TryCanonicalizeTitle(row[0]);
    auto canonical = TryCanonicalizeTitle(row[1]);
    if (!alias || !canonical) {
      if (diagnostics) diagnostics->Warn("aliases", "empty name in row");
      continue;
    }
    table[*alias] = *canonical;
  }
  return table;
}

BenchmarkRanking LoadBenchmark(std::istream &in, std::string name,
                               const AliasTable &aliases,
                               Diagnostics *diagnostics) {
  BenchmarkRanking bench;
  bench.name = std::move(name);
  const std::vector<std::string> lines = io::ReadLines(in);
  size_t i = 0;
  while (i < lines.size() && io::TrimCopy(lines[i]).empty()) ++i;
  if (i == lines.size()) throw Error("benchmark " + bench.name + " is empty");
  {
    const auto header = io::SplitCsvLine(lines[i]);
    if (header.size() < 2 || Lowered(io::TrimCopy(header[0])) != "rank" ||
        Lowered(io::TrimCopy(header[1])) != "name") {
      throw Error("benchmark " + bench.name +
                  ": expected header \"rank,name\"");
    }
  }
  for (++i; i < lines.size(); ++i) {
    if (io::TrimCopy(lines[i]).empty()) continue;
    const auto fields = io::SplitCsvLine(lines[i]);
    double rank = 0.0;
    if (fields.size() < 2 || !ParseDouble(fields[0], &rank) || rank <= 0.0) {
      if (diagnostics) {
        diagnostics->Warn(bench.name,
                          fmt::format("bad row at line {}", i + 1));
      }
      continue;
    }
    auto title = TryCanonicalizeTitle(fields[1]);
    if (!title) {
      if (diagnostics) {
        diagnostics->Warn(bench.name,
                          fmt::format("empty name at line {}", i + 1));
      }
      continue;
    }
    if (auto it = aliases.find(*title); it != aliases.end()) {
      *title = it->second;
    }
    auto [pos, inserted] = bench.positions.emplace(*title, rank);
    if (!inserted) {
      if (diagnostics) {
        diagnostics->Warn(bench.name, "duplicate entry " + *title +
                                          "; keeping the better rank");
      }
      pos->second = std::min(pos->second, rank);
    }
  }
  return bench;
}

WeightVector::WeightVector(
    std::vector<std::pair<std::string, double>> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("weight vector is empty");
  double total = 0.0;
  std::set<std::string> seen;
  for (const auto &[id, w] : weights_) {
    if (!seen.insert(id).second) throw Error("duplicate weight for " + id);
    if (!std::isfinite(w) || w < 0.0) {
      throw Error("weight for " + id + " must be nonnegative");
    }
    total += w;
  }
  if (total <= 0.0) throw Error("at least one weight must be positive");
  for (auto &entry : weights_) entry.second /= total;
}

double WeightVector::weight(const std::string &component) const {
  for (const auto &[id, w] : weights_) {
    if (id == component) return w;
  }
  throw Error("no weight for component " + component);
}

std::vector<double> WeightVector::values() const {
  std::vector<double> out;
  for (const auto &entry : weights_) out.push_back(entry.second);
  return out;
}

WeightVector DefaultInfoboxWeights() {
  return WeightVector(
      {{"faculty", 0.5}, {"alumni", 0.3}, {"visibility", 0.1}, {"other", 0.1}});
}

WeightVector LoadWeightVector(std::istream &in) {
  std::vector<std::pair<std::string, double>> weights;
  for (const auto &row : io::ReadTsv(in)) {
    double w = 0.0;
    if (row.size() < 2 || !ParseDouble(row[1], &w)) {
      throw Error("bad weight row: expected \"component<TAB>weight\"");
    }
    weights.emplace_back(io::TrimCopy(row[0]), w);
  }
  return WeightVector(std::move(weights));
}

std::string FormatWeightVector(const WeightVector &weights) {
  std::string out;
  for (const auto &[id, w] : weights.entries()) {
    out += fmt::format("{}\t{}\n", id, w);
  }
  return out;
}

std::vector<AttributeGroup> DefaultAttributeGroups() {
  return {
      {"faculty", {"workinstitution", "work_institution", "employer",
                   "workplaces"}},
      {"alumni", {"alumnus", "alumna", "alma_mater", "almamater", "education",
                  "training"}},
      {"other_affiliations", {"visitorschool", "visitor_school", "publisher",
                              "coachteams", "coach_teams", "college"}},
  };
}

std::vector<AttributeGroup> LoadAttributeGroups(std::istream &in,
                                                Diagnostics *diagnostics) {
  std::vector<AttributeGroup> groups = {
      {"faculty", {}}, {"alumni", {}}, {"other_affiliations", {}}};
  for (const auto &row : io::ReadTsv(in)) {
    if (row.size() < 2) {
      if (diagnostics) diagnostics->Warn("attribute groups", "row without a tab");
      continue;
    }
    const std::string id = io::TrimCopy(row[0]);
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const AttributeGroup &g) {
                             return g.group_id == id;
                           });
    const std::string key = NormalizeAttributeKey(row[1]);
    if (it == groups.end() || key.empty()) {
      if (diagnostics) {
        diagnostics->Warn("attribute groups", "ignoring row for '" + id + "'");
      }
      continue;
    }
    it->keys.insert(key);
  }
  return groups;
}

ScoreMap IncomingLinkScores(const CorpusStore &store, const Universe &universe,
                            Diagnostics *diagnostics) {
  return ScoreUniverse(store, universe, diagnostics,
                       [&](const std::string &entity, const ParsedPage &) {
                         return static_cast<double>(store.InLinkCount(entity));
                       });
}

ScoreMap InOutRatioScores(const CorpusStore &store, const Universe &universe,
                          Diagnostics *diagnostics) {
  return ScoreUniverse(
      store, universe, diagnostics,
      [&](const std::string &entity, const ParsedPage &page) {
        const size_t out = ResolvedOutgoingLinks(store, page).size();
        return static_cast<double>(store.InLinkCount(entity)) /
               static_cast<double>(std::max<size_t>(1, out));
      });
}

ScoreMap PageviewScores(const CorpusStore &store, const Universe &universe,
                        Diagnostics *diagnostics) {
  return ScoreUniverse(store, universe, diagnostics,
                       [&](const std::string &entity, const ParsedPage &) {
                         return static_cast<double>(store.ViewsOf(entity));
                       });
}

RankingList RankIncomingLinks(const CorpusStore &store,
                              const Universe &universe,
                              Diagnostics *diagnostics) {
  return MakeRanking("links", IncomingLinkScores(store, universe, diagnostics));
}

RankingList RankInOutRatio(const CorpusStore &store, const Universe &universe,
                           Diagnostics *diagnostics) {
  return MakeRanking("ratio", InOutRatioScores(store, universe, diagnostics));
}

RankingList RankPageviews(const CorpusStore &store, const Universe &universe,
                          Diagnostics *diagnostics) {
  return MakeRanking("views", PageviewScores(store, universe, diagnostics));
}

size_t CountAttributeGroup(const CorpusStore &store,
                           const std::string &university,
                           const AttributeGroup &group) {
  const auto counts = CountGroups(store, {university}, {&group});
  auto it = counts[0].find(university);
  return it == counts[0].end() ? 0 : it->second;
}

InfoboxComponents ComputeInfoboxComponents(
    const CorpusStore &store, const Universe &universe,
    const std::vector<AttributeGroup> &groups) {
  const auto counts =
      CountGroups(store, universe,
                  {FindGroup(groups, "faculty"), FindGroup(groups, "alumni"),
                   FindGroup(groups, "other_affiliations")});
  auto lookup = [](const std::map<std::string, size_t> &m,
                   const std::string &u) {
    auto it = m.find(u);
    return it == m.end() ? 0.0 : static_cast<double>(it->second);
  };
  InfoboxComponents c;
  for (const std::string &u : universe) {
    c.faculty[u] = lookup(counts[0], u);
    c.alumni[u] = lookup(counts[1], u);
    c.other[u] = lookup(counts[2], u);
    c.visibility[u] = static_cast<double>(MentionCount(store, u));
  }
  return c;
}

double InfoboxScore(double faculty, double alumni, double visibility,
                    double other, const WeightVector &weights) {
  if (faculty < 0 || alumni < 0 || visibility < 0 || other < 0) {
    throw Error("infobox components must be nonnegative");
  }
  return weights.weight("faculty") * faculty +
         weights.weight("alumni") * alumni +
         weights.weight("visibility") * visibility +
         weights.weight("other") * other;
}

RankingList RankInfobox(const CorpusStore &store, const Universe &universe,
                        const std::vector<AttributeGroup> &groups,
                        const WeightVector &weights) {
  const InfoboxComponents raw =
      ComputeInfoboxComponents(store, universe, groups);
  const auto scaled = ScaleComponents({{"faculty", raw.faculty},
                                       {"alumni", raw.alumni},
                                       {"visibility", raw.visibility},
                                       {"other", raw.other}},
                                      universe);
  ScoreMap scores;
  for (const std::string &u : universe) {
    scores[u] = InfoboxScore(scaled[0].scores.at(u), scaled[1].scores.at(u),
                             scaled[2].scores.at(u), scaled[3].scores.at(u),
                             weights);
  }
  return MakeRanking("infobox", scores);
}

UniverseReport FilterUniverse(const CorpusStore &store,
                              const std::vector<BenchmarkRanking> &benchmarks,
                              int min_appearances) {
  if (min_appearances < 1) throw Error("min_appearances must be at least 1");
  UniverseReport report;
  std::map<std::string, int> appearances;
  std::set<std::string> not_university;
  for (const BenchmarkRanking &bench : benchmarks) {
    std::set<std::string> matched;
    for (const auto &[name, rank] : bench.positions) {
      std::string resolved;
      try {
        resolved = ResolveRedirect(store, name);
      } catch (const Error &) {
        report.unmatched.emplace_back(bench.name, name);
        continue;
      }
      if (store.FindArticle(resolved) == nullptr) {
        report.unmatched.emplace_back(bench.name, name);
      } else if (store.KindOf(resolved) != EntityKind::kUniversity) {
        not_university.insert(resolved);
      } else {
        matched.insert(resolved);
      }
    }
    for (const std::string &m : matched) ++appearances[m];
  }
  for (const auto &[entity, count] : appearances) {
    if (count >= min_appearances) report.entities.insert(entity);
  }
  report.not_university.assign(not_university.begin(), not_university.end());
  return report;
}

std::vector<Component> ScaleComponents(const std::vector<Component> &components,
                                       const Universe &universe) {
  std::vector<Component> out;
  const std::vector<std::string> order(universe.begin(), universe.end());
  for (const Component &c : components) {
    std::vector<double> raw;
    raw.reserve(order.size());
    for (const std::string &e : order) {
      auto it = c.scores.find(e);
      raw.push_back(it == c.scores.end() ? 0.0 : it->second);
    }
    Component scaled{c.id, {}};
    if (!raw.empty()) {
      const std::vector<double> s = stats::MinMaxScale(raw);
      for (size_t i = 0; i < order.size(); ++i) scaled.scores[order[i]] = s[i];
    }
    out.push_back(std::move(scaled));
  }
  return out;
}

RankingList CombineRankings(const std::vector<Component> &components,
                            const WeightVector &weights, std::string method_id,
                            Diagnostics *diagnostics) {
  for (const auto &[id, w] : weights.entries()) {
    const bool known = std::any_of(
        components.begin(), components.end(),
        [&](const Component &c) { return c.id == id; });
    if (!known) throw Error("weight given for unknown component " + id);
  }
  std::set<std::string> entities;
  for (const Component &c : components) {
    for (const auto &entry : c.scores) entities.insert(entry.first);
  }
  ScoreMap combined;
  for (const std::string &e : entities) combined[e] = 0.0;
  for (const Component &c : components) {
    const double w = weights.weight(c.id);
    for (const std::string &e : entities) {
      auto it = c.scores.find(e);
      if (it == c.scores.end()) {
        if (diagnostics) {
          diagnostics->Warn(e, "missing from component " + c.id + "; using 0");
        }
        continue;
      }
      combined[e] += w * it->second;
    }
  }
  return MakeRanking(std::move(method_id), combined);
}

stats::CorrelationResult TauAgainstBenchmark(const ScoreMap &scores,
                                             const BenchmarkRanking &target) {
  std::vector<double> x, y;
  for (const auto &[entity, score] : scores) {
    auto it = target.positions.find(entity);
    if (it == target.positions.end()) continue;
    x.push_back(score);
    y.push_back(-it->second);
  }
  if (x.size() < 3) throw Error("insufficient overlap");
  return stats::KendallTau(x, y);
}

WeightFit FitComponentWeights(const std::vector<Component> &components,
                              const BenchmarkRanking &target,
                              const stats::SimplexConfig &config) {
  config.Validate();
  if (components.empty()) throw Error("no components to fit");
  const size_t k = components.size();

  std::set<std::string> pool;
  for (const Component &c : components) {
    for (const auto &entry : c.scores) pool.insert(entry.first);
  }
  std::vector<std::string> common;
  for (const std::string &e : pool) {
    if (target.positions.count(e)) common.push_back(e);
  }
  const size_t n = common.size();
  if (n < 3) throw Error("insufficient overlap");

  std::vector<double> y(n);
  std::vector<std::vector<double>> columns(k, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    y[i] = -target.positions.at(common[i]);
    for (size_t c = 0; c < k; ++c) {
      auto it = components[c].scores.find(common[i]);
      if (it != components[c].scores.end()) columns[c][i] = it->second;
    }
  }
  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
    throw Error("zero variance: target ranks are all equal");
  }

  // Constant combined scores have no tau; they rank below every real value.
  constexpr double kUndefined = 2.0;
  std::vector<double> combined(n);
  auto negative_tau = [&](std::span<const double> w) {
    for (size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (size_t c = 0; c < k; ++c) s += w[c] * columns[c][i];
      combined[i] = s;
    }
    if (std::all_of(combined.begin(), combined.end(),
                    [&](double v) { return v == combined[0]; })) {
      return kUndefined;
    }
    return -stats::KendallTau(combined, y).coefficient;
  };

  std::vector<std::vector<double>> lattice;
  std::vector<int> prefix;
  EnumerateLattice(k, LatticeResolution(k), prefix, lattice);
  std::vector<double> lattice_value(lattice.size());
  for (size_t i = 0; i < lattice.size(); ++i) {
    lattice_value[i] = negative_tau(lattice[i]);
  }
  std::vector<size_t> order(lattice.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return lattice_value[a] < lattice_value[b];
  });

  std::vector<double> best_w = lattice[order[0]];
  double best_value = lattice_value[order[0]];
  bool best_converged = true;

  if (k > 1) {
    stats::SimplexConfig run = config;
    run.restarts = 1;
    auto objective = [&](std::span<const double> z) {
      return negative_tau(Softmax(z));
    };
    const size_t starts =
        std::min(order.size(), static_cast<size_t>(config.restarts));
    for (size_t r = 0; r < starts; ++r) {
      std::vector<double> z0(k);
      for (size_t c = 0; c < k; ++c) {
        z0[c] = std::log(std::max(lattice[order[r]][c], 1e-6));
      }
      run.seed = config.seed + r;
      const stats::SimplexResult res = stats::NelderMead(objective, z0, run);
      if (res.value < best_value) {
        best_value = res.value;
        best_w = Softmax(res.argmin);
        best_converged = res.converged;
      }
    }
  }
  if (best_value >= kUndefined) {
    throw Error("zero variance: every weighting gives constant scores");
  }

  std::vector<std::pair<std::string, double>> named;
  for (size_t c = 0; c < k; ++c) named.emplace_back(components[c].id, best_w[c]);
  WeightFit fit{WeightVector(std::move(named)), -best_value, n, best_converged};
  return fit;
}

}  // namespace wikirank
