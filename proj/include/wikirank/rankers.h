#ifndef WIKIRANK_RANKERS_H_
#define WIKIRANK_RANKERS_H_

#include <istream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wikirank/corpus.h"
#include "wikirank/diagnostics.h"
#include "wikirank/stats.h"

namespace wikirank {

using ScoreMap = std::map<std::string, double>;
using Universe = std::set<std::string>;

struct RankingEntry {
  std::string entity;
  double score = 0.0;
  double rank = 0.0;  // 1-based; tied scores share the mean rank
};

struct RankingList {
  std::string method_id;
  std::vector<RankingEntry> entries;  // score descending, then title
};

RankingList MakeRanking(std::string method_id, const ScoreMap &scores);

// "rank,entity,score" with six-decimal scores.
std::string FormatRankingCsv(const RankingList &ranking);

// Canonical alias -> canonical title.
using AliasTable = std::map<std::string, std::string>;

// "alias<TAB>canonical" lines, both sides canonicalized as titles.
AliasTable LoadAliasTable(std::istream &in, Diagnostics *diagnostics = nullptr);

struct BenchmarkRanking {
  std::string name;
  std::map<std::string, double> positions;  // entity -> rank (1 = best)
};

// CSV with header "rank,name". Names are canonicalized and alias-resolved.
BenchmarkRanking LoadBenchmark(std::istream &in, std::string name,
                               const AliasTable &aliases,
                               Diagnostics *diagnostics = nullptr);

// Non-negative component weights, stored normalized to sum 1 in the order
// given.
class WeightVector {
 public:
  explicit WeightVector(std::vector<std::pair<std::string, double>> weights);

  const std::vector<std::pair<std::string, double>> &entries() const {
    return weights_;
  }
  size_t size() const { return weights_.size(); }
  // Throws Error for unknown components.
  double weight(const std::string &component) const;
  std::vector<double> values() const;

 private:
  std::vector<std::pair<std::string, double>> weights_;
};

// faculty 0.5, alumni 0.3, visibility 0.1, other 0.1.
WeightVector DefaultInfoboxWeights();

// "component<TAB>weight" lines.
WeightVector LoadWeightVector(std::istream &in);
std::string FormatWeightVector(const WeightVector &weights);

struct AttributeGroup {
  std::string group_id;  // faculty, alumni, other_affiliations
  std::set<std::string> keys;  // normalized infobox keys
};

std::vector<AttributeGroup> DefaultAttributeGroups();
// "group_id<TAB>key" lines; keys are normalized on load.
std::vector<AttributeGroup> LoadAttributeGroups(std::istream &in,
                                                Diagnostics *diagnostics =
                                                    nullptr);

// Number of distinct pages linking to each entity.
ScoreMap IncomingLinkScores(const CorpusStore &store, const Universe &universe,
                            Diagnostics *diagnostics = nullptr);
// Incoming count over max(1, distinct resolved outgoing links).
ScoreMap InOutRatioScores(const CorpusStore &store, const Universe &universe,
                          Diagnostics *diagnostics = nullptr);
// Redirect-folded view totals.
ScoreMap PageviewScores(const CorpusStore &store, const Universe &universe,
                        Diagnostics *diagnostics = nullptr);

RankingList RankIncomingLinks(const CorpusStore &store,
                              const Universe &universe,
                              Diagnostics *diagnostics = nullptr);
RankingList RankInOutRatio(const CorpusStore &store, const Universe &universe,
                           Diagnostics *diagnostics = nullptr);
RankingList RankPageviews(const CorpusStore &store, const Universe &universe,
                          Diagnostics *diagnostics = nullptr);

// Distinct Person pages with at least one group key whose value references
// the university, by a link resolving to it or by its name as a
// word-bounded substring.
size_t CountAttributeGroup(const CorpusStore &store,
                           const std::string &university,
                           const AttributeGroup &group);

struct InfoboxComponents {
  ScoreMap faculty;
  ScoreMap alumni;
  ScoreMap visibility;
  ScoreMap other;
};

// Raw (unscaled) infobox counts for every university in the universe.
// Groups are looked up by id: faculty, alumni, other_affiliations.
InfoboxComponents ComputeInfoboxComponents(
    const CorpusStore &store, const Universe &universe,
    const std::vector<AttributeGroup> &groups);

// Weighted sum of scaled components. Weight ids: faculty, alumni,
// visibility, other. Throws on a negative component.
double InfoboxScore(double faculty, double alumni, double visibility,
                    double other, const WeightVector &weights);

// Min-max scales each infobox component over the universe and combines.
RankingList RankInfobox(const CorpusStore &store, const Universe &universe,
                        const std::vector<AttributeGroup> &groups,
                        const WeightVector &weights);

struct UniverseReport {
  Universe entities;
  // (benchmark, entity) pairs without an article in the corpus.
  std::vector<std::pair<std::string, std::string>> unmatched;
  // Matched articles that are not typed University.
  std::vector<std::string> not_university;
};

// Universities present in the corpus that appear in at least
// `min_appearances` benchmarks (after redirect resolution).
UniverseReport FilterUniverse(const CorpusStore &store,
                              const std::vector<BenchmarkRanking> &benchmarks,
                              int min_appearances);

struct Component {
  std::string id;
  ScoreMap scores;
};

// Min-max scales each component over the universe; entities missing from a
// component count as 0.
std::vector<Component> ScaleComponents(const std::vector<Component> &components,
                                       const Universe &universe);

// Weighted sum of already scaled components. Weights are matched to
// components by id.
RankingList CombineRankings(const std::vector<Component> &components,
                            const WeightVector &weights,
                            std::string method_id = "combined",
                            Diagnostics *diagnostics = nullptr);

// Kendall tau-b between scores and a benchmark over their common entities;
// benchmark rank 1 is the best.
stats::CorrelationResult TauAgainstBenchmark(const ScoreMap &scores,
                                             const BenchmarkRanking &target);

struct WeightFit {
  WeightVector weights;
  double tau = 0.0;
  size_t n = 0;
  bool converged = false;
};

// Maximizes Kendall tau-b of the combined ranking against the target over
// the weight simplex. Start points come from a lattice scan of the simplex;
// the best `config.restarts` of them are refined by Nelder-Mead on softmax
// coordinates. Throws Error("insufficient overlap") below 3 common entities.
WeightFit FitComponentWeights(const std::vector<Component> &components,
                              const BenchmarkRanking &target,
                              const stats::SimplexConfig &config = {});

}  // namespace wikirank

#endif  // WIKIRANK_RANKERS_H_
