#ifndef WIKIRANK_JOURNALS_H_
#define WIKIRANK_JOURNALS_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wikirank/corpus.h"
#include "wikirank/diagnostics.h"

namespace wikirank {

// Normalized variant -> normalized canonical journal name.
using JournalAliasTable = std::map<std::string, std::string>;

// Trim, collapse whitespace, unwrap [[links]] to their target, upper-case,
// drop a leading "THE " and trailing periods. No alias lookup.
std::string NormalizeJournalForm(std::string_view raw);

// Normalized form mapped through the alias table; nullopt (with a warning)
// when nothing is left.
std::optional<std::string> NormalizeJournalName(
    std::string_view raw, const JournalAliasTable &aliases,
    Diagnostics *diagnostics = nullptr);

// The IEEE TPAMI name variants, all mapped to the full journal title.
JournalAliasTable DefaultJournalAliases();

// "alias<TAB>canonical" lines; both sides are normalized. Entries are added
// on top of `base`.
JournalAliasTable LoadJournalAliases(std::istream &in,
                                     JournalAliasTable base = {},
                                     Diagnostics *diagnostics = nullptr);

struct JournalStats {
  std::string canonical_name;
  uint64_t citations = 0;  // citation templates naming the journal
  uint64_t citers = 0;     // distinct citing pages
  bool has_page = false;

  bool operator==(const JournalStats &) const = default;
};

// Every cited journal plus every Journal-typed article. A journal has a page
// when some page title (redirects included, when they reach an article)
// normalizes to its canonical name.
std::map<std::string, JournalStats> AggregateJournalStats(
    const CorpusStore &store, const JournalAliasTable &aliases,
    Diagnostics *diagnostics = nullptr);

struct ScaledJournal {
  std::string name;
  double citers = 0.0;     // min-max scaled
  double citations = 0.0;  // min-max scaled
  double has_page = 0.0;   // 0 or 1
};

// Ordered by name.
std::vector<ScaledJournal> ScaleJournalStats(
    const std::map<std::string, JournalStats> &stats);

struct JournalWeightFit {
  double coef_citers = 0.0;
  double coef_citations = 0.0;
  double coef_haspage = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
  size_t n = 0;
  std::vector<std::string> missing_target;  // journals without an impact factor
};

// 4.3848 citers + 4.42 citations + 0.8238 has_page.
JournalWeightFit PublishedJournalWeights();

double JournalScore(const ScaledJournal &journal, const JournalWeightFit &fit);

// Least squares of impact factors on (citers, citations, has_page). Needs at
// least 4 journals with targets; throws Error("insufficient data: ...")
// otherwise and names collinear columns on rank deficiency.
JournalWeightFit FitJournalWeights(const std::vector<ScaledJournal> &journals,
                                   const std::map<std::string, double> &targets,
                                   bool with_intercept = false);

// CSV with header "journal,if5"; names go through NormalizeJournalName.
std::map<std::string, double> LoadImpactFactors(
    std::istream &in, const JournalAliasTable &aliases,
    Diagnostics *diagnostics = nullptr);

struct JournalRankingEntry {
  JournalStats stats;
  double score = 0.0;
  double rank = 0.0;
};

// Score descending, then name; tied scores share the mean rank.
std::vector<JournalRankingEntry> RankJournals(
    const std::map<std::string, JournalStats> &stats,
    const JournalWeightFit &fit);

// "rank,journal,score,citers,citations,has_page".
std::string FormatJournalRankingCsv(
    const std::vector<JournalRankingEntry> &ranking);

}  // namespace wikirank

#endif  // WIKIRANK_JOURNALS_H_
