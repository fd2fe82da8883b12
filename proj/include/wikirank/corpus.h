#ifndef WIKIRANK_CORPUS_H_
#define WIKIRANK_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wikirank/diagnostics.h"
#include "wikirank/title.h"
#include "wikirank/wikitext.h"

namespace wikirank {

enum class EntityKind { kUniversity, kPerson, kJournal, kOther };

const char *EntityKindName(EntityKind kind);
// Case-insensitive; throws Error on unknown names.
EntityKind ParseEntityKind(std::string_view name);

using TypeMap = std::map<std::string, EntityKind>;

// "title<TAB>kind" lines; '#' comments and blank lines are skipped.
// Malformed lines are reported and ignored.
TypeMap LoadTypeMap(std::istream &in, Diagnostics *diagnostics = nullptr);

// Immutable indexed corpus. Built once by BuildStore (or loaded from a store
// file); every accessor is const and safe to share across threads.
class CorpusStore {
 public:
  CorpusStore() = default;

  // Every page, redirects included, keyed by canonical title.
  const std::map<std::string, ParsedPage> &pages() const { return pages_; }
  // Redirect page title -> canonical target (one hop).
  const std::map<std::string, std::string> &redirects() const {
    return redirects_;
  }
  // Resolved entity -> distinct non-redirect pages linking to it.
  const std::map<std::string, std::set<std::string>> &in_links() const {
    return in_links_;
  }
  const std::map<std::string, uint64_t> &views() const { return views_; }
  const std::map<std::string, EntityKind> &kinds() const { return kinds_; }

  // Non-redirect page with this title, or nullptr.
  const ParsedPage *FindArticle(const std::string &title) const;
  EntityKind KindOf(const std::string &title) const;
  size_t InLinkCount(const std::string &title) const;
  uint64_t ViewsOf(const std::string &title) const;

  size_t article_count() const { return pages_.size() - redirects_.size(); }
  size_t redirect_count() const { return redirects_.size(); }
  size_t link_count() const;
  size_t citation_count() const;

  // Replaces the pageview totals. Only used while assembling a store.
  void set_views(std::map<std::string, uint64_t> views) {
    views_ = std::move(views);
  }

  // Portable JSON form; derived indexes are rebuilt on load.
  std::string Serialize() const;
  static CorpusStore Deserialize(std::string_view json);
  void Save(const std::filesystem::path &path) const;
  static CorpusStore Load(const std::filesystem::path &path);

 private:
  friend CorpusStore BuildStore(std::vector<ParsedPage> pages,
                                const TypeMap &types,
                                Diagnostics *diagnostics);

  std::map<std::string, ParsedPage> pages_;
  std::map<std::string, std::string> redirects_;
  std::map<std::string, std::set<std::string>> in_links_;
  std::map<std::string, uint64_t> views_;
  std::map<std::string, EntityKind> kinds_;
};

// Later duplicates of a title replace earlier ones (with a warning). Link
// targets are redirect-resolved before indexing and redirect pages never act
// as link sources.
CorpusStore BuildStore(std::vector<ParsedPage> pages, const TypeMap &types,
                       Diagnostics *diagnostics = nullptr);

// Follows redirects to a fixed point, at most 16 hops. Throws
// Error("redirect cycle at <title>") on cycles or overlong chains. A chain
// ending at a title with no page returns that title and records a warning.
std::string ResolveRedirect(const CorpusStore &store, const std::string &title,
                            Diagnostics *diagnostics = nullptr);

// Distinct redirect-resolved link targets of one page.
std::set<std::string> ResolvedOutgoingLinks(const CorpusStore &store,
                                            const ParsedPage &page);

// Number of distinct non-redirect pages, other than the term's own page,
// whose plain text contains `term` with word boundaries on both sides.
size_t MentionCount(const CorpusStore &store, const std::string &term);

struct PageViewRecord {
  std::string project;
  std::string title_urlencoded;
  uint64_t count = 0;
  std::string source_file;
};

// "<project> <urlencoded-title> <count> <bytes>"; nullopt when malformed.
std::optional<PageViewRecord> ParsePageViewLine(std::string_view line,
                                                std::string_view source_file);

// Restricts pageview files by the YYYYMMDD stamp in their file name, e.g.
// "pagecounts-20131201-000000". Files without a stamp are accepted.
struct PeriodFilter {
  std::optional<std::string> from;  // inclusive YYYYMMDD
  std::optional<std::string> to;    // inclusive YYYYMMDD

  bool Accepts(std::string_view source_file) const;
};

struct PageviewTotals {
  std::map<std::string, uint64_t> views;
  uint64_t accepted_records = 0;
  uint64_t accepted_views = 0;
  uint64_t skipped_unknown = 0;
  uint64_t skipped_project = 0;
  uint64_t skipped_period = 0;
  uint64_t malformed = 0;
};

// Folds pageview records onto resolved article titles: views of a redirect
// count toward its target.
class PageviewAggregator {
 public:
  PageviewAggregator(const CorpusStore &store, std::string project,
                     PeriodFilter period, Diagnostics *diagnostics = nullptr);

  void Add(const PageViewRecord &record);
  void AddLine(std::string_view line, std::string_view source_file);
  void AddStream(std::istream &in, std::string_view source_file);

  const PageviewTotals &totals() const { return totals_; }

 private:
  const CorpusStore &store_;
  std::string project_;
  PeriodFilter period_;
  Diagnostics *diagnostics_;
  PageviewTotals totals_;
};

PageviewTotals AggregatePageviews(const CorpusStore &store,
                                  const std::vector<PageViewRecord> &records,
                                  const std::string &project,
                                  const PeriodFilter &period,
                                  Diagnostics *diagnostics = nullptr);

}  // namespace wikirank

#endif  // WIKIRANK_CORPUS_H_
