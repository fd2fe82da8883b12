#include "wikirank/corpus.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

namespace wikirank {
namespace {

ParsedPage Page(const std::string &title, const std::string &text) {
  return ParseWikitext(title, text);
}

CorpusStore StoreOf(std::vector<ParsedPage> pages, TypeMap types = {}) {
  return BuildStore(std::move(pages), types);
}

CorpusStore LoadLinks12() {
  std::ifstream in(WIKIRANK_TEST_DATA "/links12.jsonl");
  std::vector<ParsedPage> pages;
  for (const RawPage &raw : ParseDump(in)) {
    pages.push_back(ParseWikitext(raw.title, raw.text));
  }
  return BuildStore(std::move(pages), {});
}

TEST(ResolveRedirect, Examples) {
  const CorpusStore store =
      StoreOf({Page("A", "#REDIRECT [[B]]"), Page("B", "text")});
  EXPECT_EQ(ResolveRedirect(store, "A"), "B");
  EXPECT_EQ(ResolveRedirect(store, "B"), "B");

  const CorpusStore self = StoreOf({Page("A", "#REDIRECT [[A]]")});
  try {
    ResolveRedirect(self, "A");
    FAIL();
  } catch (const Error &e) {
    EXPECT_STREQ(e.what(), "redirect cycle at A");
  }

  const CorpusStore chain =
      StoreOf({Page("A", "#REDIRECT [[B]]"), Page("B", "#REDIRECT [[C]]"),
               Page("C", "#REDIRECT [[D]]"), Page("D", "end")});
  EXPECT_EQ(ResolveRedirect(chain, "A"), "D");
  EXPECT_EQ(ResolveRedirect(chain, ResolveRedirect(chain, "A")), "D");
}

TEST(ResolveRedirect, CycleAndDepthCap) {
  const CorpusStore loop = StoreOf({Page("A", "#REDIRECT [[B]]"),
                                    Page("B", "#REDIRECT [[C]]"),
                                    Page("C", "#REDIRECT [[B]]")});
  EXPECT_THROW(ResolveRedirect(loop, "A"), Error);

  std::vector<ParsedPage> pages;
  for (int i = 0; i < 16; ++i) {
    pages.push_back(Page("R" + std::to_string(i),
                         "#REDIRECT [[R" + std::to_string(i + 1) + "]]"));
  }
  pages.push_back(Page("R16", "end"));
  const CorpusStore sixteen = StoreOf(pages);
  EXPECT_EQ(ResolveRedirect(sixteen, "R0"), "R16");

  pages.back() = Page("R16", "#REDIRECT [[R17]]");
  pages.push_back(Page("R17", "end"));
  const CorpusStore seventeen = StoreOf(pages);
  EXPECT_THROW(ResolveRedirect(seventeen, "R0"), Error);
}

TEST(ResolveRedirect, DanglingTargetWarns) {
  const CorpusStore store = StoreOf({Page("A", "#REDIRECT [[Nowhere]]")});
  Diagnostics diag;
  EXPECT_EQ(ResolveRedirect(store, "A", &diag), "Nowhere");
  EXPECT_EQ(diag.count(), 1u);
}

TEST(BuildStore, DistinctCitersAndRedirectResolution) {
  const CorpusStore store = StoreOf({Page("A", "[[C]] [[C]]"), Page("B", "[[C]]"),
                                     Page("C", "")});
  EXPECT_EQ(store.in_links().at("C"), (std::set<std::string>{"A", "B"}));

  const CorpusStore redirected =
      StoreOf({Page("R", "#REDIRECT [[C]]"), Page("A", "[[R]]"), Page("C", "")});
  EXPECT_EQ(redirected.in_links().at("C"), (std::set<std::string>{"A"}));
  EXPECT_EQ(redirected.in_links().count("R"), 0u);

  const CorpusStore empty = StoreOf({});
  EXPECT_TRUE(empty.pages().empty());
  EXPECT_TRUE(empty.in_links().empty());
}

TEST(BuildStore, DuplicatesAndDanglingWarn) {
  Diagnostics diag;
  const CorpusStore store = BuildStore(
      {Page("A", "[[Missing]]"), Page("A", "[[B]]"), Page("B", "")}, {}, &diag);
  EXPECT_EQ(store.pages().at("A").outgoing_links,
            (std::set<std::string>{"B"}));
  EXPECT_EQ(diag.count(), 1u);

  Diagnostics diag2;
  BuildStore({Page("A", "[[Missing]]")}, {}, &diag2);
  EXPECT_EQ(diag2.count(), 1u);
}

TEST(BuildStore, TwelvePageFixtureCounts) {
  const CorpusStore store = LoadLinks12();
  EXPECT_EQ(store.pages().size(), 12u);
  EXPECT_EQ(store.redirect_count(), 3u);
  // Hand enumeration of pages with at least one (resolved) link.
  EXPECT_EQ(store.InLinkCount("Alpha University"), 5u);
  EXPECT_EQ(store.InLinkCount("Beta University"), 3u);
  EXPECT_EQ(store.InLinkCount("Gamma University"), 3u);
  EXPECT_EQ(store.InLinkCount("Delta University"), 2u);
  EXPECT_EQ(store.InLinkCount("Article X"), 0u);
  EXPECT_EQ(store.InLinkCount("Article Z"), 0u);
  EXPECT_EQ(store.InLinkCount("Old Alpha"), 0u);
}

TEST(BuildStore, LinkIndexSymmetryAndDeterminism) {
  const CorpusStore store = LoadLinks12();
  for (const auto &[title, page] : store.pages()) {
    if (page.is_redirect) continue;
    for (const std::string &e : ResolvedOutgoingLinks(store, page)) {
      EXPECT_EQ(store.in_links().at(e).count(title), 1u);
    }
  }
  for (const auto &[entity, sources] : store.in_links()) {
    for (const std::string &w : sources) {
      const ParsedPage *page = store.FindArticle(w);
      ASSERT_NE(page, nullptr);
      EXPECT_EQ(ResolvedOutgoingLinks(store, *page).count(entity), 1u);
    }
  }
  EXPECT_EQ(LoadLinks12().Serialize(), store.Serialize());
}

TEST(BuildStore, PermutationIndependent) {
  std::ifstream in(WIKIRANK_TEST_DATA "/links12.jsonl");
  std::vector<ParsedPage> pages;
  for (const RawPage &raw : ParseDump(in)) {
    pages.push_back(ParseWikitext(raw.title, raw.text));
  }
  const std::string reference = BuildStore(pages, {}).Serialize();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(pages.begin(), pages.end(), rng);
    EXPECT_EQ(BuildStore(pages, {}).Serialize(), reference);
  }
}

TEST(Store, SerializationRoundTrip) {
  TypeMap types{{"Alpha University", EntityKind::kUniversity},
                {"Person One", EntityKind::kPerson}};
  std::ifstream in(WIKIRANK_TEST_DATA "/links12.jsonl");
  std::vector<ParsedPage> pages;
  for (const RawPage &raw : ParseDump(in)) {
    pages.push_back(ParseWikitext(raw.title, raw.text));
  }
  CorpusStore store = BuildStore(pages, types);
  store.set_views({{"Alpha University", 10}});
  const CorpusStore loaded = CorpusStore::Deserialize(store.Serialize());
  EXPECT_EQ(loaded.pages(), store.pages());
  EXPECT_EQ(loaded.in_links(), store.in_links());
  EXPECT_EQ(loaded.views(), store.views());
  EXPECT_EQ(loaded.kinds(), store.kinds());
  EXPECT_EQ(loaded.Serialize(), store.Serialize());
  EXPECT_THROW(CorpusStore::Deserialize("{\"format\":\"other\"}"), Error);
  EXPECT_THROW(CorpusStore::Deserialize("not json"), Error);
}

TEST(TypeMap, LoadAndDefault) {
  std::istringstream in("# comment\nharvard_University\tUniversity\n"
                        "Jane Doe\tperson\nbad line\nNature\tJournal\n"
                        "X\tSpaceship\n");
  Diagnostics diag;
  const TypeMap types = LoadTypeMap(in, &diag);
  EXPECT_EQ(types.size(), 3u);
  EXPECT_EQ(types.at("Harvard University"), EntityKind::kUniversity);
  EXPECT_EQ(types.at("Jane Doe"), EntityKind::kPerson);
  EXPECT_EQ(diag.count(), 2u);
  const CorpusStore store = StoreOf({Page("Nature", "")}, types);
  EXPECT_EQ(store.KindOf("Nature"), EntityKind::kJournal);
  EXPECT_EQ(store.KindOf("Unlisted"), EntityKind::kOther);
}

TEST(Pageviews, RedirectFoldingAndSkips) {
  const CorpusStore store =
      StoreOf({Page("T", "text"), Page("R", "#REDIRECT [[T]]")});
  std::vector<PageViewRecord> records{
      {"en", "T", 10, "f1"}, {"en", "R", 5, "f1"}, {"en", "Unknown", 3, "f1"},
      {"de", "T", 100, "f1"}};
  const PageviewTotals t = AggregatePageviews(store, records, "en", {});
  EXPECT_EQ(t.views.at("T"), 15u);
  EXPECT_EQ(t.views.count("R"), 0u);
  EXPECT_EQ(t.skipped_unknown, 1u);
  EXPECT_EQ(t.skipped_project, 1u);
  EXPECT_EQ(t.accepted_views, 15u);
}

TEST(Pageviews, TwoFilesSum) {
  const CorpusStore store = StoreOf({Page("T", "")});
  PageviewAggregator agg(store, "en", {});
  std::istringstream f1("en T 7 100\n"), f2("en T 7 100\n");
  agg.AddStream(f1, "pagecounts-20131201-000000");
  agg.AddStream(f2, "pagecounts-20131202-000000");
  EXPECT_EQ(agg.totals().views.at("T"), 14u);
}

TEST(Pageviews, DecodingMalformedAndPeriod) {
  const CorpusStore store = StoreOf({Page("Harvard University", "")});
  Diagnostics diag;
  PeriodFilter period{"20130901", "20131231"};
  PageviewAggregator agg(store, "en", period, &diag);
  agg.AddLine("en Harvard_University 4 100", "pagecounts-20131001-000000");
  agg.AddLine("en Harvard%20University 6 100", "pagecounts-20131001-010000");
  agg.AddLine("en Harvard_University 50 100", "pagecounts-20140101-000000");
  agg.AddLine("en Harvard_University x 100", "pagecounts-20131001-000000");
  agg.AddLine("en Harvard_University", "pagecounts-20131001-000000");
  const PageviewTotals &t = agg.totals();
  EXPECT_EQ(t.views.at("Harvard University"), 10u);
  EXPECT_EQ(t.skipped_period, 1u);
  EXPECT_EQ(t.malformed, 2u);
  EXPECT_EQ(diag.count(), 2u);
}

TEST(Pageviews, ConservationOnRandomRecords) {
  const CorpusStore store =
      StoreOf({Page("A", ""), Page("B", ""), Page("C", "#REDIRECT [[A]]"),
               Page("D", "#REDIRECT [[C]]")});
  std::mt19937_64 rng(8);
  const char *titles[] = {"A", "B", "C", "D", "E", "a"};
  std::uniform_int_distribution<int> pick(0, 5), count(0, 1000);
  std::vector<PageViewRecord> records;
  uint64_t accepted = 0;
  for (int i = 0; i < 500; ++i) {
    PageViewRecord r{"en", titles[pick(rng)], static_cast<uint64_t>(count(rng)),
                     "f"};
    if (r.title_urlencoded != "E") accepted += r.count;
    records.push_back(r);
  }
  const PageviewTotals t = AggregatePageviews(store, records, "en", {});
  uint64_t total = 0;
  for (const auto &[title, v] : t.views) {
    total += v;
    EXPECT_NE(store.FindArticle(title), nullptr);
  }
  EXPECT_EQ(total, accepted);
  EXPECT_EQ(total, t.accepted_views);
}

TEST(MentionCount, WordBoundedDistinctPages) {
  const CorpusStore store = StoreOf(
      {Page("P1", "Harvard University is old."),
       Page("P2", "At [[Harvard University]], five. Harvard University again."),
       Page("P3", "(Harvard University)"), Page("P4", "Harvard only"),
       Page("P5", "Harvard Universitys is not a match"),
       Page("Harvard University", "Harvard University names itself"),
       Page("R", "#REDIRECT [[Harvard University]]")});
  EXPECT_EQ(MentionCount(store, "Harvard University"), 3u);
  EXPECT_EQ(MentionCount(store, "Oxford"), 0u);
}

}  // namespace
}  // namespace wikirank
