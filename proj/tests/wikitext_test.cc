#include "wikirank/wikitext.h"

#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "wikirank/title.h"

namespace wikirank {
namespace {

TEST(ParseWikitext, Redirect) {
  const ParsedPage p = ParseWikitext("Harvard", "#REDIRECT [[Harvard University]]");
  EXPECT_TRUE(p.is_redirect);
  ASSERT_TRUE(p.redirect_target.has_value());
  EXPECT_EQ(*p.redirect_target, "Harvard University");
  EXPECT_TRUE(p.infoboxes.empty());
  EXPECT_TRUE(p.citations.empty());
}

TEST(ParseWikitext, RedirectVariants) {
  EXPECT_EQ(*ParseWikitext("A", "  #redirect:[[harvard_University#History]]")
                 .redirect_target,
            "Harvard University");
  Diagnostics diag;
  const ParsedPage p = ParseWikitext("A", "#REDIRECT nowhere", &diag);
  EXPECT_FALSE(p.is_redirect);
  EXPECT_EQ(diag.count(), 1u);
}

TEST(ParseWikitext, RepeatedLinksCollapse) {
  const ParsedPage p = ParseWikitext(
      "Page", "[[MIT]] and [[MIT|the institute]] and [[MIT#History]]");
  EXPECT_EQ(p.outgoing_links, (std::set<std::string>{"MIT"}));
}

TEST(ParseWikitext, LinksSkipCommentsNowikiAndNamespaces) {
  const ParsedPage p = ParseWikitext(
      "Page",
      "[[a]] <!-- [[Hidden]] --> <nowiki>[[Literal]]</nowiki> "
      "[[File:X.png|thumb|A [[caption link]]]] [[Category:Universities]] "
      "[[:Category:Y]] [[#Local section]] [[b_c|label]]");
  EXPECT_EQ(p.outgoing_links,
            (std::set<std::string>{"A", "B c", "Caption link"}));
}

TEST(ParseWikitext, InfoboxAttributes) {
  const ParsedPage p = ParseWikitext(
      "Someone",
      "{{Infobox scientist|alma_mater=[[Yale University]]|employer=[[MIT]]}}");
  ASSERT_EQ(p.infoboxes.size(), 1u);
  EXPECT_EQ(p.infoboxes[0].template_name, "infobox scientist");
  EXPECT_EQ(p.infoboxes[0].attributes,
            (std::map<std::string, std::string>{
                {"alma_mater", "[[Yale University]]"}, {"employer", "[[MIT]]"}}));
}

TEST(ParseWikitext, InfoboxNestedValuesAndKeyNormalization) {
  const ParsedPage p = ParseWikitext(
      "Someone",
      "{{ Infobox person\n"
      " | name = X\n"
      " | Alma mater = {{plainlist|\n* [[Harvard University]]\n* "
      "[[Yale University|Yale]]}}\n"
      " | workplaces = [[MIT]]<!-- | employer = hidden -->\n"
      "}}\nBody {{Infobox other|a=1}}");
  ASSERT_EQ(p.infoboxes.size(), 2u);
  const auto &attrs = p.infoboxes[0].attributes;
  EXPECT_EQ(attrs.at("alma_mater"),
            "{{plainlist|\n* [[Harvard University]]\n* [[Yale University|Yale]]}}");
  EXPECT_EQ(attrs.at("workplaces"), "[[MIT]]");
  EXPECT_EQ(attrs.count("employer"), 0u);
  EXPECT_EQ(attrs.at("name"), "X");
}

TEST(ParseWikitext, NestedInfoboxIsNotTopLevel) {
  const ParsedPage p =
      ParseWikitext("X", "{{Wrapper|{{Infobox person|employer=[[MIT]]}}}}");
  EXPECT_TRUE(p.infoboxes.empty());
}

TEST(ParseWikitext, CitationTemplates) {
  const ParsedPage p = ParseWikitext(
      "Paper",
      "{{Cite journal|last=X|journal=Nature|year=2001}} "
      "{{Cite journal|journal=Nature}}");
  ASSERT_EQ(p.citations.size(), 2u);
  for (const CitationRef &c : p.citations) {
    EXPECT_EQ(c.template_name, "Cite journal");
    EXPECT_EQ(c.journal_name_raw, "Nature");
    EXPECT_EQ(c.citing_title, "Paper");
  }
}

TEST(ParseWikitext, CitationNameMatchingAndClosure) {
  const ParsedPage p = ParseWikitext(
      "P",
      "<ref>{{ cite_journal |journal= Science }}</ref>"
      "<ref name=a>{{CITATION|journal=[[Cell (journal)|Cell]]}}</ref>"
      "{{vancite journal|journal=BMJ}}{{Vcite journal|journal=Lancet}}"
      "{{cite book|journal=Not counted}}{{cite web|work=Nature}}"
      "{{cite journal|title=no journal}}{{cite journal|journal=}}");
  ASSERT_EQ(p.citations.size(), 4u);
  EXPECT_EQ(p.citations[0].template_name, "Cite journal");
  EXPECT_EQ(p.citations[0].journal_name_raw, "Science");
  EXPECT_EQ(p.citations[1].template_name, "Citation");
  EXPECT_EQ(p.citations[1].journal_name_raw, "[[Cell (journal)|Cell]]");
  EXPECT_EQ(p.citations[2].template_name, "Vancite journal");
  EXPECT_EQ(p.citations[3].template_name, "Vcite journal");
  const auto &names = CitationTemplateNames();
  for (const CitationRef &c : p.citations) {
    EXPECT_NE(std::find(names.begin(), names.end(), c.template_name),
              names.end());
  }
}

TEST(ParseWikitext, UnbalancedBracesRecover) {
  Diagnostics diag;
  const ParsedPage p = ParseWikitext(
      "Broken", "Text [[Link]] {{Infobox person|employer=[[MIT]]", &diag);
  ASSERT_EQ(p.infoboxes.size(), 1u);
  EXPECT_EQ(p.infoboxes[0].attributes.at("employer"), "[[MIT]]");
  EXPECT_EQ(p.outgoing_links, (std::set<std::string>{"Link", "MIT"}));
  ASSERT_EQ(diag.count(), 1u);
  EXPECT_EQ(diag.warnings()[0].rfind("WARN Broken: unbalanced braces", 0), 0u);
}

TEST(ParseWikitext, StrayClosingBracesWarn) {
  Diagnostics diag;
  ParseWikitext("X", "a }} b", &diag);
  EXPECT_EQ(diag.count(), 1u);
}

TEST(ParseWikitext, PlainText) {
  const ParsedPage p = ParseWikitext(
      "X",
      "'''Harvard University''' is in [[Cambridge, Massachusetts|Cambridge]]."
      "<ref>{{cite journal|journal=Nature}}</ref> See [[Yale University]]. "
      "{{Infobox university|name=H}}<!-- hidden --> a &amp; b "
      "<nowiki>[[kept]]</nowiki> [[Category:Ivy League]] <br/>end");
  EXPECT_EQ(p.plain_text,
            "Harvard University is in Cambridge. See Yale University. a & b "
            "[[kept]] end");
}

TEST(ParseWikitext, DiagnosticsFormatToSink) {
  std::ostringstream sink;
  Diagnostics diag(&sink);
  ParseWikitext("Some page", "{{open", &diag);
  EXPECT_EQ(sink.str().rfind("WARN Some page: ", 0), 0u);
}

std::string RandomWikitext(std::mt19937_64 &rng) {
  static const char *kPieces[] = {
      "Harvard", "University", " ", " ", "\n", "[[MIT]]", "[[Yale University|Yale]]",
      "{{Infobox person|employer=[[MIT]]|name=Q}}", "{{cite journal|journal=Nature}}",
      "<ref>x</ref>", "<!-- c -->", "'''b'''", "''i''", "{{", "}}", "[[", "]]",
      "<nowiki>n</nowiki>", "alpha", "beta", "|", "=", "&amp;", "[[Category:Z]]"};
  std::uniform_int_distribution<size_t> pick(0, std::size(kPieces) - 1);
  std::uniform_int_distribution<int> len(0, 40);
  std::string s;
  // Pieces are space separated: adjacency would glue link labels and
  // bold text onto neighbouring words, which is rendering, not invention.
  for (int i = len(rng); i > 0; --i) {
    s += kPieces[pick(rng)];
    s += ' ';
  }
  return s;
}

TEST(ParseWikitext, PropertiesOnRandomMarkup) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = RandomWikitext(rng);
    const ParsedPage a = ParseWikitext("T", text);
    const ParsedPage b = ParseWikitext("T", text);
    EXPECT_EQ(a, b);

    size_t opens = 0;
    for (size_t pos = text.find("[["); pos != std::string::npos;
         pos = text.find("[[", pos + 2)) {
      ++opens;
    }
    EXPECT_LE(a.outgoing_links.size(), opens);

    for (const CitationRef &c : a.citations) {
      const auto &names = CitationTemplateNames();
      EXPECT_NE(std::find(names.begin(), names.end(), c.template_name),
                names.end());
    }

    // Every word of the plain text occurs in the raw text.
    std::string word;
    auto check = [&] {
      if (!word.empty()) {
        EXPECT_NE(text.find(word), std::string::npos) << word << " | " << text;
      }
      word.clear();
    };
    for (char c : a.plain_text) {
      if (std::isalnum(static_cast<unsigned char>(c))) {
        word.push_back(c);
      } else {
        check();
      }
    }
    check();
  }
}

TEST(ExtractLinkTargets, InsideValues) {
  EXPECT_EQ(ExtractLinkTargets("{{plainlist|* [[Harvard University]]\n* "
                               "[[MIT|Massachusetts]]}}"),
            (std::vector<std::string>{"Harvard University", "MIT"}));
}

TEST(NormalizeAttributeKey, Rules) {
  EXPECT_EQ(NormalizeAttributeKey(" Alma mater "), "alma_mater");
  EXPECT_EQ(NormalizeAttributeKey("workInstitution"), "workinstitution");
  EXPECT_EQ(NormalizeAttributeKey("coach  teams"), "coach_teams");
}

TEST(DumpReader, XmlExport) {
  std::istringstream in(
      "<mediawiki><siteinfo><sitename>W</sitename></siteinfo>\n"
      "<page><title>Nature</title><ns>0</ns><revision><id>1</id>"
      "<text xml:space=\"preserve\">a &lt;ref&gt; &amp; [[B]]</text>"
      "</revision></page>\n"
      "<page><title>Talk:Nature</title><ns>1</ns><revision><text/></revision>"
      "</page></mediawiki>");
  const std::vector<RawPage> pages = ParseDump(in);
  ASSERT_EQ(pages.size(), 2u);
  EXPECT_EQ(pages[0].title, "Nature");
  EXPECT_EQ(pages[0].namespace_id, 0);
  EXPECT_EQ(pages[0].text, "a <ref> & [[B]]");
  EXPECT_EQ(pages[1].title, "Talk:Nature");
  EXPECT_EQ(pages[1].namespace_id, 1);
  EXPECT_EQ(pages[1].text, "");
}

TEST(DumpReader, JsonLines) {
  std::istringstream in(
      "{\"title\":\"Nature\",\"ns\":0,\"text\":\"...\"}\n\n"
      "{\"title\":\"Science\",\"text\":\"x\"}\n");
  DumpReader reader(in);
  EXPECT_EQ(reader.format(), DumpReader::Format::kJsonLines);
  auto a = reader.Next();
  ASSERT_TRUE(a);
  EXPECT_EQ(a->title, "Nature");
  EXPECT_EQ(a->namespace_id, 0);
  EXPECT_EQ(a->text, "...");
  auto b = reader.Next();
  ASSERT_TRUE(b);
  EXPECT_EQ(b->title, "Science");
  EXPECT_FALSE(reader.Next());
}

TEST(DumpReader, MalformedJsonNamesOffsetAndIndex) {
  std::istringstream in("{\"title\":\"A\",\"text\":\"\"}\n{\"title\": oops}\n");
  DumpReader reader(in);
  ASSERT_TRUE(reader.Next());
  try {
    reader.Next();
    FAIL();
  } catch (const DumpParseError &e) {
    EXPECT_EQ(e.page_index(), 1u);
    EXPECT_EQ(e.byte_offset(), 24u);
  }
}

TEST(DumpReader, TruncatedXmlNamesLastCompletePage) {
  // Three complete <page> elements, then a cut in the middle of the fourth.
  std::ifstream file(WIKIRANK_TEST_DATA "/truncated.xml", std::ios::binary);
  ASSERT_TRUE(file);
  DumpReader reader(file);
  size_t complete = 0;
  try {
    while (reader.Next()) ++complete;
    FAIL() << "expected truncation error";
  } catch (const DumpParseError &e) {
    EXPECT_EQ(complete, 3u);
    EXPECT_EQ(e.page_index(), 3u);
    EXPECT_NE(std::string(e.what()).find("last complete page index 2"),
              std::string::npos);
  }
}

TEST(DumpReader, StreamsLargeInputAcrossChunks) {
  std::string xml = "<mediawiki>";
  for (int i = 0; i < 200; ++i) {
    xml += "<page><title>P" + std::to_string(i) + "</title><ns>0</ns>"
           "<revision><text>" + std::string(1000, 'x') + "</text></revision>"
           "</page>";
  }
  xml += "</mediawiki>";
  std::istringstream in(xml);
  const auto pages = ParseDump(in);
  ASSERT_EQ(pages.size(), 200u);
  EXPECT_EQ(pages[199].title, "P199");
  EXPECT_EQ(pages[123].text.size(), 1000u);
}

TEST(DumpReader, EmptyAndUnknownInput) {
  std::istringstream empty("  \n");
  EXPECT_TRUE(ParseDump(empty).empty());
  std::istringstream junk("hello");
  EXPECT_THROW(ParseDump(junk), DumpParseError);
}

TEST(CanonicalizeTitle, Rules) {
  EXPECT_EQ(CanonicalizeTitle("harvard_University"), "Harvard University");
  EXPECT_EQ(CanonicalizeTitle("MIT#History"), "MIT");
  EXPECT_EQ(CanonicalizeTitle("  nature "), "Nature");
  EXPECT_EQ(CanonicalizeTitle("a \t  b"), "A b");
  EXPECT_THROW(CanonicalizeTitle("  _ #x"), Error);
}

}  // namespace
}  // namespace wikirank
