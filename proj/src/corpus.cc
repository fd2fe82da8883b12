#include "wikirank/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/format.h>
#include "json.hpp"

#include "wikirank/io.h"

namespace wikirank {

namespace {

constexpr int kMaxRedirectHops = 16;

using nlohmann::json;

}  // namespace

const char *EntityKindName(EntityKind kind) {
  switch (kind) {
    case EntityKind::kUniversity: return "University";
    case EntityKind::kPerson: return "Person";
    case EntityKind::kJournal: return "Journal";
    case EntityKind::kOther: return "Other";
  }
  return "Other";
}

EntityKind ParseEntityKind(std::string_view name) {
  std::string lower;
  for (char c : io::TrimCopy(name)) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "university") return EntityKind::kUniversity;
  if (lower == "person") return EntityKind::kPerson;
  if (lower == "journal") return EntityKind::kJournal;
  if (lower == "other") return EntityKind::kOther;
  throw Error("unknown entity kind '" + std::string(name) + "'");
}

TypeMap LoadTypeMap(std::istream &in, Diagnostics *diagnostics) {
  TypeMap types;
  size_t line_no = 0;
  for (const auto &row : io::ReadTsv(in)) {
    ++line_no;
    if (row.size() != 2) {
      if (diagnostics) {
        diagnostics->Warn("type map", fmt::format("row {} does not have two "
                                                  "fields", line_no));
      }
      continue;
    }
    auto title = TryCanonicalizeTitle(row[0]);
    if (!title) continue;
    try {
      types[*title] = ParseEntityKind(row[1]);
    } catch (const Error &e) {
      if (diagnostics) diagnostics->Warn(*title, e.what());
    }
  }
  return types;
}

const ParsedPage *CorpusStore::FindArticle(const std::string &title) const {
  auto it = pages_.find(title);
  if (it == pages_.end() || it->second.is_redirect) return nullptr;
  return &it->second;
}

EntityKind CorpusStore::KindOf(const std::string &title) const {
  auto it = kinds_.find(title);
  return it == kinds_.end() ? EntityKind::kOther : it->second;
}

size_t CorpusStore::InLinkCount(const std::string &title) const {
  auto it = in_links_.find(title);
  return it == in_links_.end() ? 0 : it->second.size();
}

uint64_t CorpusStore::ViewsOf(const std::string &title) const {
  auto it = views_.find(title);
  return it == views_.end() ? 0 : it->second;
}

size_t CorpusStore::link_count() const {
  size_t n = 0;
  for (const auto &[title, sources] : in_links_) n += sources.size();
  return n;
}

size_t CorpusStore::citation_count() const {
  size_t n = 0;
  for (const auto &[title, page] : pages_) n += page.citations.size();
  return n;
}

std::string ResolveRedirect(const CorpusStore &store, const std::string &title,
                            Diagnostics *diagnostics) {
  const auto &redirects = store.redirects();
  std::string current = title;
  for (int hops = 0;; ++hops) {
    auto it = redirects.find(current);
    if (it == redirects.end()) break;
    if (hops == kMaxRedirectHops || it->second == title) {
      throw Error("redirect cycle at " + title);
    }
    current = it->second;
  }
  if (current != title && store.pages().count(current) == 0 && diagnostics) {
    diagnostics->Warn(title, "redirect target '" + current + "' has no page");
  }
  return current;
}

std::set<std::string> ResolvedOutgoingLinks(const CorpusStore &store,
                                            const ParsedPage &page) {
  std::set<std::string> out;
  for (const std::string &target : page.outgoing_links) {
    try {
      out.insert(ResolveRedirect(store, target));
    } catch (const Error &) {
      out.insert(target);
    }
  }
  return out;
}

CorpusStore BuildStore(std::vector<ParsedPage> pages, const TypeMap &types,
                       Diagnostics *diagnostics) {
  CorpusStore store;
  for (ParsedPage &page : pages) {
    auto [it, inserted] = store.pages_.try_emplace(page.title);
    if (!inserted && diagnostics) {
      diagnostics->Warn(page.title, "duplicate title; later page replaces "
                                    "the earlier one");
    }
    it->second = std::move(page);
  }
  for (const auto &[title, page] : store.pages_) {
    if (page.is_redirect && page.redirect_target) {
      store.redirects_[title] = *page.redirect_target;
    }
  }
  for (const auto &[title, page] : store.pages_) {
    if (page.is_redirect) continue;
    size_t dangling = 0;
    for (const std::string &target : page.outgoing_links) {
      std::string resolved;
      try {
        resolved = ResolveRedirect(store, target);
      } catch (const Error &e) {
        if (diagnostics) diagnostics->Warn(title, e.what());
        resolved = target;
      }
      if (store.pages_.count(resolved) == 0) ++dangling;
      store.in_links_[resolved].insert(title);
    }
    if (dangling > 0 && diagnostics) {
      diagnostics->Warn(title, fmt::format("{} dangling link target(s)",
                                           dangling));
    }
  }
  store.kinds_ = types;
  return store;
}

size_t MentionCount(const CorpusStore &store, const std::string &term) {
  if (term.empty()) return 0;
  std::string own;
  if (auto canonical = TryCanonicalizeTitle(term)) {
    try {
      own = ResolveRedirect(store, *canonical);
    } catch (const Error &) {
      own = *canonical;
    }
  }
  size_t count = 0;
  for (const auto &[title, page] : store.pages()) {
    if (page.is_redirect || title == own) continue;
    if (ContainsBounded(page.plain_text, term)) ++count;
  }
  return count;
}

std::string CorpusStore::Serialize() const {
  json doc;
  doc["format"] = "wikirank-store";
  doc["version"] = 1;
  json page_list = json::array();
  for (const auto &[title, page] : pages_) {
    json p;
    p["title"] = page.title;
    if (page.is_redirect) {
      p["redirect"] = *page.redirect_target;
      page_list.push_back(std::move(p));
      continue;
    }
    json boxes = json::array();
    for (const Infobox &box : page.infoboxes) {
      boxes.push_back({{"template", box.template_name},
                       {"attributes", box.attributes}});
    }
    json cites = json::array();
    for (const CitationRef &c : page.citations) {
      cites.push_back({{"template", c.template_name},
                       {"journal", c.journal_name_raw}});
    }
    p["infoboxes"] = std::move(boxes);
    p["links"] = page.outgoing_links;
    p["citations"] = std::move(cites);
    p["text"] = page.plain_text;
    page_list.push_back(std::move(p));
  }
  doc["pages"] = std::move(page_list);
  doc["views"] = views_;
  json kinds = json::object();
  for (const auto &[title, kind] : kinds_) kinds[title] = EntityKindName(kind);
  doc["kinds"] = std::move(kinds);
  return doc.dump(1) + "\n";
}

CorpusStore CorpusStore::Deserialize(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != "wikirank-store") {
      throw Error("not a wikirank store file");
    }
    std::vector<ParsedPage> pages;
    for (const json &p : doc.at("pages")) {
      ParsedPage page;
      page.title = p.at("title").get<std::string>();
      if (p.contains("redirect")) {
        page.is_redirect = true;
        page.redirect_target = p["redirect"].get<std::string>();
      } else {
        for (const json &b : p.at("infoboxes")) {
          page.infoboxes.push_back(Infobox{
              b.at("template").get<std::string>(),
              b.at("attributes").get<std::map<std::string, std::string>>()});
        }
        page.outgoing_links = p.at("links").get<std::set<std::string>>();
        for (const json &c : p.at("citations")) {
          page.citations.push_back(CitationRef{
              c.at("template").get<std::string>(),
              c.at("journal").get<std::string>(), page.title});
        }
        page.plain_text = p.at("text").get<std::string>();
      }
      pages.push_back(std::move(page));
    }
    TypeMap kinds;
    for (const auto &[title, kind] : doc.at("kinds").items()) {
      kinds[title] = ParseEntityKind(kind.get<std::string>());
    }
    CorpusStore store = BuildStore(std::move(pages), kinds, nullptr);
    store.views_ = doc.at("views").get<std::map<std::string, uint64_t>>();
    return store;
  } catch (const json::exception &e) {
    throw Error(std::string("malformed store file: ") + e.what());
  }
}

void CorpusStore::Save(const std::filesystem::path &path) const {
  io::WriteFileAtomic(path, Serialize());
}

CorpusStore CorpusStore::Load(const std::filesystem::path &path) {
  return Deserialize(io::ReadFile(path));
}

std::optional<PageViewRecord> ParsePageViewLine(std::string_view line,
                                                std::string_view source_file) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r')) {
      ++pos;
    }
    if (pos >= line.size()) break;
    const size_t end = line.find_first_of(" \t\r", pos);
    fields.push_back(line.substr(pos, end == std::string_view::npos
                                          ? std::string_view::npos
                                          : end - pos));
    pos = end == std::string_view::npos ? line.size() : end;
  }
  if (fields.size() != 4) return std::nullopt;
  PageViewRecord record;
  const std::string_view count = fields[2];
  auto [ptr, ec] =
      std::from_chars(count.data(), count.data() + count.size(), record.count);
  if (ec != std::errc() || ptr != count.data() + count.size()) {
    return std::nullopt;
  }
  record.project = std::string(fields[0]);
  record.title_urlencoded = std::string(fields[1]);
  record.source_file = std::string(source_file);
  return record;
}

bool PeriodFilter::Accepts(std::string_view source_file) const {
  if (!from && !to) return true;
  const size_t slash = source_file.find_last_of("/\\");
  const std::string_view name =
      slash == std::string_view::npos ? source_file
                                      : source_file.substr(slash + 1);
  std::string stamp;
  for (size_t i = 0; i + 8 <= name.size(); ++i) {
    bool digits = true;
    for (size_t k = 0; k < 8 && digits; ++k) {
      digits = std::isdigit(static_cast<unsigned char>(name[i + k])) != 0;
    }
    const bool bounded =
        (i == 0 || !std::isdigit(static_cast<unsigned char>(name[i - 1]))) &&
        (i + 8 == name.size() ||
         !std::isdigit(static_cast<unsigned char>(name[i + 8])));
    if (digits && bounded) {
      stamp = std::string(name.substr(i, 8));
      break;
    }
  }
  if (stamp.empty()) return true;
  if (from && stamp < *from) return false;
  if (to && stamp > *to) return false;
  return true;
}

PageviewAggregator::PageviewAggregator(const CorpusStore &store,
                                       std::string project,
                                       PeriodFilter period,
                                       Diagnostics *diagnostics)
    : store_(store),
      project_(std::move(project)),
      period_(std::move(period)),
      diagnostics_(diagnostics) {}

void PageviewAggregator::Add(const PageViewRecord &record) {
  if (record.project != project_) {
    ++totals_.skipped_project;
    return;
  }
  if (!period_.Accepts(record.source_file)) {
    ++totals_.skipped_period;
    return;
  }
  auto title = TryCanonicalizeTitle(PercentDecode(record.title_urlencoded));
  if (!title) {
    ++totals_.malformed;
    if (diagnostics_) {
      diagnostics_->Warn(record.source_file, "pageview record with an empty "
                                             "title");
    }
    return;
  }
  std::string resolved;
  try {
    resolved = ResolveRedirect(store_, *title);
  } catch (const Error &e) {
    ++totals_.skipped_unknown;
    if (diagnostics_) diagnostics_->Warn(*title, e.what());
    return;
  }
  if (store_.FindArticle(resolved) == nullptr) {
    ++totals_.skipped_unknown;
    return;
  }
  totals_.views[resolved] += record.count;
  ++totals_.accepted_records;
  totals_.accepted_views += record.count;
}

void PageviewAggregator::AddLine(std::string_view line,
                                 std::string_view source_file) {
  if (io::TrimCopy(line).empty()) return;
  auto record = ParsePageViewLine(line, source_file);
  if (!record) {
    ++totals_.malformed;
    if (diagnostics_) {
      diagnostics_->Warn(source_file,
                         "malformed pageview line '" + std::string(line) + "'");
    }
    return;
  }
  Add(*record);
}

void PageviewAggregator::AddStream(std::istream &in,
                                   std::string_view source_file) {
  std::string line;
  while (std::getline(in, line)) AddLine(line, source_file);
}

PageviewTotals AggregatePageviews(const CorpusStore &store,
                                  const std::vector<PageViewRecord> &records,
                                  const std::string &project,
                                  const PeriodFilter &period,
                                  Diagnostics *diagnostics) {
  PageviewAggregator aggregator(store, project, period, diagnostics);
  for (const PageViewRecord &r : records) aggregator.Add(r);
  return aggregator.totals();
}

}  // namespace wikirank
