#include "wikirank/journals.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "wikirank/io.h"
#include "wikirank/rankers.h"
#include "wikirank/stats.h"

namespace wikirank {
namespace {

constexpr char kTpami[] =
    "IEEE TRANSACTIONS ON PATTERN ANALYSIS AND MACHINE INTELLIGENCE";

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string CollapseSpaces(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (IsSpace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::string UnwrapLinks(std::string_view s) {
  std::string out;
  size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "[[") == 0) {
      const size_t close = s.find("]]", i + 2);
      if (close != std::string_view::npos) {
        std::string_view inner = s.substr(i + 2, close - i - 2);
        out.append(inner.substr(0, inner.find('|')));
        i = close + 2;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

}  // namespace

std::string NormalizeJournalForm(std::string_view raw) {
  std::string s = CollapseSpaces(UnwrapLinks(CollapseSpaces(raw)));
  for (char &c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  if (s.rfind("THE ", 0) == 0) s.erase(0, 4);
  while (!s.empty() && (s.back() == '.' || IsSpace(s.back()))) s.pop_back();
  return CollapseSpaces(s);
}

std::optional<std::string> NormalizeJournalName(
    std::string_view raw, const JournalAliasTable &aliases,
    Diagnostics *diagnostics) {
  std::string form = NormalizeJournalForm(raw);
  if (form.empty()) {
    if (diagnostics) {
      diagnostics->Warn("journals",
                        fmt::format("dropping empty journal name '{}'", raw));
    }
    return std::nullopt;
  }
  if (auto it = aliases.find(form); it != aliases.end()) return it->second;
  return form;
}

JournalAliasTable DefaultJournalAliases() {
  static const char *const kVariants[] = {
      kTpami,
      "PAMI",
      "Pattern Analysis and Machine Intelligence",
      "IEEE Transaction On",
      "IEEE Trans. Pattern Anal. Mach. Intell.",
      "IEEE TPAMI",
      "TPAMI",
      "IEEE Transactions on Patterns Analysis and Machine Intelligence",
      "IEEE Trans. on Pattern Analysis and Machine Intelligence",
      "IEEE Transactions on Pattern Analysis & Machine Intelligence",
      "IEEE PAMI",
      "Trans. Pattern Anal. Mach. Intell.",
      "IEEE Trans Pattern Anal Mach Intell",
  };
  JournalAliasTable table;
  for (const char *v : kVariants) table[NormalizeJournalForm(v)] = kTpami;
  return table;
}

JournalAliasTable LoadJournalAliases(std::istream &in, JournalAliasTable base,
                                     Diagnostics *diagnostics) {
  for (const auto &row : io::ReadTsv(in)) {
    const std::string alias = NormalizeJournalForm(row[0]);
    const std::string canonical =
        row.size() > 1 ? NormalizeJournalForm(row[1]) : std::string();
    if (alias.empty() || canonical.empty()) {
      if (diagnostics) diagnostics->Warn("journal aliases", "bad row ignored");
      continue;
    }
    base[alias] = canonical;
  }
  return base;
}

std::map<std::string, JournalStats> AggregateJournalStats(
    const CorpusStore &store, const JournalAliasTable &aliases,
    Diagnostics *diagnostics) {
  std::map<std::string, JournalStats> out;
  std::map<std::string, std::set<std::string>> citers;
  auto entry = [&](const std::string &name) -> JournalStats & {
    JournalStats &s = out[name];
    s.canonical_name = name;
    return s;
  };
  for (const auto &[title, page] : store.pages()) {
    if (page.is_redirect) continue;
    for (const CitationRef &ref : page.citations) {
      auto name = NormalizeJournalName(ref.journal_name_raw, aliases,
                                       diagnostics);
      if (!name) continue;
      ++entry(*name).citations;
      citers[*name].insert(ref.citing_title.empty() ? title : ref.citing_title);
    }
    if (store.KindOf(title) == EntityKind::kJournal) {
      if (auto name = NormalizeJournalName(title, aliases)) entry(*name);
    }
  }
  for (const auto &[name, pages] : citers) out[name].citers = pages.size();

  std::set<std::string> with_page;
  for (const auto &[title, page] : store.pages()) {
    std::string resolved;
    try {
      resolved = ResolveRedirect(store, title);
    } catch (const Error &) {
      continue;
    }
    if (store.FindArticle(resolved) == nullptr) continue;
    if (auto name = NormalizeJournalName(title, aliases)) {
      with_page.insert(*name);
    }
  }
  for (auto &[name, s] : out) s.has_page = with_page.count(name) > 0;
  return out;
}

std::vector<ScaledJournal> ScaleJournalStats(
    const std::map<std::string, JournalStats> &stats) {
  std::vector<ScaledJournal> out;
  if (stats.empty()) return out;
  std::vector<double> citers, citations;
  for (const auto &[name, s] : stats) {
    citers.push_back(static_cast<double>(s.citers));
    citations.push_back(static_cast<double>(s.citations));
  }
  const auto sc = stats::MinMaxScale(citers);
  const auto sn = stats::MinMaxScale(citations);
  size_t i = 0;
  for (const auto &[name, s] : stats) {
    out.push_back({name, sc[i], sn[i], s.has_page ? 1.0 : 0.0});
    ++i;
  }
  return out;
}

JournalWeightFit PublishedJournalWeights() {
  JournalWeightFit fit;
  fit.coef_citers = 4.3848;
  fit.coef_citations = 4.42;
  fit.coef_haspage = 0.8238;
  return fit;
}

double JournalScore(const ScaledJournal &journal, const JournalWeightFit &fit) {
  return fit.coef_citers * journal.citers +
         fit.coef_citations * journal.citations +
         fit.coef_haspage * journal.has_page + fit.intercept;
}

JournalWeightFit FitJournalWeights(const std::vector<ScaledJournal> &journals,
                                   const std::map<std::string, double> &targets,
                                   bool with_intercept) {
  JournalWeightFit fit;
  std::vector<const ScaledJournal *> rows;
  for (const ScaledJournal &j : journals) {
    if (targets.count(j.name)) {
      rows.push_back(&j);
    } else {
      fit.missing_target.push_back(j.name);
    }
  }
  if (rows.size() < 4) {
    throw Error(fmt::format(
        "insufficient data: {} journal(s) with impact factors, need 4",
        rows.size()));
  }
  stats::Matrix design(rows.size(), 3);
  std::vector<double> y;
  for (size_t r = 0; r < rows.size(); ++r) {
    design(r, 0) = rows[r]->citers;
    design(r, 1) = rows[r]->citations;
    design(r, 2) = rows[r]->has_page;
    y.push_back(targets.at(rows[r]->name));
  }
  stats::RegressionResult res;
  try {
    res = stats::LinearRegression(design, y, with_intercept);
  } catch (const stats::RankDeficientError &e) {
    static const char *const kNames[] = {"citers", "citations", "has_page",
                                         "intercept"};
    std::string names;
    for (size_t c : e.columns()) {
      if (!names.empty()) names += ", ";
      names += kNames[std::min<size_t>(c, 3)];
    }
    throw stats::RankDeficientError(
        "rank-deficient design: dependent column(s) " + names, e.columns());
  }
  fit.coef_citers = res.coefficients[0];
  fit.coef_citations = res.coefficients[1];
  fit.coef_haspage = res.coefficients[2];
  fit.intercept = res.intercept;
  fit.residual_norm = res.residual_norm;
  fit.n = rows.size();
  return fit;
}

std::map<std::string, double> LoadImpactFactors(
    std::istream &in, const JournalAliasTable &aliases,
    Diagnostics *diagnostics) {
  const std::vector<std::string> lines = io::ReadLines(in);
  size_t i = 0;
  while (i < lines.size() && io::TrimCopy(lines[i]).empty()) ++i;
  if (i == lines.size()) throw Error("impact factor file is empty");
  const auto header = io::SplitCsvLine(lines[i]);
  if (header.size() < 2 || io::TrimCopy(header[0]) != "journal" ||
      io::TrimCopy(header[1]) != "if5") {
    throw Error("impact factors: expected header \"journal,if5\"");
  }
  std::map<std::string, double> out;
  for (++i; i < lines.size(); ++i) {
    if (io::TrimCopy(lines[i]).empty()) continue;
    const auto fields = io::SplitCsvLine(lines[i]);
    double value = 0.0;
    bool ok = fields.size() >= 2;
    if (ok) {
      const std::string v = io::TrimCopy(fields[1]);
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
      ok = ec == std::errc() && ptr == v.data() + v.size() &&
           std::isfinite(value);
    }
    if (!ok) {
      if (diagnostics) {
        diagnostics->Warn("impact factors",
                          fmt::format("bad row at line {}", i + 1));
      }
      continue;
    }
    auto name = NormalizeJournalName(fields[0], aliases, diagnostics);
    if (!name) continue;
    if (!out.emplace(*name, value).second && diagnostics) {
      diagnostics->Warn(*name, "duplicate impact factor; keeping the first");
    }
  }
  return out;
}

std::vector<JournalRankingEntry> RankJournals(
    const std::map<std::string, JournalStats> &stats,
    const JournalWeightFit &fit) {
  ScoreMap scores;
  for (const ScaledJournal &j : ScaleJournalStats(stats)) {
    scores[j.name] = JournalScore(j, fit);
  }
  std::vector<JournalRankingEntry> out;
  for (const RankingEntry &e : MakeRanking("journals", scores).entries) {
    out.push_back({stats.at(e.entity), e.score, e.rank});
  }
  return out;
}

std::string FormatJournalRankingCsv(
    const std::vector<JournalRankingEntry> &ranking) {
  std::string out = "rank,journal,score,citers,citations,has_page\n";
  for (const JournalRankingEntry &e : ranking) {
    out += fmt::format("{},{},{},{},{},{}\n", e.rank,
                       io::CsvField(e.stats.canonical_name),
                       io::FormatScore(e.score), e.stats.citers,
                       e.stats.citations, e.stats.has_page ? 1 : 0);
  }
  return out;
}

}  // namespace wikirank
