#include "wikirank/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "wikirank/corpus.h"
#include "wikirank/io.h"
#include "wikirank/journals.h"
#include "wikirank/rankers.h"
#include "wikirank/stats.h"

namespace wikirank::cli {
namespace {

void RequireReadable(const fs::path &path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw InputError("cannot read " + path.string());
}

std::ifstream OpenInput(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  return in;
}

// Runs a loader, reporting its failures as input errors.
template <typename Fn>
auto Loading(const fs::path &path, Fn fn) {
  try {
    return fn();
  } catch (const InputError &) {
    throw;
  } catch (const Error &e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

double ParseNumber(std::string_view text, const std::string &what) {
  const std::string t = io::TrimCopy(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() ||
      !std::isfinite(v)) {
    throw InputError(fmt::format("bad number '{}' in {}", t, what));
  }
  return v;
}

std::vector<fs::path> ExpandFiles(const std::vector<fs::path> &paths) {
  std::vector<fs::path> files;
  for (const fs::path &p : paths) {
    RequireReadable(p);
    if (fs::is_directory(p)) {
      std::vector<fs::path> inside;
      for (const auto &entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file()) inside.push_back(entry.path());
      }
      std::sort(inside.begin(), inside.end());
      files.insert(files.end(), inside.begin(), inside.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

CorpusStore LoadStore(const fs::path &path) {
  RequireReadable(path);
  return Loading(path, [&] { return CorpusStore::Load(path); });
}

AliasTable LoadAliases(const std::optional<fs::path> &path,
                       Diagnostics &diagnostics) {
  if (!path) return {};
  std::ifstream in = OpenInput(*path);
  return LoadAliasTable(in, &diagnostics);
}

std::vector<BenchmarkRanking> LoadBenchmarks(
    const std::vector<fs::path> &paths, const AliasTable &aliases,
    Diagnostics &diagnostics) {
  std::vector<BenchmarkRanking> out;
  for (const fs::path &p : paths) {
    std::ifstream in = OpenInput(p);
    out.push_back(Loading(p, [&] {
      return LoadBenchmark(in, p.stem().string(), aliases, &diagnostics);
    }));
  }
  return out;
}

Universe BuildUniverse(const CorpusStore &store, const UniverseOptions &opts,
                       Diagnostics &diagnostics) {
  for (const fs::path &p : opts.benchmarks) RequireReadable(p);
  Universe universe;
  if (opts.benchmarks.empty()) {
    for (const auto &[title, kind] : store.kinds()) {
      if (kind == EntityKind::kUniversity && store.FindArticle(title)) {
        universe.insert(title);
      }
    }
  } else {
    const AliasTable aliases = LoadAliases(opts.aliases, diagnostics);
    const auto benchmarks =
        LoadBenchmarks(opts.benchmarks, aliases, diagnostics);
    if (opts.min_appearances < 1) {
      throw InputError("--min-appearances must be at least 1");
    }
    UniverseReport report =
        FilterUniverse(store, benchmarks, opts.min_appearances);
    for (const auto &[bench, name] : report.unmatched) {
      diagnostics.Warn(bench, "no corpus match for " + name);
    }
    for (const std::string &name : report.not_university) {
      diagnostics.Warn(name, "benchmark entry is not typed University");
    }
    universe = std::move(report.entities);
  }
  if (universe.empty()) throw DataError("empty universe after filtering");
  return universe;
}

std::vector<AttributeGroup> LoadGroups(const std::optional<fs::path> &path,
                                       Diagnostics &diagnostics) {
  if (!path) return DefaultAttributeGroups();
  std::ifstream in = OpenInput(*path);
  return LoadAttributeGroups(in, &diagnostics);
}

JournalAliasTable LoadJournalAliasFile(const std::optional<fs::path> &path,
                                       Diagnostics &diagnostics) {
  if (!path) return DefaultJournalAliases();
  std::ifstream in = OpenInput(*path);
  return LoadJournalAliases(in, DefaultJournalAliases(), &diagnostics);
}

ScoreMap ScoresOf(const RankingList &ranking) {
  ScoreMap out;
  for (const RankingEntry &e : ranking.entries) out[e.entity] = e.score;
  return out;
}

std::vector<Component> InfoboxParts(const CorpusStore &store,
                                    const Universe &universe,
                                    const std::vector<AttributeGroup> &groups) {
  const InfoboxComponents raw =
      ComputeInfoboxComponents(store, universe, groups);
  return ScaleComponents({{"faculty", raw.faculty},
                          {"alumni", raw.alumni},
                          {"visibility", raw.visibility},
                          {"other", raw.other}},
                         universe);
}

std::vector<Component> CombinedParts(const CorpusStore &store,
                                     const Universe &universe,
                                     const std::vector<AttributeGroup> &groups,
                                     Diagnostics &diagnostics) {
  return ScaleComponents(
      {{"links", IncomingLinkScores(store, universe, &diagnostics)},
       {"views", PageviewScores(store, universe, &diagnostics)},
       {"infobox", ScoresOf(RankInfobox(store, universe, groups,
                                        DefaultInfoboxWeights()))}},
      universe);
}

WeightVector ChooseWeights(const RankOptions &opts,
                           const std::vector<std::string> &ids,
                           WeightVector fallback) {
  if (opts.weights_file) {
    std::ifstream in = OpenInput(*opts.weights_file);
    return Loading(*opts.weights_file, [&] { return LoadWeightVector(in); });
  }
  if (opts.weights.empty()) return fallback;
  if (opts.weights.size() != ids.size()) {
    throw InputError(fmt::format("--weights needs {} values ({})", ids.size(),
                                 fmt::join(ids, ",")));
  }
  std::vector<std::pair<std::string, double>> named;
  for (size_t i = 0; i < ids.size(); ++i) {
    named.emplace_back(ids[i], opts.weights[i]);
  }
  try {
    return WeightVector(std::move(named));
  } catch (const Error &e) {
    throw InputError(std::string("--weights: ") + e.what());
  }
}

JournalWeightFit LoadJournalCoefficients(const fs::path &path) {
  std::ifstream in = OpenInput(path);
  JournalWeightFit fit;
  for (const auto &row : io::ReadTsv(in)) {
    if (row.size() < 2) throw InputError(path.string() + ": bad row");
    const std::string key = io::TrimCopy(row[0]);
    const double v = ParseNumber(row[1], path.string());
    if (key == "citers") {
      fit.coef_citers = v;
    } else if (key == "citations") {
      fit.coef_citations = v;
    } else if (key == "has_page") {
      fit.coef_haspage = v;
    } else if (key == "intercept") {
      fit.intercept = v;
    }
  }
  return fit;
}

std::string FormatJournalCoefficients(const JournalWeightFit &fit) {
  return fmt::format("citers\t{}\ncitations\t{}\nhas_page\t{}\nintercept\t{}\n",
                     fit.coef_citers, fit.coef_citations, fit.coef_haspage,
                     fit.intercept);
}

// A CSV with a header row; columns addressed by name.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int Column(std::initializer_list<const char *> names) const {
    for (const char *name : names) {
      for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
      }
    }
    return -1;
  }
};

Table ReadTable(const fs::path &path) {
  std::ifstream in = OpenInput(path);
  Table t;
  for (const std::string &line : io::ReadLines(in)) {
    if (io::TrimCopy(line).empty()) continue;
    auto fields = io::SplitCsvLine(line);
    for (auto &f : fields) f = io::TrimCopy(f);
    if (t.header.empty()) {
      for (auto &f : fields) {
        std::transform(f.begin(), f.end(), f.begin(),
                       [](unsigned char c) { return std::tolower(c); });
      }
      t.header = std::move(fields);
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  if (t.header.empty()) throw InputError(path.string() + " is empty");
  return t;
}

// entity -> value of `value_names` column, in file order.
std::vector<std::pair<std::string, double>> ReadColumn(
    const fs::path &path, std::initializer_list<const char *> value_names,
    const AliasTable &aliases, Diagnostics &diagnostics) {
  const Table t = ReadTable(path);
  const int name_col = t.Column({"entity", "name", "journal"});
  const int value_col = t.Column(value_names);
  if (name_col < 0 || value_col < 0) {
    throw InputError(path.string() + ": missing entity or value column");
  }
  std::vector<std::pair<std::string, double>> out;
  std::set<std::string> seen;
  for (const auto &row : t.rows) {
    if (row.size() <= static_cast<size_t>(std::max(name_col, value_col))) {
      diagnostics.Warn(path.filename().string(), "short row skipped");
      continue;
    }
    auto name = TryCanonicalizeTitle(row[name_col]);
    if (!name) continue;
    if (auto it = aliases.find(*name); it != aliases.end()) *name = it->second;
    if (!seen.insert(*name).second) {
      diagnostics.Warn(path.filename().string(), "duplicate entry " + *name);
      continue;
    }
    out.emplace_back(*name, ParseNumber(row[value_col], path.string()));
  }
  return out;
}

}  // namespace

std::string IngestSummary::ToString() const {
  return fmt::format(
      "pages={} redirects={} links={} citations={} skipped_pages={} "
      "pageview_records={} skipped_pageview_records={}",
      pages, redirects, links, citations, skipped_pages, pageview_records,
      skipped_pageview_records);
}

IngestSummary Ingest(const IngestOptions &options, Diagnostics &diagnostics) {
  RequireReadable(options.dump);
  if (options.types) RequireReadable(*options.types);
  const std::vector<fs::path> view_files = ExpandFiles(options.pageviews);

  TypeMap types;
  if (options.types) {
    std::ifstream in = OpenInput(*options.types);
    types = LoadTypeMap(in, &diagnostics);
  }

  IngestSummary summary;
  std::vector<ParsedPage> pages;
  {
    std::ifstream in = OpenInput(options.dump);
    Loading(options.dump, [&] {
      DumpReader reader(in);
      while (auto raw = reader.Next()) {
        if (raw->namespace_id != 0) {
          ++summary.skipped_pages;
          continue;
        }
        pages.push_back(ParseWikitext(raw->title, raw->text, &diagnostics));
      }
      return 0;
    });
  }
  CorpusStore store = BuildStore(std::move(pages), types, &diagnostics);

  PageviewAggregator views(store, options.project,
                           PeriodFilter{options.from, options.to},
                           &diagnostics);
  for (const fs::path &file : view_files) {
    std::ifstream in = OpenInput(file);
    views.AddStream(in, file.filename().string());
  }
  const PageviewTotals &totals = views.totals();
  store.set_views(totals.views);
  store.Save(options.out);

  summary.pages = store.pages().size();
  summary.redirects = store.redirect_count();
  summary.links = store.link_count();
  summary.citations = store.citation_count();
  summary.pageview_records = totals.accepted_records;
  summary.skipped_pageview_records = totals.skipped_unknown +
                                     totals.skipped_project +
                                     totals.skipped_period + totals.malformed;
  return summary;
}

void Rank(const RankOptions &options, Diagnostics &diagnostics) {
  static const std::set<std::string> kMethods = {
      "links", "ratio", "views", "infobox", "combined", "journals"};
  if (!kMethods.count(options.method)) {
    throw InputError("unknown method '" + options.method + "'");
  }
  if (options.weights_file) RequireReadable(*options.weights_file);
  const CorpusStore store = LoadStore(options.store);

  if (options.method == "journals") {
    const auto stats = AggregateJournalStats(
        store, LoadJournalAliasFile(options.journal_aliases, diagnostics),
        &diagnostics);
    if (stats.empty()) throw DataError("empty universe after filtering");
    const JournalWeightFit fit = options.weights_file
                                     ? LoadJournalCoefficients(*options.weights_file)
                                     : PublishedJournalWeights();
    io::WriteFileAtomic(options.out,
                        FormatJournalRankingCsv(RankJournals(stats, fit)));
    return;
  }

  const Universe universe = BuildUniverse(store, options.universe, diagnostics);
  RankingList ranking;
  if (options.method == "links") {
    ranking = RankIncomingLinks(store, universe, &diagnostics);
  } else if (options.method == "ratio") {
    ranking = RankInOutRatio(store, universe, &diagnostics);
  } else if (options.method == "views") {
    ranking = RankPageviews(store, universe, &diagnostics);
  } else if (options.method == "infobox") {
    const WeightVector w =
        ChooseWeights(options, {"faculty", "alumni", "visibility", "other"},
                      DefaultInfoboxWeights());
    ranking = RankInfobox(
        store, universe, LoadGroups(options.attribute_groups, diagnostics), w);
  } else {
    const WeightVector w =
        ChooseWeights(options, {"links", "views", "infobox"},
                      WeightVector({{"links", 1}, {"views", 1}, {"infobox", 1}}));
    ranking = CombineRankings(
        CombinedParts(store, universe,
                      LoadGroups(options.attribute_groups, diagnostics),
                      diagnostics),
        w, "combined", &diagnostics);
  }
  io::WriteFileAtomic(options.out, FormatRankingCsv(ranking));
}

std::string Fit(const FitOptions &options, Diagnostics &diagnostics) {
  if (options.method != "combined" && options.method != "infobox" &&
      options.method != "journals") {
    throw InputError("unknown fit method '" + options.method + "'");
  }
  RequireReadable(options.target);
  const CorpusStore store = LoadStore(options.store);

  if (options.method == "journals") {
    const JournalAliasTable aliases =
        LoadJournalAliasFile(options.journal_aliases, diagnostics);
    std::ifstream in = OpenInput(options.target);
    const auto targets = Loading(options.target, [&] {
      return LoadImpactFactors(in, aliases, &diagnostics);
    });
    const auto scaled =
        ScaleJournalStats(AggregateJournalStats(store, aliases, &diagnostics));
    JournalWeightFit fit;
    try {
      fit = FitJournalWeights(scaled, targets, options.intercept);
    } catch (const Error &e) {
      throw DataError(e.what());
    }
    io::WriteFileAtomic(options.out, FormatJournalCoefficients(fit));
    return fmt::format("residual_norm={:.6f} n={} missing_target={}",
                       fit.residual_norm, fit.n, fit.missing_target.size());
  }

  const Universe universe = BuildUniverse(store, options.universe, diagnostics);
  const AliasTable aliases = LoadAliases(options.universe.aliases, diagnostics);
  const BenchmarkRanking target =
      LoadBenchmarks({options.target}, aliases, diagnostics).front();
  const auto groups = LoadGroups(options.attribute_groups, diagnostics);
  const std::vector<Component> parts =
      options.method == "infobox"
          ? InfoboxParts(store, universe, groups)
          : CombinedParts(store, universe, groups, diagnostics);
  stats::SimplexConfig config;
  config.seed = options.seed;
  WeightFit fit = [&] {
    try {
      return FitComponentWeights(parts, target, config);
    } catch (const Error &e) {
      throw DataError(e.what());
    }
  }();
  io::WriteFileAtomic(options.out, FormatWeightVector(fit.weights));
  return fmt::format("tau={:.6f} n={} converged={}", fit.tau, fit.n,
                     fit.converged ? "true" : "false");
}

void Correlate(const CorrelateOptions &options, Diagnostics &diagnostics) {
  if (options.inputs.size() < 2) {
    throw InputError("correlate needs at least two inputs");
  }
  for (const fs::path &p : options.inputs) RequireReadable(p);
  if (options.subset) RequireReadable(*options.subset);
  stats::CorrelationMethod method;
  try {
    method = stats::ParseCorrelationMethod(options.method);
  } catch (const Error &e) {
    throw InputError(e.what());
  }
  const AliasTable aliases = LoadAliases(options.aliases, diagnostics);

  std::optional<std::set<std::string>> subset;
  if (options.subset) {
    std::ifstream in = OpenInput(*options.subset);
    subset.emplace();
    for (const std::string &line : io::ReadLines(in)) {
      const std::string t = io::TrimCopy(line);
      if (t.empty() || t.front() == '#') continue;
      auto name = TryCanonicalizeTitle(t);
      if (!name) continue;
      if (auto it = aliases.find(*name); it != aliases.end()) *name = it->second;
      subset->insert(*name);
    }
  }

  std::vector<std::string> labels;
  std::vector<std::map<std::string, double>> columns;
  std::set<std::string> universe;
  for (const fs::path &p : options.inputs) {
    std::map<std::string, double> col;
    for (const auto &[name, rank] :
         ReadColumn(p, {"rank"}, aliases, diagnostics)) {
      if (subset && !subset->count(name)) continue;
      col[name] = rank;
      universe.insert(name);
    }
    labels.push_back(p.stem().string());
    columns.push_back(std::move(col));
  }

  using Json = nlohmann::ordered_json;
  Json pairs = Json::array();
  for (size_t a = 0; a < columns.size(); ++a) {
    for (size_t b = a + 1; b < columns.size(); ++b) {
      std::vector<double> x, y;
      for (const auto &[name, rank] : columns[a]) {
        auto it = columns[b].find(name);
        if (it == columns[b].end()) continue;
        x.push_back(rank);
        y.push_back(it->second);
      }
      Json cell;
      cell["a"] = labels[a];
      cell["b"] = labels[b];
      cell["method"] = stats::MethodName(method);
      if (x.size() < 3) {
        cell["coefficient"] = nullptr;
        cell["n"] = x.size();
        cell["p_value"] = nullptr;
        cell["reason"] = "insufficient overlap";
      } else {
        try {
          const auto r = stats::Correlate(method, x, y);
          cell["coefficient"] = r.coefficient;
          cell["n"] = r.n;
          cell["p_value"] = r.p_value;
        } catch (const Error &e) {
          cell["coefficient"] = nullptr;
          cell["n"] = x.size();
          cell["p_value"] = nullptr;
          cell["reason"] = e.what();
        }
      }
      pairs.push_back(std::move(cell));
    }
  }
  Json doc;
  doc["pairs"] = std::move(pairs);
  doc["universe_size"] = universe.size();
  doc["filter"] = options.subset
                      ? Json("subset:" + options.subset->filename().string())
                      : Json("none");
  Json inputs = Json::array();
  for (const fs::path &p : options.inputs) inputs.push_back(p.filename().string());
  doc["config"] = {{"method", stats::MethodName(method)},
                   {"inputs", inputs},
                   {"seed", options.seed}};
  io::WriteFileAtomic(options.out, doc.dump(2) + "\n");
}

std::string Report(const ReportOptions &options, Diagnostics &diagnostics) {
  RequireReadable(options.ranking);
  if (options.against) RequireReadable(*options.against);
  if (options.bins < 2) throw InputError("--bins must be at least 2");
  const auto scores =
      ReadColumn(options.ranking, {"score"}, {}, diagnostics);
  std::vector<double> values;
  for (const auto &entry : scores) values.push_back(entry.second);

  stats::GofResult gof;
  try {
    gof = stats::LognormalGof(values, options.bins);
  } catch (const Error &e) {
    throw DataError(e.what());
  }

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw InputError("cannot create " + options.out_dir.string());

  std::string hist = "bin_low,bin_high,observed,expected_lognormal\n";
  for (const stats::GofBin &bin : gof.bins) {
    hist += fmt::format("{},{},{},{}\n", io::FormatScore(bin.low),
                        io::FormatScore(bin.high), bin.observed,
                        io::FormatScore(bin.expected));
  }
  io::WriteFileAtomic(options.out_dir / "histogram.csv", hist);
  std::string summary = fmt::format("chi2={:.6f} df={} p={:.6f}",
                                    gof.statistic, gof.df, gof.p_value);

  if (options.against) {
    const auto other =
        ReadColumn(*options.against, {"score", "rank"}, {}, diagnostics);
    const std::map<std::string, double> b(other.begin(), other.end());
    std::string scatter = "entity,score_a,score_b,ln_score_a\n";
    std::vector<double> ln_a, paired_b;
    for (const auto &[name, a] : scores) {
      auto it = b.find(name);
      if (it == b.end()) continue;
      scatter += fmt::format("{},{},{},{}\n", io::CsvField(name),
                             io::FormatScore(a), io::FormatScore(it->second),
                             a > 0 ? io::FormatScore(std::log(a)) : "");
      if (a > 0) {
        ln_a.push_back(std::log(a));
        paired_b.push_back(it->second);
      }
    }
    io::WriteFileAtomic(options.out_dir / "scatter.csv", scatter);
    // Pearson r of ln(score) against the other column.
    std::string r = "undefined";
    try {
      r = fmt::format("{:.6f}", stats::PearsonR(ln_a, paired_b).coefficient);
    } catch (const Error &e) {
      diagnostics.Warn("log-fit correlation", e.what());
    }
    summary += fmt::format(" log_fit_r={} n={}", r, ln_a.size());
  }
  io::WriteFileAtomic(options.out_dir / "gof.txt", summary + "\n");
  return summary;
}

int Run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Rank universities and journals from a Wikipedia snapshot",
               "wikirank"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  uint64_t seed = 42;
  app.add_flag("--quiet", quiet, "Suppress warnings");
  app.add_option("--seed", seed, "Seed for every random choice (default 42)");

  auto paths = [](const std::vector<std::string> &v) {
    return std::vector<fs::path>(v.begin(), v.end());
  };

  // ingest
  IngestOptions ingest;
  std::string ingest_dump, ingest_out, ingest_types;
  std::vector<std::string> ingest_views;
  std::string from, to;
  auto *ingest_cmd = app.add_subcommand("ingest", "Parse a dump into a store");
  ingest_cmd->add_option("--dump", ingest_dump, "XML or JSON-lines dump")
      ->required();
  ingest_cmd->add_option("--pageviews", ingest_views,
                         "Pagecount files or directories");
  ingest_cmd->add_option("--types", ingest_types, "title<TAB>kind file");
  ingest_cmd->add_option("--project", ingest.project, "Pageview project code");
  ingest_cmd->add_option("--from", from, "First pageview day, YYYYMMDD");
  ingest_cmd->add_option("--to", to, "Last pageview day, YYYYMMDD");
  ingest_cmd->add_option("--out,--store", ingest_out, "Store file to write")
      ->required();

  // rank
  RankOptions rank;
  std::string rank_store, rank_out, rank_aliases, rank_groups, rank_jaliases,
      rank_wfile, rank_weights;
  std::vector<std::string> rank_bench;
  auto *rank_cmd = app.add_subcommand("rank", "Rank entities with one method");
  rank_cmd->add_option("--store", rank_store)->required();
  rank_cmd->add_option("--method", rank.method,
                       "links|ratio|views|infobox|combined|journals")
      ->required();
  rank_cmd->add_option("--benchmark", rank_bench, "Benchmark CSVs (universe)");
  rank_cmd->add_option("--aliases", rank_aliases, "alias<TAB>canonical file");
  rank_cmd->add_option("--min-appearances", rank.universe.min_appearances);
  rank_cmd->add_option("--attribute-groups", rank_groups);
  rank_cmd->add_option("--journal-aliases", rank_jaliases);
  rank_cmd->add_option("--weights-file", rank_wfile, "Fitted weight TSV");
  rank_cmd->add_option("--weights", rank_weights,
                       "Comma-separated weights in component order");
  rank_cmd->add_option("--out", rank_out)->required();

  // fit
  FitOptions fit;
  std::string fit_store, fit_out, fit_target, fit_aliases, fit_groups,
      fit_jaliases;
  std::vector<std::string> fit_bench;
  auto *fit_cmd = app.add_subcommand("fit", "Fit method weights to a target");
  fit_cmd->add_option("--store", fit_store)->required();
  fit_cmd->add_option("--method", fit.method, "combined|infobox|journals");
  fit_cmd->add_option("--target", fit_target,
                      "Benchmark CSV, or impact-factor CSV for journals")
      ->required();
  fit_cmd->add_option("--benchmark", fit_bench, "Benchmark CSVs (universe)");
  fit_cmd->add_option("--aliases", fit_aliases);
  fit_cmd->add_option("--min-appearances", fit.universe.min_appearances);
  fit_cmd->add_option("--attribute-groups", fit_groups);
  fit_cmd->add_option("--journal-aliases", fit_jaliases);
  fit_cmd->add_flag("--intercept", fit.intercept, "Fit an intercept");
  fit_cmd->add_option("--out", fit_out)->required();

  // correlate
  CorrelateOptions corr;
  std::vector<std::string> corr_inputs;
  std::string corr_subset, corr_aliases, corr_out;
  auto *corr_cmd = app.add_subcommand("correlate", "Pairwise rank correlations");
  corr_cmd->add_option("--input", corr_inputs, "Ranking or benchmark CSVs");
  corr_cmd->add_option("--method", corr.method, "kendall|spearman|pearson");
  corr_cmd->add_option("--subset", corr_subset, "Entity list to restrict to");
  corr_cmd->add_option("--aliases", corr_aliases);
  corr_cmd->add_option("--out", corr_out)->required();

  // report
  ReportOptions report;
  std::string rep_ranking, rep_against, rep_out;
  auto *rep_cmd = app.add_subcommand("report", "Distribution and scatter data");
  rep_cmd->add_option("--ranking", rep_ranking)->required();
  rep_cmd->add_option("--against", rep_against, "Second ranking for scatter");
  rep_cmd->add_option("--bins", report.bins);
  rep_cmd->add_option("--out", rep_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Diagnostics diagnostics(quiet ? nullptr : &err);
  auto opt_path = [](const std::string &s) -> std::optional<fs::path> {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
  };
  try {
    if (*ingest_cmd) {
      ingest.dump = ingest_dump;
      ingest.pageviews = paths(ingest_views);
      ingest.types = opt_path(ingest_types);
      if (!from.empty()) ingest.from = from;
      if (!to.empty()) ingest.to = to;
      ingest.out = ingest_out;
      out << Ingest(ingest, diagnostics).ToString() << "\n";
    } else if (*rank_cmd) {
      rank.store = rank_store;
      rank.out = rank_out;
      rank.universe.benchmarks = paths(rank_bench);
      rank.universe.aliases = opt_path(rank_aliases);
      rank.attribute_groups = opt_path(rank_groups);
      rank.journal_aliases = opt_path(rank_jaliases);
      rank.weights_file = opt_path(rank_wfile);
      if (!rank_weights.empty()) {
        for (const std::string &part : io::SplitCsvLine(rank_weights)) {
          rank.weights.push_back(ParseNumber(part, "--weights"));
        }
      }
      Rank(rank, diagnostics);
    } else if (*fit_cmd) {
      fit.store = fit_store;
      fit.out = fit_out;
      fit.target = fit_target;
      fit.universe.benchmarks = paths(fit_bench);
      fit.universe.aliases = opt_path(fit_aliases);
      fit.attribute_groups = opt_path(fit_groups);
      fit.journal_aliases = opt_path(fit_jaliases);
      fit.seed = seed;
      err << Fit(fit, diagnostics) << "\n";
    } else if (*corr_cmd) {
      corr.inputs = paths(corr_inputs);
      corr.subset = opt_path(corr_subset);
      corr.aliases = opt_path(corr_aliases);
      corr.seed = seed;
      corr.out = corr_out;
      Correlate(corr, diagnostics);
    } else if (*rep_cmd) {
      report.ranking = rep_ranking;
      report.against = opt_path(rep_against);
      report.out_dir = rep_out;
      out << Report(report, diagnostics) << "\n";
    }
  } catch (const InputError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DumpParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace wikirank::cli
