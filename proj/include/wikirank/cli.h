#ifndef WIKIRANK_CLI_H_
#define WIKIRANK_CLI_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wikirank/diagnostics.h"

namespace wikirank::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitData = 3 };

// Bad flags, missing or unreadable inputs. Exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// The inputs were readable but the data cannot support the request. Exit
// code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

struct IngestOptions {
  fs::path dump;
  std::vector<fs::path> pageviews;  // files or directories
  std::optional<fs::path> types;
  std::string project = "en";
  std::optional<std::string> from;  // YYYYMMDD
  std::optional<std::string> to;
  fs::path out;
};

struct IngestSummary {
  size_t pages = 0;  // article-namespace pages, redirects included
  size_t redirects = 0;
  size_t links = 0;
  size_t citations = 0;
  size_t skipped_pages = 0;  // other namespaces
  uint64_t pageview_records = 0;
  uint64_t skipped_pageview_records = 0;

  std::string ToString() const;
};

IngestSummary Ingest(const IngestOptions &options, Diagnostics &diagnostics);

// Benchmarks restricting the university universe. Without benchmarks every
// University-typed article is used.
struct UniverseOptions {
  std::vector<fs::path> benchmarks;
  std::optional<fs::path> aliases;
  int min_appearances = 2;
};

struct RankOptions {
  fs::path store;
  std::string method;  // links, ratio, views, infobox, combined, journals
  UniverseOptions universe;
  std::optional<fs::path> attribute_groups;
  std::optional<fs::path> journal_aliases;
  std::optional<fs::path> weights_file;
  std::vector<double> weights;  // overrides, in component order
  fs::path out;
};

void Rank(const RankOptions &options, Diagnostics &diagnostics);

struct FitOptions {
  fs::path store;
  std::string method = "combined";  // combined, infobox, journals
  fs::path target;                  // benchmark CSV or impact-factor CSV
  UniverseOptions universe;
  std::optional<fs::path> attribute_groups;
  std::optional<fs::path> journal_aliases;
  bool intercept = false;
  uint64_t seed = 42;
  fs::path out;
};

// Writes the weight file and returns a one-line summary of the fit.
std::string Fit(const FitOptions &options, Diagnostics &diagnostics);

struct CorrelateOptions {
  std::vector<fs::path> inputs;  // ranking or benchmark CSVs
  std::string method = "kendall";
  std::optional<fs::path> subset;  // one entity per line
  std::optional<fs::path> aliases;
  uint64_t seed = 42;
  fs::path out;
};

void Correlate(const CorrelateOptions &options, Diagnostics &diagnostics);

struct ReportOptions {
  fs::path ranking;
  std::optional<fs::path> against;
  int bins = 10;
  fs::path out_dir;  // histogram.csv, gof.txt, scatter.csv
};

// Returns the "chi2=<v> df=<d> p=<p>" line.
std::string Report(const ReportOptions &options, Diagnostics &diagnostics);

// Full command line: parses flags, runs one subcommand, maps errors to exit
// codes. Summaries go to `out`, diagnostics and errors to `err`.
int Run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err);

}  // namespace wikirank::cli

#endif  // WIKIRANK_CLI_H_
