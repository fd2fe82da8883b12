#ifndef WIKIRANK_IO_H_
#define WIKIRANK_IO_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace wikirank::io {

// Whole-file read; throws Error naming the path when it cannot be opened.
std::string ReadFile(const std::filesystem::path &path);

// Writes to "<path>.tmp" and renames over `path`.
void WriteFileAtomic(const std::filesystem::path &path,
                     std::string_view content);

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Quotes a field when it contains a comma, quote, or newline.
std::string CsvField(std::string_view field);

std::vector<std::string> SplitTsvLine(std::string_view line);

// Reads the lines of a text stream, dropping trailing '\r'.
std::vector<std::string> ReadLines(std::istream &in);

// Lines of a TSV config file with blank lines and '#' comments removed.
std::vector<std::vector<std::string>> ReadTsv(std::istream &in);

std::string TrimCopy(std::string_view s);

// Fixed six-decimal rendering used by every score column.
std::string FormatScore(double value);

}  // namespace wikirank::io

#endif  // WIKIRANK_IO_H_
