#ifndef WIKIRANK_WIKITEXT_H_
#define WIKIRANK_WIKITEXT_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wikirank/diagnostics.h"

namespace wikirank {

struct RawPage {
  std::string title;
  int namespace_id = 0;
  std::string text;
};

struct Infobox {
  std::string template_name;  // lower-case
  // Keys lower-cased with spaces turned into underscores; values verbatim.
  std::map<std::string, std::string> attributes;

  bool operator==(const Infobox &) const = default;
};

struct CitationRef {
  std::string template_name;  // one of CitationTemplateNames()
  std::string journal_name_raw;
  std::string citing_title;

  bool operator==(const CitationRef &) const = default;
};

struct ParsedPage {
  std::string title;
  bool is_redirect = false;
  std::optional<std::string> redirect_target;
  std::vector<Infobox> infoboxes;
  std::set<std::string> outgoing_links;
  std::vector<CitationRef> citations;
  std::string plain_text;

  bool operator==(const ParsedPage &) const = default;
};

// "Citation", "Cite journal", "Vancite journal", "Vcite journal".
const std::vector<std::string> &CitationTemplateNames();

// Normalizes an infobox attribute key: trim, lower-case, whitespace runs to
// a single underscore.
std::string NormalizeAttributeKey(std::string_view key);

// Parses one page body. Never throws on malformed markup; problems are
// reported through `diagnostics` as "WARN <title>: <message>".
ParsedPage ParseWikitext(std::string_view title, std::string_view text,
                         Diagnostics *diagnostics = nullptr);

// Link targets ([[target]] / [[target|label]]) found in a fragment, in
// order of appearance, canonicalized and without namespace links. Used to
// resolve references inside infobox values.
std::vector<std::string> ExtractLinkTargets(std::string_view text);

class DumpParseError : public Error {
 public:
  DumpParseError(const std::string &message, uint64_t byte_offset,
                 size_t page_index)
      : Error(message), byte_offset_(byte_offset), page_index_(page_index) {}
  uint64_t byte_offset() const { return byte_offset_; }
  size_t page_index() const { return page_index_; }

 private:
  uint64_t byte_offset_;
  size_t page_index_;
};

// Streaming reader over a MediaWiki XML export (page/title/ns/revision/text)
// or a JSON-lines file with {title, ns, text} records. The format is picked
// from the first non-whitespace byte. Only the current page is buffered.
class DumpReader {
 public:
  enum class Format { kXml, kJsonLines, kEmpty };

  explicit DumpReader(std::istream &in);

  // Returns the next page, or nullopt at end of input. Throws
  // DumpParseError on malformed or truncated input.
  std::optional<RawPage> Next();

  Format format() const { return format_; }
  size_t pages_read() const { return pages_read_; }

 private:
  std::optional<RawPage> NextXml();
  std::optional<RawPage> NextJson();
  bool Fill();
  [[noreturn]] void Fail(const std::string &message) const;

  std::istream &in_;
  Format format_ = Format::kEmpty;
  std::string buffer_;
  size_t pos_ = 0;           // read position inside buffer_
  uint64_t consumed_ = 0;    // bytes dropped from the front of buffer_
  size_t pages_read_ = 0;
  bool eof_ = false;
};

// Reads a whole dump into memory.
std::vector<RawPage> ParseDump(std::istream &in);

}  // namespace wikirank

#endif  // WIKIRANK_WIKITEXT_H_
