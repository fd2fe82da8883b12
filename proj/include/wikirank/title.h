#ifndef WIKIRANK_TITLE_H_
#define WIKIRANK_TITLE_H_

#include <optional>
#include <string>
#include <string_view>

namespace wikirank {

// Canonical page title: section anchor dropped, underscores to spaces,
// whitespace runs collapsed and trimmed, first character upper-cased.
// Throws Error("empty title") when nothing remains.
std::string CanonicalizeTitle(std::string_view raw);

// Same, but returns nullopt instead of throwing.
std::optional<std::string> TryCanonicalizeTitle(std::string_view raw);

// Decodes %XX escapes; '+' is left alone as in pagecount dumps.
std::string PercentDecode(std::string_view encoded);

// Namespace prefixes ("File:", "Category:", ...) that mark non-article links.
bool HasNonArticleNamespace(std::string_view target);

bool IsWordByte(unsigned char c);

// True when `term` occurs in `text` with a non-word byte or text edge on
// both sides.
bool ContainsBounded(std::string_view text, std::string_view term);

}  // namespace wikirank

#endif  // WIKIRANK_TITLE_H_
