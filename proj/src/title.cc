#include "wikirank/title.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "wikirank/diagnostics.h"

namespace wikirank {

namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr std::array<std::string_view, 14> kNamespaces = {
    "file",     "image",  "category", "template", "wikipedia",
    "wp",       "help",   "portal",   "user",     "talk",
    "media",    "special", "mediawiki", "module"};

}  // namespace

std::optional<std::string> TryCanonicalizeTitle(std::string_view raw) {
  const size_t hash = raw.find('#');
  if (hash != std::string_view::npos) raw = raw.substr(0, hash);
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    const unsigned char c = static_cast<unsigned char>(ch == '_' ? ' ' : ch);
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c));
  }
  if (out.empty()) return std::nullopt;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string CanonicalizeTitle(std::string_view raw) {
  auto title = TryCanonicalizeTitle(raw);
  if (!title) throw Error("empty title");
  return *std::move(title);
}

std::string PercentDecode(std::string_view encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] == '%' && i + 2 < encoded.size()) {
      const int hi = HexValue(encoded[i + 1]);
      const int lo = HexValue(encoded[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(encoded[i]);
  }
  return out;
}

bool HasNonArticleNamespace(std::string_view target) {
  while (!target.empty() && IsSpace(static_cast<unsigned char>(target[0]))) {
    target.remove_prefix(1);
  }
  if (!target.empty() && target[0] == ':') target.remove_prefix(1);
  const size_t colon = target.find(':');
  if (colon == std::string_view::npos) return false;
  std::string prefix;
  for (char c : target.substr(0, colon)) {
    if (IsSpace(static_cast<unsigned char>(c)) || c == '_') continue;
    prefix.push_back(static_cast<char>(
        std::tolower(static_cast<unsigned char>(c))));
  }
  if (prefix.size() > 5 && prefix.ends_with("talk")) return true;
  return std::find(kNamespaces.begin(), kNamespaces.end(), prefix) !=
         kNamespaces.end();
}

bool IsWordByte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool ContainsBounded(std::string_view text, std::string_view term) {
  if (term.empty()) return false;
  size_t pos = text.find(term);
  while (pos != std::string_view::npos) {
    const size_t end = pos + term.size();
    const bool left_ok =
        pos == 0 || !IsWordByte(static_cast<unsigned char>(text[pos - 1]));
    const bool right_ok =
        end == text.size() || !IsWordByte(static_cast<unsigned char>(text[end]));
    if (left_ok && right_ok) return true;
    pos = text.find(term, pos + 1);
  }
  return false;
}

}  // namespace wikirank
