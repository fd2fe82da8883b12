#include "wikirank/wikitext.h"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>
#include "json.hpp"

#include "wikirank/title.h"

namespace wikirank {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

char Lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool StartsWithNoCase(std::string_view s, size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i) {
    if (Lower(s[pos + i]) != prefix[i]) return false;
  }
  return true;
}

size_t FindNoCase(std::string_view s, std::string_view needle, size_t from) {
  for (size_t i = from; i + needle.size() <= s.size(); ++i) {
    if (StartsWithNoCase(s, i, needle)) return i;
  }
  return std::string_view::npos;
}

// Lower-case, underscores and whitespace runs become one space, trimmed.
std::string NormalizeTemplateName(std::string_view name) {
  std::string out;
  bool pending = false;
  for (char c : Trim(name)) {
    if (IsSpace(c) || c == '_') {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(Lower(c));
  }
  if (out.starts_with("template:")) {
    out = std::string(Trim(std::string_view(out).substr(9)));
  }
  return out;
}

std::string RemoveComments(std::string_view text, std::string_view title,
                           Diagnostics *diag) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t open = text.find("<!--", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    const size_t close = text.find("-->", open + 4);
    if (close == std::string_view::npos) {
      if (diag) diag->Warn(title, "unterminated HTML comment");
      break;
    }
    pos = close + 3;
  }
  return out;
}

struct Span {
  size_t begin;  // offset of the opening "{{" or "[["
  size_t end;    // one past the closing delimiter (or end of text)
  size_t depth;
};

// Structural view of one wikitext fragment with comments already removed.
// `structural` equals the fragment except that <nowiki> spans (tags and
// content) are blanked, so delimiter scanning never sees them.
class Scanner {
 public:
  Scanner(std::string_view text, std::string_view title, Diagnostics *diag)
      : text_(text), structural_(text), literal_(text.size(), false) {
    MaskNowiki();
    ScanPairs('{', '}', &templates_, true, title, diag);
    ScanPairs('[', ']', &links_, false, title, nullptr);
  }

  std::string_view text() const { return text_; }
  const std::string &structural() const { return structural_; }
  const std::vector<Span> &templates() const { return templates_; }
  const std::vector<Span> &links() const { return links_; }
  bool literal(size_t i) const { return literal_[i]; }
  const std::vector<std::pair<size_t, size_t>> &nowiki_tags() const {
    return nowiki_tags_;
  }

  // Splits the body of a template or link at '|' characters that are not
  // nested inside another template or link.
  std::vector<std::string_view> SplitTopLevel(size_t begin, size_t end) const {
    std::vector<std::string_view> parts;
    int braces = 0, brackets = 0;
    size_t start = begin;
    for (size_t i = begin; i < end; ++i) {
      const char c = structural_[i];
      const char next = i + 1 < end ? structural_[i + 1] : '\0';
      if (c == '{' && next == '{') {
        ++braces;
        ++i;
      } else if (c == '}' && next == '}' && braces > 0) {
        --braces;
        ++i;
      } else if (c == '[' && next == '[') {
        ++brackets;
        ++i;
      } else if (c == ']' && next == ']' && brackets > 0) {
        --brackets;
        ++i;
      } else if (c == '|' && braces == 0 && brackets == 0) {
        parts.push_back(text_.substr(start, i - start));
        start = i + 1;
      }
    }
    parts.push_back(text_.substr(start, end - start));
    return parts;
  }

  // Body bounds of a span, excluding its delimiters.
  std::pair<size_t, size_t> Body(const Span &s) const {
    const size_t body_end =
        (s.end >= 2 && s.end <= text_.size() &&
         structural_.compare(s.end - 2, 2, closing_for(s)) == 0)
            ? s.end - 2
            : s.end;
    return {s.begin + 2, std::max(body_end, s.begin + 2)};
  }

 private:
  std::string closing_for(const Span &s) const {
    return structural_[s.begin] == '{' ? "}}" : "]]";
  }

  void MaskNowiki() {
    size_t pos = 0;
    while (true) {
      const size_t open = FindNoCase(text_, "<nowiki", pos);
      if (open == std::string_view::npos) return;
      const size_t gt = text_.find('>', open);
      if (gt == std::string_view::npos) return;
      const size_t after_open = gt + 1;
      Blank(open, after_open);
      nowiki_tags_.emplace_back(open, after_open);
      if (text_[gt - 1] == '/') {  // <nowiki/>
        pos = after_open;
        continue;
      }
      size_t close = FindNoCase(text_, "</nowiki>", after_open);
      const size_t content_end =
          close == std::string_view::npos ? text_.size() : close;
      Blank(after_open, content_end);
      for (size_t i = after_open; i < content_end; ++i) literal_[i] = true;
      if (close == std::string_view::npos) return;
      Blank(close, close + 9);
      nowiki_tags_.emplace_back(close, close + 9);
      pos = close + 9;
    }
  }

  void Blank(size_t from, size_t to) {
    for (size_t i = from; i < to; ++i) structural_[i] = ' ';
  }

  // Unclosed openers are either closed at the end of the text (templates)
  // or dropped (links).
  void ScanPairs(char open_c, char close_c, std::vector<Span> *out,
                 bool close_at_end, std::string_view title,
                 Diagnostics *diag) {
    std::vector<size_t> stack;
    for (size_t i = 0; i + 1 < structural_.size(); ++i) {
      if (structural_[i] == open_c && structural_[i + 1] == open_c) {
        stack.push_back(i);
        ++i;
      } else if (structural_[i] == close_c && structural_[i + 1] == close_c) {
        if (stack.empty()) {
          if (diag) {
            diag->Warn(title, fmt::format("unmatched closing braces at offset "
                                          "{}", i));
          }
        } else {
          const size_t begin = stack.back();
          stack.pop_back();
          out->push_back(Span{begin, i + 2, stack.size()});
        }
        ++i;
      }
    }
    while (close_at_end && !stack.empty()) {
      const size_t begin = stack.back();
      stack.pop_back();
      if (diag) {
        diag->Warn(title, fmt::format("unbalanced braces: template opened at "
                                      "offset {} closed at end of text",
                                      begin));
      }
      out->push_back(Span{begin, structural_.size(), stack.size()});
    }
    std::sort(out->begin(), out->end(), [](const Span &a, const Span &b) {
      return a.begin < b.begin;
    });
  }

  std::string_view text_;
  std::string structural_;
  std::vector<bool> literal_;
  std::vector<std::pair<size_t, size_t>> nowiki_tags_;
  std::vector<Span> templates_;
  std::vector<Span> links_;
};

// Link target part of a link body, or nullopt for namespace links and
// targets that are empty once the anchor is removed.
std::optional<std::string> LinkTarget(const Scanner &scanner,
                                      const Span &link) {
  auto [b, e] = scanner.Body(link);
  const auto parts = scanner.SplitTopLevel(b, e);
  std::string_view target = Trim(parts.front());
  if (HasNonArticleNamespace(target)) return std::nullopt;
  if (!target.empty() && target.front() == ':') target.remove_prefix(1);
  return TryCanonicalizeTitle(target);
}

std::string DecodeEntity(std::string_view s, size_t pos, size_t *consumed) {
  static const std::pair<std::string_view, std::string_view> kEntities[] = {
      {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}};
  for (const auto &[name, value] : kEntities) {
    if (s.compare(pos, name.size(), name) == 0) {
      *consumed = name.size();
      return std::string(value);
    }
  }
  *consumed = 1;
  return std::string(1, s[pos]);
}

// Looks for a <ref ...> element starting at `pos`; returns one past its end.
std::optional<size_t> RefEnd(const Scanner &sc, size_t pos) {
  const std::string &st = sc.structural();
  if (!StartsWithNoCase(st, pos, "<ref")) return std::nullopt;
  const size_t after = pos + 4;
  if (after < st.size() && !(IsSpace(st[after]) || st[after] == '>' ||
                             st[after] == '/')) {
    return std::nullopt;
  }
  const size_t gt = st.find('>', after);
  if (gt == std::string::npos) return std::nullopt;
  if (st[gt - 1] == '/') return gt + 1;
  const size_t close = FindNoCase(st, "</ref>", gt + 1);
  if (close == std::string::npos) return gt + 1;
  return close + 6;
}

// Looks for a generic HTML-ish tag at `pos`; returns one past its '>'.
std::optional<size_t> TagEnd(const std::string &st, size_t pos) {
  if (st[pos] != '<' || pos + 1 >= st.size()) return std::nullopt;
  size_t i = pos + 1;
  if (st[i] == '/') ++i;
  if (i >= st.size() || !std::isalpha(static_cast<unsigned char>(st[i]))) {
    return std::nullopt;
  }
  const size_t gt = st.find('>', i);
  const size_t lt = st.find('<', i);
  if (gt == std::string::npos || (lt != std::string::npos && lt < gt)) {
    return std::nullopt;
  }
  return gt + 1;
}

std::string StripMarkup(std::string_view text);

void AppendPlain(const Scanner &sc, std::string *out) {
  const std::string_view text = sc.text();
  const std::string &st = sc.structural();

  std::vector<Span> top_templates, top_links;
  for (const Span &s : sc.templates()) {
    if (s.depth == 0) top_templates.push_back(s);
  }
  for (const Span &s : sc.links()) {
    if (s.depth == 0) top_links.push_back(s);
  }
  size_t ti = 0, li = 0, ni = 0;
  const auto &nowiki = sc.nowiki_tags();

  size_t i = 0;
  while (i < text.size()) {
    while (ti < top_templates.size() && top_templates[ti].begin < i) ++ti;
    while (li < top_links.size() && top_links[li].begin < i) ++li;
    while (ni < nowiki.size() && nowiki[ni].first < i) ++ni;

    if (ni < nowiki.size() && nowiki[ni].first == i) {
      out->push_back(' ');
      i = nowiki[ni].second;
      continue;
    }
    if (sc.literal(i)) {
      out->push_back(text[i++]);
      continue;
    }
    if (ti < top_templates.size() && top_templates[ti].begin == i) {
      out->push_back(' ');
      i = top_templates[ti].end;
      continue;
    }
    if (li < top_links.size() && top_links[li].begin == i) {
      const Span &link = top_links[li];
      auto [b, e] = sc.Body(link);
      const auto parts = sc.SplitTopLevel(b, e);
      if (!HasNonArticleNamespace(parts.front())) {
        std::string_view shown = parts.size() > 1 ? parts.back() : parts.front();
        shown = Trim(shown);
        if (parts.size() == 1 && !shown.empty() && shown.front() == ':') {
          shown.remove_prefix(1);
        }
        out->append(StripMarkup(shown));
      }
      i = link.end;
      continue;
    }
    if (st[i] == '<') {
      if (auto end = RefEnd(sc, i)) {
        out->push_back(' ');
        i = *end;
        continue;
      }
      if (auto end = TagEnd(st, i)) {
        out->push_back(' ');
        i = *end;
        continue;
      }
    }
    if (st[i] == '\'' && i + 1 < st.size() && st[i + 1] == '\'') {
      while (i < st.size() && st[i] == '\'') ++i;
      continue;
    }
    if (st[i] == '&') {
      size_t consumed = 1;
      out->append(DecodeEntity(text, i, &consumed));
      i += consumed;
      continue;
    }
    out->push_back(text[i++]);
  }
}

std::string CollapseWhitespace(std::string_view s) {
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

std::string StripMarkup(std::string_view text) {
  Scanner sc(text, "", nullptr);
  std::string out;
  AppendPlain(sc, &out);
  return out;
}

// "#REDIRECT [[Target]]" detection on comment-free text.
std::optional<std::string> RedirectTarget(std::string_view text,
                                          std::string_view title,
                                          Diagnostics *diag) {
  const std::string_view t = Trim(text);
  if (!StartsWithNoCase(t, 0, "#redirect")) return std::nullopt;
  size_t i = 9;
  while (i < t.size() && (IsSpace(t[i]) || t[i] == ':')) ++i;
  if (t.compare(i, 2, "[[") != 0) {
    if (diag) diag->Warn(title, "#REDIRECT without a link target");
    return std::nullopt;
  }
  const size_t close = t.find("]]", i + 2);
  if (close == std::string_view::npos) {
    if (diag) diag->Warn(title, "#REDIRECT link is not closed");
    return std::nullopt;
  }
  std::string_view target = t.substr(i + 2, close - i - 2);
  target = target.substr(0, target.find('|'));
  target = Trim(target);
  if (!target.empty() && target.front() == ':') target.remove_prefix(1);
  auto canonical = TryCanonicalizeTitle(target);
  if (!canonical && diag) diag->Warn(title, "#REDIRECT to an empty title");
  return canonical;
}

const std::vector<std::pair<std::string, std::string>> &CitationNameTable() {
  static const std::vector<std::pair<std::string, std::string>> kTable = {
      {"citation", "Citation"},
      {"cite journal", "Cite journal"},
      {"vancite journal", "Vancite journal"},
      {"vcite journal", "Vcite journal"},
  };
  return kTable;
}

}  // namespace

const std::vector<std::string> &CitationTemplateNames() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto &[key, name] : CitationNameTable()) names.push_back(name);
    return names;
  }();
  return kNames;
}

std::string NormalizeAttributeKey(std::string_view key) {
  std::string out;
  bool pending = false;
  for (char c : Trim(key)) {
    if (IsSpace(c) || c == '_') {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back('_');
    pending = false;
    out.push_back(Lower(c));
  }
  return out;
}

std::vector<std::string> ExtractLinkTargets(std::string_view text) {
  const std::string clean = RemoveComments(text, "", nullptr);
  Scanner sc(clean, "", nullptr);
  std::vector<std::string> targets;
  for (const Span &link : sc.links()) {
    if (auto target = LinkTarget(sc, link)) targets.push_back(*target);
  }
  return targets;
}

ParsedPage ParseWikitext(std::string_view title, std::string_view text,
                         Diagnostics *diagnostics) {
  ParsedPage page;
  page.title = CanonicalizeTitle(title);

  const std::string clean = RemoveComments(text, page.title, diagnostics);
  if (auto target = RedirectTarget(clean, page.title, diagnostics)) {
    page.is_redirect = true;
    page.redirect_target = std::move(target);
    return page;
  }

  Scanner sc(clean, page.title, diagnostics);

  for (const Span &link : sc.links()) {
    if (auto target = LinkTarget(sc, link)) {
      page.outgoing_links.insert(*std::move(target));
    }
  }

  for (const Span &tpl : sc.templates()) {
    auto [b, e] = sc.Body(tpl);
    const auto parts = sc.SplitTopLevel(b, e);
    const std::string name = NormalizeTemplateName(parts.front());

    if (tpl.depth == 0 && name.starts_with("infobox")) {
      Infobox box;
      box.template_name = name;
      for (size_t p = 1; p < parts.size(); ++p) {
        const size_t eq = parts[p].find('=');
        if (eq == std::string_view::npos) continue;
        std::string key = NormalizeAttributeKey(parts[p].substr(0, eq));
        if (key.empty()) continue;
        box.attributes[std::move(key)] =
            std::string(Trim(parts[p].substr(eq + 1)));
      }
      page.infoboxes.push_back(std::move(box));
      continue;
    }

    for (const auto &[key, canonical_name] : CitationNameTable()) {
      if (name != key) continue;
      std::optional<std::string> journal;
      for (size_t p = 1; p < parts.size(); ++p) {
        const size_t eq = parts[p].find('=');
        if (eq == std::string_view::npos) continue;
        if (NormalizeAttributeKey(parts[p].substr(0, eq)) == "journal") {
          journal = std::string(Trim(parts[p].substr(eq + 1)));
        }
      }
      if (journal && !journal->empty()) {
        page.citations.push_back(
            CitationRef{canonical_name, *std::move(journal), page.title});
      }
      break;
    }
  }

  std::string plain;
  AppendPlain(sc, &plain);
  page.plain_text = CollapseWhitespace(plain);
  return page;
}

DumpReader::DumpReader(std::istream &in) : in_(in) {
  while (true) {
    while (pos_ < buffer_.size() && IsSpace(buffer_[pos_])) ++pos_;
    if (pos_ + 3 <= buffer_.size() &&
        buffer_.compare(pos_, 3, "\xEF\xBB\xBF") == 0) {
      pos_ += 3;
      continue;
    }
    if (pos_ < buffer_.size()) break;
    if (!Fill()) return;
  }
  if (buffer_[pos_] == '<') {
    format_ = Format::kXml;
  } else if (buffer_[pos_] == '{') {
    format_ = Format::kJsonLines;
  } else {
    Fail("unrecognized dump format (expected '<' or '{')");
  }
}

bool DumpReader::Fill() {
  if (eof_) return false;
  if (pos_ > 0) {
    buffer_.erase(0, pos_);
    consumed_ += pos_;
    pos_ = 0;
  }
  constexpr size_t kChunk = 1 << 16;
  const size_t old = buffer_.size();
  buffer_.resize(old + kChunk);
  in_.read(buffer_.data() + old, kChunk);
  const size_t got = static_cast<size_t>(in_.gcount());
  buffer_.resize(old + got);
  if (got < kChunk) eof_ = true;
  return got > 0;
}

void DumpReader::Fail(const std::string &message) const {
  const uint64_t offset = consumed_ + pos_;
  std::string last = pages_read_ == 0
                         ? std::string("none")
                         : std::to_string(pages_read_ - 1);
  throw DumpParseError(
      fmt::format("{} at byte {} (page index {}, last complete page index {})",
                  message, offset, pages_read_, last),
      offset, pages_read_);
}

std::optional<RawPage> DumpReader::Next() {
  switch (format_) {
    case Format::kXml: return NextXml();
    case Format::kJsonLines: return NextJson();
    case Format::kEmpty: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

std::string XmlUnescape(std::string_view s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'},
      {"&apos;", '\''}};
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '&') {
      bool matched = false;
      for (const auto &[name, c] : kEntities) {
        if (s.compare(i, name.size(), name) == 0) {
          out.push_back(c);
          i += name.size() - 1;
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out.push_back(s[i]);
  }
  return out;
}

// Position of "<name" followed by '>', '/', or whitespace, from `from`.
size_t FindOpenTag(std::string_view s, std::string_view name, size_t from) {
  const std::string open = "<" + std::string(name);
  size_t pos = s.find(open, from);
  while (pos != std::string_view::npos) {
    const size_t after = pos + open.size();
    if (after < s.size() &&
        (s[after] == '>' || s[after] == '/' || IsSpace(s[after]))) {
      return pos;
    }
    pos = s.find(open, pos + 1);
  }
  return std::string_view::npos;
}

// Content of the last <name>...</name> element in `s`. Returns false when
// the element is absent; throws via `fail` when it is malformed.
template <typename FailFn>
bool LastElement(std::string_view s, std::string_view name, std::string *out,
                 FailFn fail) {
  size_t pos = FindOpenTag(s, name, 0);
  bool found = false;
  while (pos != std::string_view::npos) {
    const size_t gt = s.find('>', pos);
    if (gt == std::string_view::npos) fail("unterminated <" +
                                            std::string(name) + "> tag");
    if (s[gt - 1] == '/') {
      out->clear();
    } else {
      const std::string close = "</" + std::string(name) + ">";
      const size_t end = s.find(close, gt + 1);
      if (end == std::string_view::npos) {
        fail("missing " + close);
      }
      *out = XmlUnescape(s.substr(gt + 1, end - gt - 1));
    }
    found = true;
    pos = FindOpenTag(s, name, gt);
  }
  return found;
}

}  // namespace

std::optional<RawPage> DumpReader::NextXml() {
  size_t start;
  while ((start = FindOpenTag(buffer_, "page", pos_)) == std::string::npos) {
    if (!Fill()) {
      // Anything left must not be a partial "<page" tag.
      if (buffer_.find("<page", pos_) != std::string::npos) {
        Fail("truncated input inside <page>");
      }
      pos_ = buffer_.size();
      return std::nullopt;
    }
  }
  pos_ = start;
  size_t end;
  while ((end = buffer_.find("</page>", pos_)) == std::string::npos) {
    if (!Fill()) Fail("truncated input: <page> without </page>");
  }
  const std::string_view body =
      std::string_view(buffer_).substr(pos_, end - pos_);
  auto fail = [this](const std::string &m) { Fail("malformed XML: " + m); };

  RawPage page;
  std::string value;
  if (!LastElement(body, "title", &value, fail) || Trim(value).empty()) {
    fail("page without <title>");
  }
  page.title = std::move(value);
  if (LastElement(body, "ns", &value, fail)) {
    try {
      page.namespace_id = std::stoi(std::string(Trim(value)));
    } catch (const std::exception &) {
      fail("non-numeric <ns>");
    }
  }
  if (LastElement(body, "text", &value, fail)) page.text = std::move(value);

  pos_ = end + 7;
  ++pages_read_;
  return page;
}

std::optional<RawPage> DumpReader::NextJson() {
  while (true) {
    size_t nl;
    while ((nl = buffer_.find('\n', pos_)) == std::string::npos) {
      if (!Fill()) break;
    }
    const size_t line_end = nl == std::string::npos ? buffer_.size() : nl;
    const std::string_view line =
        std::string_view(buffer_).substr(pos_, line_end - pos_);
    if (Trim(line).empty()) {
      if (nl == std::string::npos) {
        pos_ = buffer_.size();
        return std::nullopt;
      }
      pos_ = nl + 1;
      continue;
    }
    RawPage page;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      if (!j.is_object()) Fail("JSON line is not an object");
      if (!j.contains("title") || !j["title"].is_string()) {
        Fail("JSON line without a string \"title\"");
      }
      page.title = j["title"].get<std::string>();
      if (Trim(page.title).empty()) Fail("JSON line with an empty title");
      if (j.contains("ns")) page.namespace_id = j["ns"].get<int>();
      if (j.contains("text")) page.text = j["text"].get<std::string>();
    } catch (const nlohmann::json::exception &e) {
      Fail(std::string("malformed JSON line: ") + e.what());
    }
    pos_ = nl == std::string::npos ? buffer_.size() : nl + 1;
    ++pages_read_;
    return page;
  }
}

std::vector<RawPage> ParseDump(std::istream &in) {
  DumpReader reader(in);
  std::vector<RawPage> pages;
  while (auto page = reader.Next()) pages.push_back(*std::move(page));
  return pages;
}

}  // namespace wikirank
