#include "wikirank/diagnostics.h"

namespace wikirank {

void Diagnostics::Warn(std::string_view subject, std::string_view message) {
  std::string line = "WARN ";
  line.append(subject);
  line.append(": ");
  line.append(message);
  if (sink_ != nullptr) *sink_ << line << '\n';
  warnings_.push_back(std::move(line));
}

}  // namespace wikirank
