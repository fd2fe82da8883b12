#ifndef WIKIRANK_DIAGNOSTICS_H_
#define WIKIRANK_DIAGNOSTICS_H_

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wikirank {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Collects non-fatal warnings. Every warning is kept in memory and, when a
// sink is attached, also written as a "WARN <subject>: <message>" line.
class Diagnostics {
 public:
  Diagnostics() = default;
  explicit Diagnostics(std::ostream *sink) : sink_(sink) {}

  void Warn(std::string_view subject, std::string_view message);

  const std::vector<std::string> &warnings() const { return warnings_; }
  size_t count() const { return warnings_.size(); }
  void set_sink(std::ostream *sink) { sink_ = sink; }

 private:
  std::ostream *sink_ = nullptr;
  std::vector<std::string> warnings_;
};

}  // namespace wikirank

#endif  // WIKIRANK_DIAGNOSTICS_H_
