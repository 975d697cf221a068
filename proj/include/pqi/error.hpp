#ifndef PQI_ERROR_HPP
#define PQI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pqi {

enum class Errc {
  OrphanPeptide = 10,
  DuplicateSpectrum = 11,
  InvalidProbability = 12,
  MalformedRow = 13,
  MalformedFasta = 14,
  EmptyReference = 15,
  ZeroMaximum = 16,
  Degenerate = 17,
  IterationLimit = 18,
  InvalidSpec = 19,
  MismatchedReference = 20,
  InvalidConfig = 21,
  IoFailure = 22,
};

/// All recoverable failures surface as this exception; the CLI maps the
/// code to a stable process exit code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }
  int exit_code() const { return static_cast<int>(code_); }

 private:
  Errc code_;
};

const char* errc_name(Errc code);

}  // namespace pqi

#endif
