#pragma once

#include <stdexcept>
#include <string>

namespace su2cosets {

// Failure categories surfaced by the library. The CLI maps schema/usage
// kinds to exit code 2 and numerical-degeneracy kinds to exit code 3.
enum class Errc {
  invalid_form,
  rank_ambiguous,
  complex_roots,
  degenerate_quadratic,
  ambiguous_branch,
  inconsistent_completion,
  inconsistent_signs,
  degenerate_tuple,
  negative_discriminant,
  not_in_domain,
  insufficient_samples,
  not_closed,
  unsamplable,
  not_pure,
  index_error,
  schema_error,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_form: return "InvalidForm";
    case Errc::rank_ambiguous: return "RankAmbiguous";
    case Errc::complex_roots: return "ComplexRoots";
    case Errc::degenerate_quadratic: return "DegenerateQuadratic";
    case Errc::ambiguous_branch: return "AmbiguousBranch";
    case Errc::inconsistent_completion: return "InconsistentCompletion";
    case Errc::inconsistent_signs: return "InconsistentSigns";
    case Errc::degenerate_tuple: return "DegenerateTuple";
    case Errc::negative_discriminant: return "NegativeDiscriminant";
    case Errc::not_in_domain: return "NotInDomain";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::not_closed: return "NotClosed";
    case Errc::unsamplable: return "Unsamplable";
    case Errc::not_pure: return "NotPure";
    case Errc::index_error: return "IndexError";
    case Errc::schema_error: return "SchemaError";
  }
  return "UnknownError";
}

class CosetError : public std::runtime_error {
 public:
  CosetError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

  // True for conditions caused by degenerate numerical input rather than
  // malformed requests.
  bool is_degeneracy() const {
    return code_ != Errc::index_error && code_ != Errc::schema_error;
  }

 private:
  Errc code_;
};

}  // namespace su2cosets
