#ifndef NFFORGE_ERRORS_HPP
#define NFFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nfforge {

// Error kinds, grouped by how the CLI maps them to exit codes:
// parse errors -> 2, hypothesis violations / obstructions -> 1,
// numeric failures -> 3.
enum class errc {
  parse,
  dimension_mismatch,
  singular_linear_part,
  mixed_spectrum,
  non_commensurable,
  all_zero,
  not_canonicalizable,
  convergence_failure,
  degree_cap_exceeded,
  not_invariant,
  no_representation,
  not_independent,
  straightening_failed,
  implicit_solve_failed,
  hypothesis_violation,
  obstruction_nonzero,
  transport_failed,
  no_return,
  step_size_underflow,
  left_domain,
  root_not_bracketed,
  internal,
};

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

inline const char* errc_name(errc k) {
  switch (k) {
    case errc::parse: return "parse";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::singular_linear_part: return "singular_linear_part";
    case errc::mixed_spectrum: return "mixed_spectrum";
    case errc::non_commensurable: return "non_commensurable";
    case errc::all_zero: return "all_zero";
    case errc::not_canonicalizable: return "not_canonicalizable";
    case errc::convergence_failure: return "convergence_failure";
    case errc::degree_cap_exceeded: return "degree_cap_exceeded";
    case errc::not_invariant: return "not_invariant";
    case errc::no_representation: return "no_representation";
    case errc::not_independent: return "not_independent";
    case errc::straightening_failed: return "straightening_failed";
    case errc::implicit_solve_failed: return "implicit_solve_failed";
    case errc::hypothesis_violation: return "hypothesis_violation";
    case errc::obstruction_nonzero: return "obstruction_nonzero";
    case errc::transport_failed: return "transport_failed";
    case errc::no_return: return "no_return";
    case errc::step_size_underflow: return "step_size_underflow";
    case errc::left_domain: return "left_domain";
    case errc::root_not_bracketed: return "root_not_bracketed";
    case errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace nfforge

#endif
