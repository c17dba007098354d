#include "wpa/errors.hpp"

namespace wpa {

const char* errc_name(errc c) {
  switch (c) {
    case errc::unsupported_order: return "UnsupportedOrder";
    case errc::domain_error: return "DomainError";
    case errc::grid_too_small: return "GridTooSmall";
    case errc::bracket_failure: return "BracketFailure";
    case errc::non_convergence: return "NonConvergence";
    case errc::out_of_range: return "OutOfRange";
    case errc::loss_of_orthogonality: return "LossOfOrthogonality";
    case errc::degree_out_of_range: return "DegreeOutOfRange";
    case errc::irls_non_convergence: return "IrlsNonConvergence";
    case errc::norm_diverges: return "NormDiverges";
    case errc::hypothesis_fail: return "HypothesisFail";
    case errc::precondition_fail: return "PreconditionFail";
    case errc::order_unavailable: return "OrderUnavailable";
    case errc::syntax_error: return "SyntaxError";
    case errc::unknown_function: return "UnknownFunction";
    case errc::non_differentiable: return "NonDifferentiable";
    case errc::bad_config: return "BadConfig";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace wpa
