#pragma once

#include <string>

#include "proxkkt/errors.hpp"

namespace proxkkt::internal {

/// Re-raises the in-flight solver error with the iteration index attached,
/// preserving the concrete exception type.
[[noreturn]] inline void rethrow_at_iteration(int k) {
  const std::string at = " (at iteration " + std::to_string(k) + ")";
  try {
    throw;
  } catch (const SingularSystem& e) {
    throw SingularSystem(std::string(e.what()) + at);
  } catch (const DegenerateConstraintGradient& e) {
    throw DegenerateConstraintGradient(std::string(e.what()) + at);
  } catch (const NoConvergence& e) {
    throw NoConvergence(std::string(e.what()) + at);
  } catch (const ActiveSetCycle& e) {
    throw ActiveSetCycle(std::string(e.what()) + at);
  } catch (const EvaluationFailure& e) {
    throw EvaluationFailure(e.label(), std::string(e.what()) + at);
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + at);
  }
}

}  // namespace proxkkt::internal
