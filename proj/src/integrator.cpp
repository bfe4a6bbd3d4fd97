#include "contactflow/integrator.hpp"

namespace contactflow {

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::EulerHeun ? "heun" : "midpoint";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "heun") return Scheme::EulerHeun;
  if (name == "midpoint") return Scheme::StratonovichMidpoint;
  throw InputError("unknown scheme '" + std::string(name) + "' (expected heun or midpoint)");
}

}  // namespace contactflow
