#include "kssvar/rootcount.hpp"

namespace kssvar::rootcount {

std::string to_string(Method method) {
  switch (method) {
    case Method::sturm: return "sturm";
    case Method::sphere_subdivision: return "sphere_subdivision";
    case Method::sphere_subdivision_extended: return "sphere_subdivision_extended";
  }
  return "unknown";
}

RootCountResult count_real_roots(const KssSystem& system, const SubdivisionOptions& options) {
  RootCountResult r = count_system(system, options);
  if (system.m() == 1 && !r.certified && !r.equator_root) return count_univariate(system.equation(0));
  return r;
}

}  // namespace kssvar::rootcount
