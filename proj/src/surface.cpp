#include "dq/surface.hpp"

#include <json.hpp>

#include "dq/error.hpp"

namespace dq {

using Json = nlohmann::ordered_json;

static void check_topology(const SurfaceTopology& s) {
  if (s.genus < 0) throw DimensionError("genus must be non-negative");
  if (s.boundaries < 1) throw DimensionError("at least one boundary circle is required");
}

CohomologyDims cohomology_dims(const SurfaceTopology& s) {
  check_topology(s);
  const int mid = 2 * s.genus + s.boundaries - 1;
  CohomologyDims d;
  d.absolute = {1, mid, 0};
  d.relative = {0, mid, 1};
  d.boundary = {s.boundaries, s.boundaries};
  return d;
}

DiagonalClassSpec diagonal_class(const SurfaceTopology& s) {
  check_topology(s);
  DiagonalClassSpec spec;
  spec.entries.push_back({"alpha0", "d_beta1", Rational(1)});
  for (int i = 1; i < s.boundaries; ++i) {
    std::string idx = std::to_string(i);
    spec.entries.push_back({"alpha1_" + idx, "d_beta0_" + idx, Rational(1)});
  }
  for (int k = 1; k <= s.genus; ++k) {
    std::string odd = std::to_string(2 * k - 1), even = std::to_string(2 * k);
    spec.entries.push_back({"gamma1_" + odd, "gamma1_" + even, Rational(1)});
    spec.entries.push_back({"gamma1_" + even, "gamma1_" + odd, Rational(-1)});
  }
  return spec;
}

TadpoleReport tadpole_admissible(const SurfaceTopology& s) {
  check_topology(s);
  TadpoleReport r;
  r.euler = 2 - 2 * s.genus - s.boundaries;
  r.admissible = r.euler == 0;
  return r;
}

std::string surface_info_json(const SurfaceTopology& s) {
  CohomologyDims d = cohomology_dims(s);
  DiagonalClassSpec spec = diagonal_class(s);
  TadpoleReport t = tadpole_admissible(s);
  Json j;
  j["format"] = "surface/1";
  j["genus"] = s.genus;
  j["boundaries"] = s.boundaries;
  j["h_surface"] = d.absolute;
  j["h_relative"] = d.relative;
  j["h_boundary"] = d.boundary;
  j["euler"] = t.euler;
  j["tadpole_admissible"] = t.admissible;
  Json entries = Json::array();
  for (const auto& e : spec.entries) {
    Json entry;
    entry["left"] = e.left;
    entry["right"] = e.right;
    entry["coefficient"] = rational_to_string(e.coeff);
    entries.push_back(std::move(entry));
  }
  j["diagonal_class"] = std::move(entries);
  return j.dump(2);
}

}  // namespace dq
