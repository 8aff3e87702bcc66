#pragma once
#include <json.hpp>

#include "dq/poly.hpp"

namespace dq {

// Term list encoding shared by every tensor format: [e1..ed, num, den] rows.
nlohmann::ordered_json poly_terms_json(const Poly& p);
Poly poly_from_terms_json(const nlohmann::ordered_json& terms, int dim);

}  // namespace dq
