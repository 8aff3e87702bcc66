#include "dq/weight_cache.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dq/error.hpp"

namespace dq {

namespace {

using nlohmann::ordered_json;

std::string hex_double(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", d);
  return buf;
}

double parse_hex(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw FormatError(std::string("missing hex field ") + key);
  const std::string& s = j.at(key).get_ref<const std::string&>();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw FormatError(std::string("bad hex float in ") + key);
  return v;
}

std::string cache_key(const std::string& hash,
                      const std::vector<double>& positions,
                      const std::string& tag) {
  std::ostringstream os;
  os << hash << '|' << tag;
  for (double p : positions) os << '|' << hex_double(p);
  return os.str();
}

}  // namespace

std::string weight_result_to_json(const WeightResult& r) {
  ordered_json j;
  j["format"] = "weight/1";
  j["hash"] = r.graph_hash;
  j["normalization"] = r.normalization;
  j["positions"] = r.positions;
  ordered_json ph = ordered_json::array();
  for (double p : r.positions) ph.push_back(hex_double(p));
  j["positions_hex"] = ph;
  j["estimate"] = r.estimate;
  j["estimate_hex"] = hex_double(r.estimate);
  j["std_error"] = r.std_error;
  j["std_error_hex"] = hex_double(r.std_error);
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["rejected_fraction"] = r.rejected_fraction;
  j["rejected_fraction_hex"] = hex_double(r.rejected_fraction);
  j["structural_zero"] = r.structural_zero;
  j["reason"] = r.reason;
  j["converged"] = r.converged;
  return j.dump();
}

WeightResult weight_result_from_json(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw FormatError(std::string("bad weight record: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "weight/1")
    throw FormatError("not a weight/1 record");
  WeightResult r;
  try {
    r.graph_hash = j.at("hash").get<std::string>();
    r.normalization = j.at("normalization").get<std::string>();
    for (auto& s : j.at("positions_hex")) {
      char* end = nullptr;
      const std::string& t = s.get_ref<const std::string&>();
      double v = std::strtod(t.c_str(), &end);
      if (end == t.c_str() || *end != '\0') throw FormatError("bad position");
      r.positions.push_back(v);
    }
    r.estimate = parse_hex(j, "estimate_hex");
    r.std_error = parse_hex(j, "std_error_hex");
    r.samples = j.at("samples").get<long>();
    r.seed = j.at("seed").get<uint64_t>();
    r.rejected_fraction = parse_hex(j, "rejected_fraction_hex");
    r.structural_zero = j.at("structural_zero").get<bool>();
    r.reason = j.at("reason").get<std::string>();
    r.converged = j.at("converged").get<bool>();
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("bad weight record: ") + e.what());
  }
  return r;
}

WeightCache::WeightCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      WeightResult r = weight_result_from_json(line);
      entries_[cache_key(r.graph_hash, r.positions, r.normalization)] = r;
    } catch (const FormatError&) {
      corrupt_++;
    }
  }
}

std::optional<WeightResult> WeightCache::get(
    const std::string& hash, const std::vector<double>& positions,
    const std::string& tag) const {
  auto it = entries_.find(cache_key(hash, positions, tag));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void WeightCache::put(const WeightResult& r) {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw FormatError("cannot open cache file: " + path_);
  out << weight_result_to_json(r) << '\n';
  entries_[cache_key(r.graph_hash, r.positions, r.normalization)] = r;
}

}  // namespace dq
