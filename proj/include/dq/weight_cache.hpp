#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dq/mc.hpp"

namespace dq {

std::string weight_result_to_json(const WeightResult& r);
WeightResult weight_result_from_json(const std::string& line);

// Append-only JSON-lines store keyed by (graph hash, boundary positions,
// normalization tag).  Doubles are persisted as hex float strings so a
// reloaded record is bit-identical to the one written.  Later lines win on
// key collision; unreadable lines are counted and skipped.
class WeightCache {
 public:
  explicit WeightCache(std::string path);

  std::optional<WeightResult> get(const std::string& hash,
                                  const std::vector<double>& positions,
                                  const std::string& tag = kNormalizationTag) const;
  void put(const WeightResult& r);

  long size() const { return (long)entries_.size(); }
  long corrupt_lines() const { return corrupt_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::map<std::string, WeightResult> entries_;
  long corrupt_ = 0;
};

}  // namespace dq
