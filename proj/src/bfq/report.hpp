#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bfq {

/// Machine-readable run report. Serialization is deterministic: fixed key
/// order, exact fractions as strings, no timing unless explicitly enabled.
struct RunReport {
  std::vector<std::string> command;
  std::map<std::string, std::string> input_digests;
  struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> values;  // ordered key/value pairs
  std::optional<std::uint64_t> seed;
  std::optional<double> timing_ms;

  bool all_pass() const;
  void add_check(const std::string& name, bool pass, const std::string& detail = "");
  void add_value(const std::string& key, const std::string& value);

  std::string to_json(int indent = 2) const;
  std::string pretty() const;
};

/// FNV-1a 64-bit digest, hex-encoded; used for input fingerprints.
std::string fnv1a_hex(const std::string& data);

}  // namespace bfq
