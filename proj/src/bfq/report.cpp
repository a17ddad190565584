#include "bfq/report.hpp"

#include <nlohmann/json.hpp>

namespace bfq {

using ordered_json = nlohmann::ordered_json;

bool RunReport::all_pass() const {
  for (auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void RunReport::add_check(const std::string& name, bool pass, const std::string& detail) {
  checks.push_back({name, pass, detail});
}

void RunReport::add_value(const std::string& key, const std::string& value) {
  values.emplace_back(key, value);
}

std::string RunReport::to_json(int indent) const {
  ordered_json j;
  j["command"] = command;
  j["inputs"] = ordered_json::object();
  for (auto& [k, v] : input_digests) j["inputs"][k] = v;
  j["checks"] = ordered_json::array();
  for (auto& c : checks) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["status"] = c.pass ? "pass" : "fail";
    if (!c.detail.empty()) jc["detail"] = c.detail;
    j["checks"].push_back(jc);
  }
  j["values"] = ordered_json::object();
  for (auto& [k, v] : values) j["values"][k] = v;
  if (seed) j["seed"] = *seed;
  j["pass"] = all_pass();
  j["timing_ms"] = timing_ms ? ordered_json(*timing_ms) : ordered_json(nullptr);
  return j.dump(indent);
}

std::string RunReport::pretty() const {
  std::string s;
  for (auto& c : checks) {
    s += (c.pass ? "[PASS] " : "[FAIL] ") + c.name;
    if (!c.detail.empty()) s += "  (" + c.detail + ")";
    s += "\n";
  }
  for (auto& [k, v] : values) s += k + ": " + v + "\n";
  return s;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace bfq
