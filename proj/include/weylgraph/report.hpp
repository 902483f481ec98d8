#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "weylgraph/algebra.hpp"
#include "weylgraph/dynamics.hpp"

namespace weylgraph {

using Json = nlohmann::ordered_json;

// Verified checks plus the data backing them, rendered as text or JSON.
// Rendering is deterministic: insertion order is kept everywhere.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void check(const std::string& name, bool passed, Json detail = nullptr);
  void set(const std::string& key, Json value) { data_[key] = std::move(value); }
  bool passed() const;

  // "✓ name" / "✗ name" lines, then data; string arrays print one per line.
  std::string text() const;
  // {"schema": 1, "command", "passed", "checks", "data"}.
  std::string json() const;

 private:
  struct Check {
    std::string name;
    bool passed;
    Json detail;
  };
  std::string command_;
  std::vector<Check> checks_;
  Json data_ = Json::object();
};

Json to_json(const AlgebraElement& a);
Json to_json(const IdentityCheck& c);
Json to_json(const EventualAutomorphism& h);

}  // namespace weylgraph
