#include "weylgraph/report.hpp"

#include <algorithm>
#include <sstream>

namespace weylgraph {

void Report::check(const std::string& name, bool passed, Json detail) {
  checks_.push_back({name, passed, std::move(detail)});
}

bool Report::passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

namespace {

void render(std::ostringstream& out, const std::string& indent, const std::string& key, const Json& v) {
  if (v.is_string()) {
    out << indent << key << ": " << v.get<std::string>() << "\n";
  } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_string(); })) {
    out << indent << key << ":\n";
    for (const auto& e : v) out << indent << "  " << e.get<std::string>() << "\n";
  } else if (v.is_array() && !v.empty() &&
             std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_object(); })) {
    out << indent << key << ":\n";
    for (const auto& e : v) out << indent << "  " << e.dump() << "\n";
  } else if (v.is_array() && v.empty()) {
    out << indent << key << ": none\n";
  } else if (v.is_object() && !v.empty()) {
    out << indent << key << ":\n";
    for (const auto& [k, e] : v.items()) render(out, indent + "  ", k, e);
  } else {
    out << indent << key << ": " << v.dump() << "\n";
  }
}

}  // namespace

std::string Report::text() const {
  std::ostringstream out;
  out << command_ << "\n";
  for (const auto& c : checks_) {
    out << (c.passed ? "✓ " : "✗ ") << c.name << "\n";
    if (!c.detail.is_null()) {
      if (c.detail.is_object())
        for (const auto& [k, e] : c.detail.items()) render(out, "    ", k, e);
      else
        render(out, "    ", "detail", c.detail);
    }
  }
  for (const auto& [k, v] : data_.items()) render(out, "", k, v);
  out << (passed() ? "result: passed" : "result: failed") << "\n";
  return out.str();
}

std::string Report::json() const {
  Json j;
  j["schema"] = 1;
  j["command"] = command_;
  j["passed"] = passed();
  j["checks"] = Json::array();
  for (const auto& c : checks_) {
    Json e{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.is_null()) e["detail"] = c.detail;
    j["checks"].push_back(std::move(e));
  }
  j["data"] = data_;
  return j.dump(2) + "\n";
}

Json to_json(const AlgebraElement& a) {
  Json terms = Json::array();
  const Graph& g = a.graph();
  for (const auto& [m, c] : a.terms())
    terms.push_back({{"mu", format_path(g, m.mu)}, {"nu", format_path(g, m.nu)}, {"coeff", c.to_string()}});
  return terms;
}

Json to_json(const IdentityCheck& c) {
  return {{"identity", c.name}, {"word_length", c.word_length}, {"words", c.words}, {"passed", c.passed}};
}

Json to_json(const EventualAutomorphism& h) {
  const Graph& x = *h.source;
  const Graph& y = *h.target;
  Json head = Json::object(), block = Json::object();
  for (const auto& [w, p] : h.head) head[format_path(x, w)] = format_path(y, p);
  for (const auto& [w, e] : h.block) block[format_path(x, w)] = y.edge_name(e);
  return {{"m", h.m},
          {"head_window", h.head_window},
          {"block_offset", h.block_offset},
          {"block_window", h.block_window},
          {"head", head},
          {"block", block}};
}

}  // namespace weylgraph
