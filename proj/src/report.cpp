#include "report.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

namespace pqn {

Check Check::exact(const std::string& name, bool ok, const std::string& witness) {
  Check c;
  c.name = name;
  c.status = ok ? CheckStatus::ExactPass : CheckStatus::Fail;
  if (!ok) c.witness = witness;
  return c;
}

Check Check::numeric(const std::string& name, double residual, double tol,
                     const std::string& witness) {
  Check c;
  c.name = name;
  c.residual = residual;
  bool ok = std::isfinite(residual) && residual <= tol;
  c.status = ok ? CheckStatus::NumericPass : CheckStatus::Fail;
  if (!ok) c.witness = witness;
  return c;
}

Check Check::info(const std::string& name, const std::string& note) {
  Check c;
  c.name = name;
  c.status = CheckStatus::Info;
  c.note = note;
  return c;
}

Check Check::group(const std::string& name) {
  Check c;
  c.name = name;
  c.status = CheckStatus::ExactPass;
  return c;
}

Check& Check::addChild(Check c) {
  children.push_back(std::move(c));
  return children.back();
}

bool Check::passed() const {
  if (status == CheckStatus::Fail) return false;
  for (const auto& c : children)
    if (!c.passed()) return false;
  return true;
}

void Check::setGroupStatus() {
  for (auto& c : children) c.setGroupStatus();
  if (!children.empty() && status != CheckStatus::Info)
    status = passed() ? CheckStatus::ExactPass : CheckStatus::Fail;
}

namespace {

std::string fmtDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void renderNode(const Check& c, int depth, std::string& out) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  switch (c.status) {
    case CheckStatus::ExactPass: out += "[PASS] "; break;
    case CheckStatus::NumericPass: out += "[pass] "; break;
    case CheckStatus::Fail: out += "[FAIL] "; break;
    case CheckStatus::Info: out += "[info] "; break;
  }
  out += c.name;
  if (c.residual) out += "  (residual " + fmtDouble(*c.residual) + ")";
  if (!c.note.empty()) out += "  -- " + c.note;
  if (!c.witness.empty()) out += "  witness: " + c.witness;
  out += "\n";
  for (const auto& ch : c.children) renderNode(ch, depth + 1, out);
}

nlohmann::json nodeJson(const Check& c, bool withTimings) {
  nlohmann::json j;
  j["name"] = c.name;
  switch (c.status) {
    case CheckStatus::ExactPass: j["status"] = "exact-pass"; break;
    case CheckStatus::NumericPass: j["status"] = "numeric-pass"; break;
    case CheckStatus::Fail: j["status"] = "fail"; break;
    case CheckStatus::Info: j["status"] = "info"; break;
  }
  if (c.residual) j["residual"] = fmtDouble(*c.residual);
  if (!c.witness.empty()) j["witness"] = c.witness;
  if (!c.note.empty()) j["note"] = c.note;
  if (withTimings) j["elapsed_ms"] = c.elapsedMs;
  if (!c.children.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& ch : c.children) arr.push_back(nodeJson(ch, withTimings));
    j["checks"] = arr;
  }
  return j;
}

}  // namespace

std::string Report::renderText() const {
  std::string out;
  if (!invocation.empty()) out += "# " + invocation + "\n";
  renderNode(root, 0, out);
  out += passed() ? "verdict: PASS\n" : "verdict: FAIL\n";
  return out;
}

std::string Report::renderJson(bool withTimings) const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["invocation"] = invocation;
  j["verdict"] = passed() ? "pass" : "fail";
  j["report"] = nodeJson(root, withTimings);
  return j.dump(2) + "\n";
}

Check timed(const std::function<Check()>& fn) {
  auto start = std::chrono::steady_clock::now();
  Check c = fn();
  c.elapsedMs = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return c;
}

namespace {
std::mutex g_opMutex;
std::map<std::string, long> g_opCounts;
}  // namespace

void countOp(const std::string& name) {
  std::lock_guard<std::mutex> lock(g_opMutex);
  ++g_opCounts[name];
}

std::vector<std::pair<std::string, long>> opCounts() {
  std::lock_guard<std::mutex> lock(g_opMutex);
  return {g_opCounts.begin(), g_opCounts.end()};
}

void resetOpCounts() {
  std::lock_guard<std::mutex> lock(g_opMutex);
  g_opCounts.clear();
}

}  // namespace pqn
