#ifndef DKC_REPORT_HPP
#define DKC_REPORT_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dkc {

enum class Comparison { at_most, greater_than };

struct CheckRecord {
  std::string id;
  std::string property;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::at_most;
  double runtime_ms = 0.0;
};

/// Ordered collection of check outcomes. Records are emitted sorted by id.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  // Pass iff measured <= tolerance (or measured > tolerance); NaN always fails.
  const CheckRecord& record(std::string id, std::string property, double measured, double tolerance,
                            Comparison cmp = Comparison::at_most, double runtime_ms = 0.0) {
    CheckRecord r{std::move(id), std::move(property), false, measured, tolerance, cmp, runtime_ms};
    r.passed = !std::isnan(measured) && (cmp == Comparison::at_most ? measured <= tolerance : measured > tolerance);
    records_.push_back(std::move(r));
    return records_.back();
  }

  /// Times `measure` (returning the measured value) and records the outcome.
  template <class F>
  const CheckRecord& timed(std::string id, std::string property, double tolerance, F&& measure,
                           Comparison cmp = Comparison::at_most) {
    const auto t0 = std::chrono::steady_clock::now();
    const double value = measure();
    const auto t1 = std::chrono::steady_clock::now();
    return record(std::move(id), std::move(property), value, tolerance, cmp,
                  std::chrono::duration<double, std::milli>(t1 - t0).count());
  }

  void set_config(nlohmann::ordered_json cfg) { config_ = std::move(cfg); }
  void add_extra(const std::string& key, nlohmann::ordered_json value) { extra_[key] = std::move(value); }

  const std::string& command() const noexcept { return command_; }
  const std::vector<CheckRecord>& records() const noexcept { return records_; }
  std::size_t passed() const {
    return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const auto& r) { return r.passed; }));
  }
  std::size_t failed() const { return records_.size() - passed(); }
  bool all_passed() const { return failed() == 0; }

  nlohmann::ordered_json to_json(bool include_runtime = true) const {
    std::vector<const CheckRecord*> sorted;
    for (const auto& r : records_) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](const CheckRecord* a, const CheckRecord* b) { return a->id < b->id; });
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    double total_ms = 0.0;
    for (const CheckRecord* r : sorted) {
      nlohmann::ordered_json j;
      j["id"] = r->id;
      j["property"] = r->property;
      j["status"] = r->passed ? "pass" : "fail";
      j["measured"] = r->measured;
      j["comparison"] = r->comparison == Comparison::at_most ? "<=" : ">";
      j["tolerance"] = r->tolerance;
      if (include_runtime) j["runtime_ms"] = r->runtime_ms;
      total_ms += r->runtime_ms;
      checks.push_back(std::move(j));
    }
    nlohmann::ordered_json out;
    out["command"] = command_;
    out["config"] = config_;
    out["checks"] = std::move(checks);
    for (const auto& [k, v] : extra_.items()) out[k] = v;
    out["summary"] = {{"total", records_.size()}, {"passed", passed()}, {"failed", failed()}};
    if (include_runtime) out["summary"]["runtime_ms"] = total_ms;
    return out;
  }

 private:
  std::string command_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json extra_ = nlohmann::ordered_json::object();
  std::vector<CheckRecord> records_;
};

/// Removes every runtime_ms field, leaving the deterministic part of a report.
inline nlohmann::ordered_json strip_runtime(nlohmann::ordered_json j) {
  if (j.is_object()) {
    j.erase("runtime_ms");
    for (auto& [k, v] : j.items()) v = strip_runtime(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_runtime(v);
  }
  return j;
}

}  // namespace dkc

#endif  // DKC_REPORT_HPP
