#include "permucat/report.hpp"

#include <algorithm>

#include <json.hpp>

namespace permucat {

void Report::add(std::string id, std::string ref, bool ok, std::string witness) {
  checks.push_back({std::move(id), std::move(ref), ok ? Status::pass : Status::fail,
                    std::move(witness)});
}

void Report::note(std::string id, std::string ref, std::string witness) {
  checks.push_back({std::move(id), std::move(ref), Status::info, std::move(witness)});
}

void Report::merge(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  attachments.insert(attachments.end(), other.attachments.begin(), other.attachments.end());
}

void Report::attach(std::string name, std::string json_text) {
  attachments.emplace_back(std::move(name), std::move(json_text));
}

bool Report::ok() const { return failures() == 0; }

int Report::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                        [](const Check& c) { return c.status == Status::fail; }));
}

const Check* Report::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string Report::json(const std::string& command) const {
  auto sorted = checks;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Check& a, const Check& b) { return a.id < b.id; });
  nlohmann::ordered_json j;
  j["schema"] = "permucat/1";
  j["command"] = command;
  j["passed"] = ok();
  j["failures"] = failures();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : sorted) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["paperRef"] = c.ref;
    e["status"] = c.status == Status::pass ? "pass" : c.status == Status::fail ? "fail" : "info";
    if (!c.witness.empty()) e["witness"] = c.witness;
    arr.push_back(e);
  }
  j["checks"] = arr;
  if (!attachments.empty()) {
    auto att = attachments;
    std::stable_sort(att.begin(), att.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    nlohmann::ordered_json a = nlohmann::ordered_json::object();
    for (const auto& [name, text] : att) a[name] = nlohmann::ordered_json::parse(text);
    j["attachments"] = a;
  }
  return j.dump(2) + "\n";
}

}  // namespace permucat
