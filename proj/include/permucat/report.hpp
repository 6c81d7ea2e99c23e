#pragma once

#include <string>
#include <vector>

namespace permucat {

enum class Status { pass, fail, info };

struct Check {
  std::string id;
  std::string ref;  // short name of the claim being checked
  Status status = Status::pass;
  std::string witness;
};

struct Report {
  std::vector<Check> checks;
  // named JSON documents emitted alongside the checks
  std::vector<std::pair<std::string, std::string>> attachments;

  void add(std::string id, std::string ref, bool ok, std::string witness = {});
  void note(std::string id, std::string ref, std::string witness);
  void merge(const Report& other);
  void attach(std::string name, std::string json_text);
  bool ok() const;
  int failures() const;
  const Check* find(const std::string& id) const;
  // sorted by id, schema permucat/1
  std::string json(const std::string& command) const;
};

}  // namespace permucat
