#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polyopt {

using VarId = std::int32_t;

inline bool is_valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto alnum = [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); };
  if (!alpha(name.front())) return false;
  for (char c : name.substr(1))
    if (!alnum(c)) return false;
  return true;
}

/// Interns variable names to dense ids. Ids are contiguous from 0 and the
/// id <-> name mapping is a bijection for the lifetime of the workspace.
/// Interning is the only mutable shared state in the library and is safe
/// under concurrent use; everything downstream works on plain ids.
class Workspace {
 public:
  Workspace() = default;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  VarId intern(std::string_view name) {
    if (!is_valid_variable_name(name))
      throw std::invalid_argument("invalid variable name: '" + std::string(name) + "'");
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    VarId id = static_cast<VarId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  std::optional<VarId> find(std::string_view name) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  // by value: names_ may reallocate under a concurrent intern
  std::string name(VarId id) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (id < 0 || static_cast<std::size_t>(id) >= names_.size())
      throw std::out_of_range("unknown variable id " + std::to_string(id));
    return names_[static_cast<std::size_t>(id)];
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return names_.size();
  }

  std::vector<std::string> names() const {
    std::lock_guard<std::mutex> lock(mu_);
    return names_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<std::string> names_;
  std::map<std::string, VarId, std::less<>> ids_;
};

}  // namespace polyopt
