#pragma once

#include <set>
#include <string>
#include <type_traits>

#include "uavmec/error.hpp"
#include "uavmec/model.hpp"
#include "uavmec/serialize.hpp"

namespace uavmec::detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kConfig, path.empty() ? what : path + ": " + what);
}

// Reads optional fields of one JSON object and rejects keys nobody asked for.
class FieldReader {
 public:
  FieldReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema_error(path_, "expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  std::string at(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void number(const char* key, double& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number()) schema_error(at(key), "expected a number");
    out = v.get<double>();
  }

  template <typename Int>
  void integer(const char* key, Int& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) schema_error(at(key), "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned() || v.get<long long>() >= 0) { out = v.get<Int>(); return; }
      schema_error(at(key), "expected a non-negative integer");
    } else {
      out = v.get<Int>();
    }
  }

  void boolean(const char* key, bool& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) schema_error(at(key), "expected true or false");
    out = v.get<bool>();
  }

  void string(const char* key, std::string& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_string()) schema_error(at(key), "expected a string");
    out = v.get<std::string>();
  }

  void range(const char* key, Range& out) {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      schema_error(at(key), "expected [low, high]");
    out = {v[0].get<double>(), v[1].get<double>()};
  }

  const Json* child(const char* key) {
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) schema_error(at(it.key().c_str()), "unknown key");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace uavmec::detail
