#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <utility>

namespace hoopflux {

/// Strongly typed string identifier. Distinct tags do not convert into each
/// other, which keeps segment, vertex and face names apart.
template <class Tag>
class Name {
 public:
  Name() = default;
  Name(std::string value) : value_(std::move(value)) {}
  Name(const char* value) : value_(value) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name& a, const Name& b) { return a.value_ <=> b.value_; }

  friend std::ostream& operator<<(std::ostream& os, const Name& name) { return os << name.value_; }

 private:
  std::string value_;
};

using SegmentId = Name<struct SegmentTag>;
using VertexId = Name<struct VertexTag>;
using FaceId = Name<struct FaceTag>;

}  // namespace hoopflux
