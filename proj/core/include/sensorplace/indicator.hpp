#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sensorplace {

/// Binary vector over the nodes: sensor placements and sensor attacks.
class Indicator {
 public:
  Indicator() = default;
  explicit Indicator(int size) : bits_(size, 0) {}
  explicit Indicator(std::vector<std::uint8_t> bits);

  static Indicator from_support(int size, std::span<const int> nodes);
  static Indicator from_mask(int size, std::uint64_t mask);
  /// Parses a string of '0'/'1' characters, node 0 first.
  static Indicator parse(std::string_view text);

  int size() const { return static_cast<int>(bits_.size()); }
  bool operator[](int node) const { return bits_[node] != 0; }
  bool test(int node) const;
  void set(int node, bool on = true);

  std::vector<int> support() const;
  int count() const;
  bool none() const { return count() == 0; }
  std::uint64_t mask() const;

  /// Nodes in this set but not in `removed` (mu \ nu).
  Indicator minus(const Indicator& removed) const;
  bool subset_of(const Indicator& other) const;

  /// Dot product with an integer cost vector of the same length.
  std::int64_t cost(std::span<const std::int64_t> costs) const;

  std::string to_string() const;

  friend bool operator==(const Indicator&, const Indicator&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace sensorplace
