#include "sensorplace/indicator.hpp"

#include <algorithm>

#include "sensorplace/errors.hpp"

namespace sensorplace {

Indicator::Indicator(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

Indicator Indicator::from_support(int size, std::span<const int> nodes) {
  Indicator out(size);
  for (int v : nodes) out.set(v);
  return out;
}

Indicator Indicator::from_mask(int size, std::uint64_t mask) {
  if (size > 64) throw SizeError("bit mask supports at most 64 nodes");
  Indicator out(size);
  for (int i = 0; i < size; ++i) out.bits_[i] = (mask >> i) & 1U;
  return out;
}

Indicator Indicator::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(c == '1');
    } else if (c != ',' && c != ' ') {
      throw ArgumentError("indicator must contain only 0/1, got '" +
                          std::string(text) + "'");
    }
  }
  return Indicator(std::move(bits));
}

bool Indicator::test(int node) const {
  if (node < 0 || node >= size()) throw IndexError("indicator index out of range");
  return bits_[node] != 0;
}

void Indicator::set(int node, bool on) {
  if (node < 0 || node >= size()) throw IndexError("indicator index out of range");
  bits_[node] = on ? 1 : 0;
}

std::vector<int> Indicator::support() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

int Indicator::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

std::uint64_t Indicator::mask() const {
  if (size() > 64) throw SizeError("bit mask supports at most 64 nodes");
  std::uint64_t m = 0;
  for (int i = 0; i < size(); ++i) {
    if (bits_[i]) m |= std::uint64_t{1} << i;
  }
  return m;
}

Indicator Indicator::minus(const Indicator& removed) const {
  if (removed.size() != size()) throw ShapeError("indicator lengths differ");
  Indicator out = *this;
  for (int i = 0; i < size(); ++i) {
    if (removed.bits_[i]) out.bits_[i] = 0;
  }
  return out;
}

bool Indicator::subset_of(const Indicator& other) const {
  if (other.size() != size()) throw ShapeError("indicator lengths differ");
  for (int i = 0; i < size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

std::int64_t Indicator::cost(std::span<const std::int64_t> costs) const {
  if (static_cast<int>(costs.size()) != size()) {
    throw ShapeError("cost vector length differs from indicator length");
  }
  std::int64_t total = 0;
  for (int i = 0; i < size(); ++i) {
    if (bits_[i]) total += costs[i];
  }
  return total;
}

std::string Indicator::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace sensorplace
