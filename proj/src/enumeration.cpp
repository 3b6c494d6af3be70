#include "dhj/enumeration.hpp"

#include <stdexcept>

namespace dhj {

void for_each_combination(int n, int m,
                          const std::function<void(const std::vector<int>&)>& fn) {
  if (m < 0 || m > n) throw std::invalid_argument("combination size out of range");
  std::vector<int> J(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) J[static_cast<size_t>(i)] = i + 1;
  while (true) {
    fn(J);
    int i = m - 1;
    while (i >= 0 && J[static_cast<size_t>(i)] == n - (m - 1 - i)) --i;
    if (i < 0) break;
    ++J[static_cast<size_t>(i)];
    for (int j = i + 1; j < m; ++j) J[static_cast<size_t>(j)] = J[static_cast<size_t>(j - 1)] + 1;
  }
}

Odometer::Odometer(int length, int base, std::vector<std::uint64_t> places)
    : base_(base),
      digits_(static_cast<size_t>(length), 1),
      places_(std::move(places)),
      counts_(static_cast<size_t>(base), 0) {
  if (base < 1) throw std::invalid_argument("odometer base must be positive");
  if (places_.size() != static_cast<size_t>(length))
    throw std::invalid_argument("odometer places/length mismatch");
  counts_[0] = length;
}

void Odometer::advance() {
  for (size_t p = 0; p < digits_.size(); ++p) {
    int& dig = digits_[p];
    --counts_[static_cast<size_t>(dig - 1)];
    if (dig < base_) {
      ++dig;
      rank_ += places_[p];
      ++counts_[static_cast<size_t>(dig - 1)];
      return;
    }
    rank_ -= static_cast<std::uint64_t>(base_ - 1) * places_[p];
    dig = 1;
    ++counts_[0];
  }
  valid_ = false;  // wrapped past the last word
}

}  // namespace dhj
