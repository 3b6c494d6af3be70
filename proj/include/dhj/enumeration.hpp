#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace dhj {

// m-element subsets of {1..n} in increasing combination order.
void for_each_combination(int n, int m,
                          const std::function<void(const std::vector<int>&)>& fn);

// Counts through words over {1..base} of a fixed length, maintaining the
// weighted rank sum_p (digit_p - 1) * places[p] and the letter counts.
class Odometer {
 public:
  Odometer(int length, int base, std::vector<std::uint64_t> places);

  bool valid() const { return valid_; }
  std::uint64_t rank() const { return rank_; }
  const std::vector<int>& digits() const { return digits_; }
  const std::vector<int>& counts() const { return counts_; }
  void advance();

 private:
  int base_;
  bool valid_ = true;
  std::uint64_t rank_ = 0;
  std::vector<int> digits_;
  std::vector<std::uint64_t> places_;
  std::vector<int> counts_;
};

}  // namespace dhj
