#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace wigner {

using Block = std::vector<int>;
using SetPartition = std::vector<Block>;

// Set partitions of {0, ..., n-1} in restricted-growth-string order.
void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit);

std::vector<SetPartition> set_partitions(int n);

std::uint64_t bell_number(int n);

// Moebius function of the partition lattice from a partition with `blocks` blocks
// up to the top element: (-1)^(b-1) (b-1)!.
long long mobius_coefficient(int blocks);

// Restricted growth string of a sequence: equal values share a label, labels by first appearance.
template <class T>
std::vector<int> restricted_growth_string(const std::vector<T>& values) {
  std::vector<int> rgs(values.size());
  std::vector<T> seen;
  for (std::size_t i = 0; i < values.size(); ++i) {
    int label = -1;
    for (std::size_t s = 0; s < seen.size(); ++s) {
      if (seen[s] == values[i]) {
        label = static_cast<int>(s);
        break;
      }
    }
    if (label < 0) {
      label = static_cast<int>(seen.size());
      seen.push_back(values[i]);
    }
    rgs[i] = label;
  }
  return rgs;
}

}  // namespace wigner
