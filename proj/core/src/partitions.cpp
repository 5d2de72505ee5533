#include "wigner/partitions.hpp"

#include "wigner/error.hpp"

namespace wigner {

void for_each_set_partition(int n, const std::function<void(const SetPartition&)>& visit) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative partition size");
  if (n == 0) {
    visit(SetPartition{});
    return;
  }
  // rgs[i] <= 1 + max(rgs[0..i-1]), rgs[0] = 0
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);
  SetPartition blocks;
  while (true) {
    int block_count = prefix_max[n - 1] + 1;
    blocks.assign(block_count, {});
    for (int i = 0; i < n; ++i) blocks[rgs[i]].push_back(i);
    visit(blocks);

    int i = n - 1;
    while (i > 0 && rgs[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

std::vector<SetPartition> set_partitions(int n) {
  std::vector<SetPartition> out;
  for_each_set_partition(n, [&out](const SetPartition& p) { out.push_back(p); });
  return out;
}

std::uint64_t bell_number(int n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

long long mobius_coefficient(int blocks) {
  long long f = 1;
  for (int i = 2; i < blocks; ++i) f *= i;
  return (blocks % 2 == 1) ? f : -f;
}

}  // namespace wigner
