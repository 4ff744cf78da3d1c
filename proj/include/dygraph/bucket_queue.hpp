#pragma once

#include <cstdint>
#include <vector>

namespace dygraph {

/// Monotone integer-keyed bucket queue. Keys are small non-negative ints
/// (distance estimates). Extraction scans upward from a floor that is lowered
/// again whenever a smaller key is pushed, so occasional non-monotone pushes
/// (certificate invalidations at already-settled values) stay correct.
class BucketQueue {
 public:
  explicit BucketQueue(std::int64_t max_key = 0) { reset(max_key); }

  void reset(std::int64_t max_key) {
    buckets_.assign(static_cast<std::size_t>(max_key) + 1, {});
    floor_ = 0;
    size_ = 0;
  }

  bool empty() const { return size_ == 0; }

  void push(std::int64_t key, int item) {
    buckets_[static_cast<std::size_t>(key)].push_back(item);
    if (key < floor_) floor_ = key;
    ++size_;
  }

  // Returns (key, item) with the smallest key.
  std::pair<std::int64_t, int> pop() {
    while (buckets_[static_cast<std::size_t>(floor_)].empty()) ++floor_;
    int item = buckets_[static_cast<std::size_t>(floor_)].back();
    buckets_[static_cast<std::size_t>(floor_)].pop_back();
    --size_;
    return {floor_, item};
  }

 private:
  std::vector<std::vector<int>> buckets_;
  std::int64_t floor_ = 0;
  std::size_t size_ = 0;
};

}  // namespace dygraph
