#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace pnucleus {

// Min-priority queue for peeling: small integer keys, pop order is
// (key ascending, id ascending). Keys inserted while draining must not fall
// below the current minimum; the peeling loops guarantee that by clamping
// recomputed keys at the active level.
class BucketQueue {
 public:
  void push(std::uint32_t id, int key) {
    grow(key);
    buckets_[static_cast<std::size_t>(key)].insert(id);
    ++size_;
  }

  void update(std::uint32_t id, int old_key, int new_key) {
    buckets_[static_cast<std::size_t>(old_key)].erase(id);
    grow(new_key);
    buckets_[static_cast<std::size_t>(new_key)].insert(id);
    if (static_cast<std::size_t>(new_key) < cursor_)
      cursor_ = static_cast<std::size_t>(new_key);
  }

  std::optional<std::pair<std::uint32_t, int>> pop_min() {
    if (size_ == 0) return std::nullopt;
    while (cursor_ < buckets_.size() && buckets_[cursor_].empty()) ++cursor_;
    std::uint32_t id = *buckets_[cursor_].begin();
    buckets_[cursor_].erase(buckets_[cursor_].begin());
    --size_;
    return std::pair{id, static_cast<int>(cursor_)};
  }

  bool empty() const { return size_ == 0; }

 private:
  void grow(int key) {
    if (static_cast<std::size_t>(key) >= buckets_.size())
      buckets_.resize(static_cast<std::size_t>(key) + 1);
  }

  std::vector<std::set<std::uint32_t>> buckets_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
};

}  // namespace pnucleus
