// Copyright 2026 The drcpo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace drcpo::detail {

/// Insert-only open-addressing hash set with linear probing.
template <typename Key, typename Hash>
class FlatSet {
 public:
  explicit FlatSet(std::size_t expected) {
    const std::size_t cap = std::bit_ceil(std::max<std::size_t>(16, expected * 2));
    keys_.resize(cap);
    used_.assign(cap, 0);
    mask_ = cap - 1;
  }

  /// True if `k` was not present.
  bool insert(const Key& k) {
    if ((size_ + 1) * 2 > keys_.size()) grow();
    return place(k);
  }

  bool contains(const Key& k) const {
    for (std::size_t i = Hash{}(k) & mask_;; i = (i + 1) & mask_) {
      if (!used_[i]) return false;
      if (keys_[i] == k) return true;
    }
  }

 private:
  bool place(const Key& k) {
    for (std::size_t i = Hash{}(k) & mask_;; i = (i + 1) & mask_) {
      if (!used_[i]) {
        used_[i] = 1;
        keys_[i] = k;
        ++size_;
        return true;
      }
      if (keys_[i] == k) return false;
    }
  }

  void grow() {
    std::vector<Key> old_keys = std::move(keys_);
    std::vector<std::uint8_t> old_used = std::move(used_);
    keys_.assign(old_keys.size() * 2, Key{});
    used_.assign(old_keys.size() * 2, 0);
    mask_ = keys_.size() - 1;
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_used[i]) place(old_keys[i]);
    }
  }

  std::vector<Key> keys_;
  std::vector<std::uint8_t> used_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace drcpo::detail
