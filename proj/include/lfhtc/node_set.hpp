#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace lfhtc {

// Set of dense node indices. Indices below 64 live in one inline word, so
// the census workloads (d <= 64) never touch the heap; larger indices spill
// into extra words.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<std::size_t> items) {
    for (auto i : items) insert(i);
  }

  static NodeSet range(std::size_t n) {
    NodeSet s;
    for (std::size_t i = 0; i < n; ++i) s.insert(i);
    return s;
  }

  static NodeSet from_word(std::uint64_t w) {
    NodeSet s;
    s.w0_ = w;
    return s;
  }

  void insert(std::size_t i) { word_ref(i / 64) |= bit(i); }

  void erase(std::size_t i) {
    if (i / 64 < num_words()) word_ref(i / 64) &= ~bit(i);
  }

  bool contains(std::size_t i) const { return (word(i / 64) & bit(i)) != 0; }

  std::size_t size() const {
    std::size_t n = static_cast<std::size_t>(std::popcount(w0_));
    for (auto w : rest_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const {
    return w0_ == 0 && std::all_of(rest_.begin(), rest_.end(), [](auto w) { return w == 0; });
  }

  // First word; exact for sets whose elements are all < 64.
  std::uint64_t low_word() const { return w0_; }

  NodeSet& operator|=(const NodeSet& o) {
    for (std::size_t i = 0; i < o.num_words(); ++i) word_ref(i) |= o.word(i);
    return *this;
  }
  NodeSet& operator&=(const NodeSet& o) {
    for (std::size_t i = 0; i < num_words(); ++i) word_ref(i) &= o.word(i);
    return *this;
  }
  // Set difference.
  NodeSet& operator-=(const NodeSet& o) {
    const std::size_t n = std::min(num_words(), o.num_words());
    for (std::size_t i = 0; i < n; ++i) word_ref(i) &= ~o.word(i);
    return *this;
  }

  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }

  bool intersects(const NodeSet& o) const {
    const std::size_t n = std::min(num_words(), o.num_words());
    for (std::size_t i = 0; i < n; ++i)
      if (word(i) & o.word(i)) return true;
    return false;
  }

  bool subset_of(const NodeSet& o) const {
    for (std::size_t i = 0; i < num_words(); ++i)
      if (word(i) & ~o.word(i)) return false;
    return true;
  }

  friend bool operator==(const NodeSet& a, const NodeSet& b) {
    const std::size_t n = std::max(a.num_words(), b.num_words());
    for (std::size_t i = 0; i < n; ++i)
      if (a.word(i) != b.word(i)) return false;
    return true;
  }

  // Elements in ascending order.
  std::vector<std::size_t> to_vector() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < num_words(); ++wi) {
      std::uint64_t w = word(wi);
      while (w) {
        const auto b = static_cast<std::size_t>(std::countr_zero(w));
        f(wi * 64 + b);
        w &= w - 1;
      }
    }
  }

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::size_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::size_t*;
    using reference = std::size_t;

    iterator() = default;
    iterator(const NodeSet* s, std::size_t wi) : set_(s), wi_(wi) { settle(); }

    std::size_t operator*() const {
      return wi_ * 64 + static_cast<std::size_t>(std::countr_zero(cur_));
    }
    iterator& operator++() {
      cur_ &= cur_ - 1;
      if (cur_ == 0) {
        ++wi_;
        settle();
      }
      return *this;
    }
    iterator operator++(int) {
      auto tmp = *this;
      ++*this;
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) {
      return a.wi_ == b.wi_ && a.cur_ == b.cur_;
    }

   private:
    void settle() {
      for (; wi_ < set_->num_words(); ++wi_) {
        cur_ = set_->word(wi_);
        if (cur_) return;
      }
      wi_ = set_->num_words();
      cur_ = 0;
    }
    const NodeSet* set_ = nullptr;
    std::size_t wi_ = 0;
    std::uint64_t cur_ = 0;
  };

  iterator begin() const { return iterator(this, 0); }
  iterator end() const { return iterator(this, num_words()); }

 private:
  static constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << (i % 64); }

  std::size_t num_words() const { return 1 + rest_.size(); }

  std::uint64_t word(std::size_t i) const {
    if (i == 0) return w0_;
    return i - 1 < rest_.size() ? rest_[i - 1] : 0;
  }

  std::uint64_t& word_ref(std::size_t i) {
    if (i == 0) return w0_;
    if (i - 1 >= rest_.size()) rest_.resize(i, 0);
    return rest_[i - 1];
  }

  std::uint64_t w0_ = 0;
  std::vector<std::uint64_t> rest_;
};

// Calls f(subset) for every k-subset of `items` in lexicographic order of
// positions. Stops early and returns true as soon as f returns true.
template <typename F>
bool for_each_k_subset(const std::vector<std::size_t>& items, std::size_t k, F&& f) {
  const std::size_t n = items.size();
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    NodeSet s;
    for (auto i : idx) s.insert(items[i]);
    if (f(s)) return true;
    if (k == 0) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace lfhtc
