// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

namespace lysa {

using ValueId = std::uint32_t;

/// Set of abstract value ids, stored as a growable bitset.
class ValueSet {
  public:
    ValueSet() = default;

    bool insert(ValueId v) {
        const std::size_t w = v / 64;
        if (w >= words_.size()) {
            words_.resize(w + 1, 0);
        }
        const std::uint64_t bit = std::uint64_t{1} << (v % 64);
        if ((words_[w] & bit) != 0) {
            return false;
        }
        words_[w] |= bit;
        return true;
    }

    bool erase(ValueId v) {
        const std::size_t w = v / 64;
        if (w >= words_.size()) {
            return false;
        }
        const std::uint64_t bit = std::uint64_t{1} << (v % 64);
        const bool had = (words_[w] & bit) != 0;
        words_[w] &= ~bit;
        return had;
    }

    [[nodiscard]] bool contains(ValueId v) const {
        const std::size_t w = v / 64;
        return w < words_.size() && (words_[w] >> (v % 64) & 1U) != 0;
    }

    [[nodiscard]] bool empty() const {
        for (auto w : words_) {
            if (w != 0) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] std::size_t size() const {
        std::size_t n = 0;
        for (auto w : words_) {
            n += static_cast<std::size_t>(std::popcount(w));
        }
        return n;
    }

    /// Adds every element of `other`; returns whether anything was new.
    bool unite(const ValueSet& other) {
        if (other.words_.size() > words_.size()) {
            words_.resize(other.words_.size(), 0);
        }
        bool changed = false;
        for (std::size_t i = 0; i < other.words_.size(); ++i) {
            const std::uint64_t merged = words_[i] | other.words_[i];
            changed = changed || merged != words_[i];
            words_[i] = merged;
        }
        return changed;
    }

    [[nodiscard]] bool intersects(const ValueSet& other) const {
        const std::size_t n = std::min(words_.size(), other.words_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if ((words_[i] & other.words_[i]) != 0) {
                return true;
            }
        }
        return false;
    }

    /// Intersection test restricted to ids below `limit`.
    [[nodiscard]] bool intersects_below(const ValueSet& other, ValueId limit) const {
        const std::size_t n = std::min({words_.size(), other.words_.size(), std::size_t{limit} / 64 + 1});
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t w = words_[i] & other.words_[i];
            if (i == limit / 64) {
                w &= (std::uint64_t{1} << (limit % 64)) - 1;
            }
            if (w != 0) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] bool subset_of(const ValueSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            const std::uint64_t theirs = i < other.words_.size() ? other.words_[i] : 0;
            if ((words_[i] & ~theirs) != 0) {
                return false;
            }
        }
        return true;
    }

    /// Calls `f(id)` for every element with id >= `from`, in increasing order.
    template <class F>
    void for_each(F&& f, ValueId from = 0) const {
        for (std::size_t i = from / 64; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            if (i == from / 64) {
                w &= ~((std::uint64_t{1} << (from % 64)) - 1);
            }
            while (w != 0) {
                const int b = std::countr_zero(w);
                f(static_cast<ValueId>(i * 64 + static_cast<std::size_t>(b)));
                w &= w - 1;
            }
        }
    }

    [[nodiscard]] std::vector<ValueId> to_vector() const {
        std::vector<ValueId> out;
        for_each([&](ValueId v) { out.push_back(v); });
        return out;
    }

    bool operator==(const ValueSet& other) const { return subset_of(other) && other.subset_of(*this); }

  private:
    std::vector<std::uint64_t> words_;
};

} // namespace lysa
