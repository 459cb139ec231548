#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mclump {

// Set of integers in [0, n), packed one bit per element into 64-bit words.
// All binary operations require equal sizes. Unused tail bits stay zero.
class Bitset {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Bitset() = default;
    explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const {
        assert(i < n_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i) {
        assert(i < n_);
        words_[i >> 6] |= std::uint64_t(1) << (i & 63);
    }

    void reset(std::size_t i) {
        assert(i < n_);
        words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
    }

    void clear() { words_.assign(words_.size(), 0); }

    void set_all() {
        words_.assign(words_.size(), ~std::uint64_t(0));
        trim();
    }

    void flip_all() {
        for (auto& w : words_) w = ~w;
        trim();
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    bool intersects(const Bitset& o) const {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & o.words_[k]) return true;
        return false;
    }

    bool is_subset_of(const Bitset& o) const {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k]) return false;
        return true;
    }

    Bitset& operator&=(const Bitset& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }

    Bitset& operator|=(const Bitset& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }

    // Removes every element of o from this set.
    Bitset& operator-=(const Bitset& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
        return *this;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

    bool operator==(const Bitset& o) const = default;

    // Smallest element >= from, or npos.
    std::size_t next(std::size_t from = 0) const {
        if (from >= n_) return npos;
        std::size_t k = from >> 6;
        std::uint64_t w = words_[k] & (~std::uint64_t(0) << (from & 63));
        while (true) {
            if (w) return (k << 6) + static_cast<std::size_t>(std::countr_zero(w));
            if (++k == words_.size()) return npos;
            w = words_[k];
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                f((k << 6) + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(static_cast<int>(i)); });
        return out;
    }

    static Bitset of(std::size_t n, std::initializer_list<int> members) {
        Bitset s(n);
        for (int m : members) s.set(static_cast<std::size_t>(m));
        return s;
    }

private:
    void trim() {
        if (n_ & 63) words_.back() &= (std::uint64_t(1) << (n_ & 63)) - 1;
        if (n_ == 0 && !words_.empty()) words_.back() = 0;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace mclump
