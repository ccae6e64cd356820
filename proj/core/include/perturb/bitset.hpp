#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace perturb {

// Dynamic bitset over a fixed universe [0, n).  All vertex subsets in the
// library are represented this way; intersection + popcount is the hot path.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int universe) : n_(universe), words_((universe + 63) / 64, 0) {
        if (universe < 0) throw std::invalid_argument("Bitset: negative universe");
    }

    static Bitset full(int universe) {
        Bitset b(universe);
        for (auto& w : b.words_) w = ~0ULL;
        b.trim();
        return b;
    }
    static Bitset of(int universe, std::initializer_list<int> elems) {
        Bitset b(universe);
        for (int e : elems) b.set(e);
        return b;
    }

    int universe() const { return n_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
    void set(int i) { check(i); words_[i >> 6] |= 1ULL << (i & 63); }
    void reset(int i) { check(i); words_[i >> 6] &= ~(1ULL << (i & 63)); }
    void clear() { for (auto& w : words_) w = 0; }

    int count() const {
        int c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }
    bool any() const {
        for (uint64_t w : words_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator&=(const Bitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    // set difference
    Bitset& operator-=(const Bitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

    Bitset complement() const {
        Bitset r(n_);
        for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
        r.trim();
        return r;
    }

    bool operator==(const Bitset& o) const = default;

    bool intersects(const Bitset& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    bool contains(const Bitset& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (o.words_[i] & ~words_[i]) return false;
        return true;
    }

    // first element >= from, or -1
    int next(int from = 0) const {
        if (from >= n_) return -1;
        int wi = from >> 6;
        uint64_t w = words_[wi] & (~0ULL << (from & 63));
        while (true) {
            if (w) return (wi << 6) + std::countr_zero(w);
            if (++wi >= static_cast<int>(words_.size())) return -1;
            w = words_[wi];
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (int v = next(0); v >= 0; v = next(v + 1)) f(v);
    }
    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(16);
        for_each([&](int v) { out.push_back(v); });
        return out;
    }

    const std::vector<uint64_t>& words() const { return words_; }
    std::vector<uint64_t>& words() { return words_; }

private:
    void check(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("Bitset: index out of range");
    }
    void trim() {
        if (n_ & 63) words_.back() &= (~0ULL >> (64 - (n_ & 63)));
    }

    int n_ = 0;
    std::vector<uint64_t> words_;
};

// popcount of a & b without materializing the intersection
inline int intersection_count(const Bitset& a, const Bitset& b) {
    const auto& wa = a.words();
    const auto& wb = b.words();
    int c = 0;
    for (size_t i = 0; i < wa.size(); ++i) c += std::popcount(wa[i] & wb[i]);
    return c;
}

using VertexSet = Bitset;

}  // namespace perturb
