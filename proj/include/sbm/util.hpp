#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace sbm {

// Fixed-capacity dynamic bitset used for label sets and small node sets.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    int size() const { return nbits_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    void clear() { for (auto& w : words_) w = 0; }

    int count() const {
        int c = 0;
        for (auto w : words_) c += __builtin_popcountll(w);
        return c;
    }
    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }

    Bitset& operator|=(const Bitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    bool operator==(const Bitset& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }

    const std::vector<uint64_t>& words() const { return words_; }

    static Bitset of(int nbits, const std::vector<int>& members) {
        Bitset b(nbits);
        for (int i : members) b.set(i);
        return b;
    }

    std::vector<int> to_list() const {
        std::vector<int> out;
        for (int i = 0; i < nbits_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

private:
    int nbits_ = 0;
    std::vector<uint64_t> words_;
};

inline long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

} // namespace sbm
