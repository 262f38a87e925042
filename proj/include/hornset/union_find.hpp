#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace hornset::detail {

// Disjoint sets over dense indices, path halving + union by size.
class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) { grow(n); }

    std::size_t size() const { return parent_.size(); }

    std::size_t add() {
        parent_.push_back(parent_.size());
        weight_.push_back(1);
        return parent_.size() - 1;
    }

    void grow(std::size_t n) {
        while (parent_.size() < n) add();
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns true if two distinct classes were merged.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (weight_[a] < weight_[b]) std::swap(a, b);
        parent_[b] = a;
        weight_[a] += weight_[b];
        return true;
    }

    bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> weight_;
};

}  // namespace hornset::detail
