#pragma once

// Congruence closure over a tree of paths. Shared by the representation
// operations (maximality closure, representation-level lci) and by the
// saturation of global congruences.

#include <map>
#include <optional>
#include <vector>

#include "hornset/path.hpp"
#include "hornset/union_find.hpp"

namespace hornset::detail {

class PathClosure {
public:
    // How the maximality step treats a nullary constructor f at p1 and p2:
    // MarkerPresent relates p1, p2 as soon as both markers p1.f, p2.f exist;
    // MarkerEquivalent requires p1.f and p2.f to be related already.
    enum class NullaryRule { MarkerPresent, MarkerEquivalent };
    enum class Outcome { Stable, Clash, Cycle };

    explicit PathClosure(NullaryRule rule) : rule_(rule) {}

    /// Adds p and all of its prefixes; returns the index of p.
    std::size_t add(const Path& p);
    std::optional<std::size_t> index_of(const Path& p) const;
    const Path& path(std::size_t i) const { return paths_[i]; }
    std::size_t size() const { return paths_.size(); }

    bool merge(std::size_t a, std::size_t b) { return uf_.unite(a, b); }
    bool same(std::size_t a, std::size_t b) { return uf_.same(a, b); }
    std::size_t root(std::size_t a) { return uf_.find(a); }

    /// Runs suffix propagation and the maximality step to a fixpoint. With
    /// `grow`, suffix propagation materializes missing continuations; with
    /// `check`, constructor clashes and cyclic classes stop the loop.
    Outcome saturate(bool grow, bool check);

    Congruence congruence();
    PathSet path_set() const { return PathSet(paths_.begin(), paths_.end()); }

private:
    std::map<std::size_t, std::vector<std::size_t>> groups();
    bool propagate_down(bool grow);
    bool propagate_up();
    bool has_clash();
    bool has_cycle();

    NullaryRule rule_;
    std::vector<Path> paths_;
    std::map<Path, std::size_t> index_;
    std::vector<std::map<Step, std::size_t>> children_;
    UnionFind uf_;
};

}  // namespace hornset::detail
