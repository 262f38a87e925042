#include "closure.hpp"

#include <set>
#include <tuple>

namespace hornset::detail {

std::size_t PathClosure::add(const Path& p) {
    if (auto it = index_.find(p); it != index_.end()) return it->second;
    std::optional<std::size_t> parent;
    if (!p.empty()) parent = add(p.parent());
    const std::size_t idx = paths_.size();
    paths_.push_back(p);
    index_.emplace(p, idx);
    children_.emplace_back();
    uf_.add();
    if (parent) children_[*parent].emplace(p.back(), idx);
    return idx;
}

std::optional<std::size_t> PathClosure::index_of(const Path& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::map<std::size_t, std::vector<std::size_t>> PathClosure::groups() {
    std::map<std::size_t, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < paths_.size(); ++i) out[uf_.find(i)].push_back(i);
    return out;
}

bool PathClosure::propagate_down(bool grow) {
    bool changed = false;
    for (const auto& [root, members] : groups()) {
        if (members.size() < 2) continue;
        std::map<Step, std::size_t> representative;
        for (std::size_t m : members) {
            for (const auto& [step, child] : children_[m]) representative.emplace(step, child);
        }
        for (const auto& [step, rep] : representative) {
            for (std::size_t m : members) {
                auto it = children_[m].find(step);
                std::size_t child;
                if (it != children_[m].end()) {
                    child = it->second;
                } else if (grow) {
                    child = add(paths_[m].child(step));
                    changed = true;
                } else {
                    continue;
                }
                changed |= uf_.unite(child, rep);
            }
        }
    }
    return changed;
}

bool PathClosure::propagate_up() {
    using Key = std::tuple<std::string, std::uint32_t, std::vector<std::size_t>>;
    bool changed = false;
    std::map<Key, std::size_t> seen;
    const std::size_t n = paths_.size();
    for (std::size_t node = 0; node < n; ++node) {
        std::map<std::pair<std::string, std::uint32_t>, std::vector<std::pair<std::uint32_t, std::size_t>>> by_ctor;
        for (const auto& [step, child] : children_[node]) by_ctor[{step.ctor, step.arity}].emplace_back(step.index, child);
        for (const auto& [ctor, kids] : by_ctor) {
            Key key{ctor.first, ctor.second, {}};
            if (ctor.second == 0) {
                if (rule_ == NullaryRule::MarkerEquivalent) std::get<2>(key).push_back(uf_.find(kids.front().second));
            } else {
                if (kids.size() != ctor.second) continue;
                for (const auto& [index, child] : kids) std::get<2>(key).push_back(uf_.find(child));
            }
            auto [it, inserted] = seen.emplace(std::move(key), node);
            if (!inserted) changed |= uf_.unite(node, it->second);
        }
    }
    return changed;
}

bool PathClosure::has_clash() {
    for (const auto& [root, members] : groups()) {
        std::set<std::pair<std::string, std::uint32_t>> ctors;
        for (std::size_t m : members) {
            for (const auto& [step, child] : children_[m]) ctors.emplace(step.ctor, step.arity);
        }
        if (ctors.size() > 1) return true;
    }
    return false;
}

bool PathClosure::has_cycle() {
    for (const auto& [root, members] : groups()) {
        for (std::size_t a : members) {
            for (std::size_t b : members) {
                if (a != b && paths_[a].size() < paths_[b].size() && paths_[a].is_prefix_of(paths_[b])) return true;
            }
        }
    }
    return false;
}

PathClosure::Outcome PathClosure::saturate(bool grow, bool check) {
    for (;;) {
        if (check) {
            if (has_clash()) return Outcome::Clash;
            if (has_cycle()) return Outcome::Cycle;
        }
        bool changed = propagate_down(grow);
        changed |= propagate_up();
        if (!changed) return Outcome::Stable;
    }
}

Congruence PathClosure::congruence() {
    std::vector<std::vector<Path>> classes;
    for (const auto& [root, members] : groups()) {
        if (members.size() < 2) continue;
        std::vector<Path> cls;
        for (std::size_t m : members) cls.push_back(paths_[m]);
        classes.push_back(std::move(cls));
    }
    return Congruence(path_set(), classes);
}

}  // namespace hornset::detail
