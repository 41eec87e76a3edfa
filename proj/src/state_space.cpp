// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#include "prgc/state_space.hpp"

namespace prgc {

StateSpace::StateSpace(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) fail("state-space", "state space must be non-empty");
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
        if (!index_.emplace(names_[static_cast<std::size_t>(i)], i).second)
            fail("state-space", "duplicate state identifier '" + names_[static_cast<std::size_t>(i)] + "'");
    }
}

int StateSpace::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail("state-space", "unknown state identifier '" + name + "'");
    return it->second;
}

StateSpacePtr make_space(std::vector<std::string> names) {
    return std::make_shared<const StateSpace>(std::move(names));
}

StateSpacePtr make_space(int n) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    return make_space(std::move(names));
}

bool same_space(const StateSpacePtr& a, const StateSpacePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->names() == b->names();
}

void require_same_space(const StateSpacePtr& a, const StateSpacePtr& b, const std::string& where) {
    if (!same_space(a, b)) fail("state-space", where + ": operands over different state spaces");
}

} // namespace prgc
