// Copyright (c) prgc contributors.
// SPDX-License-Identifier: Apache-2.0
#ifndef PRGC_STATE_SPACE_HPP
#define PRGC_STATE_SPACE_HPP

#include "prgc/error.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace prgc {

/// Finite ordered state space. The ordering is fixed at construction and
/// gives every set-valued result in the toolkit its canonical form.
class StateSpace {
  public:
    explicit StateSpace(std::vector<std::string> names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int s) const { return names_.at(static_cast<std::size_t>(s)); }
    const std::vector<std::string>& names() const { return names_; }

    /// Throws a state-space error for unknown identifiers.
    int index_of(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) > 0; }

  private:
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

using StateSpacePtr = std::shared_ptr<const StateSpace>;

StateSpacePtr make_space(std::vector<std::string> names);

/// Convenience space {"s0", ..., "s{n-1}"} used throughout the tests.
StateSpacePtr make_space(int n);

bool same_space(const StateSpacePtr& a, const StateSpacePtr& b);
void require_same_space(const StateSpacePtr& a, const StateSpacePtr& b, const std::string& where);

} // namespace prgc

#endif
