#pragma once

#include <cstddef>
#include <vector>

namespace traceexpr {

/// Indices into a machine's state, action and clock name tables.
using StateId = std::size_t;
using ActionId = std::size_t;
using ClockId = std::size_t;
/// Index into a machine's edge list.
using EdgeRef = std::size_t;

/// Sorted, duplicate-free set of clocks.
using ClockSet = std::vector<ClockId>;

} // namespace traceexpr
