#pragma once

#include <stdexcept>
#include <string>

#include "storax/machine.hpp"

namespace storax {

// Thrown when a transform's input machine fails its precondition.
struct PreconditionViolated : std::runtime_error {
  explicit PreconditionViolated(const std::string& what)
      : std::runtime_error(what) {}
};

// desensitize(M) rebuilds a one-way depth-k machine (k >= 2) that accepts the
// same language but never moves its input head while scanning a frozen blank,
// never changes state on a frozen blank, and never turns on one.
//
// Precondition: M is a one-way k-sda or k-sna with k >= 2 whose rules never
// move the input head while scanning a frozen blank (checked statically;
// PreconditionViolated otherwise).
//
// Construction sketch: states are tagged with the storage direction of the
// previous step; episodes spent inside a frozen blank region are precomputed
// as boolean reachability matrices (one per pinned input symbol) over
// (state, entry direction) pairs, so the output machine replaces every such
// episode by a single annotated write plus a straight, state-frozen traversal.
// Region summaries ride in storage symbols as fringe annotations and in
// states while crossing.  Episodes spent at the storage left endmarker are
// simulated from a parked position on the nearest unfrozen cell to its right.
// The output is deterministic iff the input is, has the same depth k, and
// carries the relaxed write flag (compressed episodes may keep a symbol or
// overshoot the mandated depth where the original machine moved).
MachineSpec desensitize(const MachineSpec& spec);

// right_turn_restrict(M) rebuilds a one-way depth-k machine whose storage
// head makes at most one rightward turn per tape cell (cells right of the
// left endmarker; bounces off the endmarker itself are exempt) and accepts
// the same language.
//
// Precondition: M is a one-way machine that never moves its input head on a
// depth-k symbol, never changes state on a frozen blank, and whose frozen
// blank rules keep a single traversal direction per (state, input symbol)
// (a statically checkable condition that rules out turns on frozen blanks;
// PreconditionViolated otherwise).
//
// Construction sketch: each cell of M is spread over a block of k cells; a
// block holding a depth-j symbol is laid out as j frozen blanks, one marker
// cell carrying the symbol and its depth, and k-j-1 untouched cells.  A
// rewrite that used to revisit the same cell instead freezes the marker and
// plants the successor one cell to the right inside the block, so each cell
// of the new machine sees at most one rightward turn.
MachineSpec right_turn_restrict(const MachineSpec& spec);

}  // namespace storax
