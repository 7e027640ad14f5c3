"""Exact basis-tracked backend for permutation circuits.

After an H-only fan-out in the preparation stage, every branch of the
superposition stays a classical bit vector: X/CNOT/TOFFOLI/MCX flip bits and
RESET clears the target deterministically per branch.  The whole evolution is
therefore a list of integer assignments with exact rational weights, with no
sampling and no floating point.

The bookkeeping is sound only while distinct branches carry distinct position
tags; otherwise merging a reset incoherently could disagree with amplitude
interference.  ``assert_no_collision`` checks the tag condition, and H gates
are refused outside the preparation stage (or on a qubit that is not |0> in
every branch) because they would create exactly that kind of interference.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circuit import Circuit, GateKind, GateOp, RegisterLayout


class CollisionError(ValueError):
    pass


def apply_to_basis(op: GateOp, assignment: int) -> int:
    """Apply a permutation gate to a basis state given as a bit vector."""
    if op.kind in (GateKind.H, GateKind.RESET):
        raise ValueError(f"{op.kind.name} is not a basis permutation")
    for c in op.controls:
        if bool(assignment >> c.qubit & 1) != c.positive:
            return assignment
    return assignment ^ (1 << op.target)


@dataclass(frozen=True)
class Branch:
    assignment: int
    weight: Fraction


@dataclass
class BranchMap:
    """Weighted set of classical branches of a tracked run."""

    width: int
    branches: tuple[Branch, ...]
    layout: RegisterLayout | None = None

    def total_weight(self) -> Fraction:
        return sum((b.weight for b in self.branches), Fraction(0))

    def _require_layout(self) -> RegisterLayout:
        if self.layout is None:
            raise ValueError("branch map has no register layout")
        return self.layout

    def position_color_pairs(self) -> list[tuple[int, int]]:
        layout = self._require_layout()
        return [
            (layout.position_value(b.assignment), layout.color_value(b.assignment))
            for b in self.branches
        ]

    def position_color_map(self) -> dict[int, int]:
        """Position -> color lookup; collisions must be ruled out first."""
        assert_no_collision(self)
        return dict(self.position_color_pairs())

    def readout_distribution(self) -> dict[str, Fraction]:
        """Exact law of the (color, position) readout, keyed like histograms."""
        layout = self._require_layout()
        dist: dict[str, Fraction] = {}
        for b in self.branches:
            key = layout.readout_bitstring(b.assignment)
            dist[key] = dist.get(key, Fraction(0)) + b.weight
        return dist


def assert_no_collision(branch_map: BranchMap) -> None:
    """Raise unless every branch carries a distinct position tag."""
    layout = branch_map._require_layout()
    seen: dict[int, int] = {}
    for b in branch_map.branches:
        p = layout.position_value(b.assignment)
        if p in seen:
            w = branch_map.width
            raise CollisionError(
                f"branches {seen[p]:0{w}b} and {b.assignment:0{w}b} share "
                f"position tag {p:0{len(layout.position)}b}"
            )
        seen[p] = b.assignment


def run_tracked(circuit: Circuit, initial: int = 0) -> BranchMap:
    """Track a circuit exactly, branch by branch.

    H is accepted only inside the ``prep`` stage, at most once per qubit, on
    a qubit that is |0> in every branch (and, when the circuit has a layout,
    only on position qubits).  Anything else would make basis tracking
    unsound; such circuits belong on the statevector backend.
    """
    if not 0 <= initial < (1 << circuit.width):
        raise ValueError(
            f"initial basis index {initial} does not fit width {circuit.width}"
        )
    prep_start = prep_stop = 0
    for s in circuit.stages:
        if s.name == "prep":
            prep_start, prep_stop = s.start, s.stop
            break
    branches = [initial]
    splits = 0
    h_seen: set[int] = set()
    for i, op in enumerate(circuit.ops):
        if op.kind is GateKind.H:
            if not prep_start <= i < prep_stop:
                raise ValueError(
                    "H outside the prep stage makes basis tracking unsound; "
                    "use the statevector backend for this circuit"
                )
            if circuit.layout is not None and op.target not in circuit.layout.position:
                raise ValueError(
                    f"prep-stage H must act on a position qubit, not q{op.target}"
                )
            if op.target in h_seen:
                raise ValueError(
                    f"second H on q{op.target} could interfere; "
                    "use the statevector backend"
                )
            mask = 1 << op.target
            if any(b & mask for b in branches):
                raise ValueError(
                    f"H on q{op.target} requires the qubit to be |0> in every branch"
                )
            h_seen.add(op.target)
            splits += 1
            branches = [b | half for b in branches for half in (0, mask)]
        elif op.kind is GateKind.RESET:
            mask = ~(1 << op.target)
            branches = [b & mask for b in branches]
        else:
            branches = [apply_to_basis(op, b) for b in branches]
    weight = Fraction(1, 2**splits)
    result = BranchMap(
        width=circuit.width,
        branches=tuple(Branch(b, weight) for b in branches),
        layout=circuit.layout,
    )
    assert result.total_weight() == 1
    return result
