"""Dense statevector simulator with measurement-based mid-circuit reset.

Everything here except H permutes computational basis states, so the one
genuinely quantum move is the reset: a projective measurement of the target
qubit (outcome drawn from its marginal probability) followed by a flip back
to |0> when the outcome was 1.  A reset therefore collapses whatever the
target was entangled with; per-shot faithfulness comes from re-running the
whole circuit for every shot.

The state is a dense complex vector indexed little endian (qubit j is bit j).
Widths are capped at 26 qubits as a memory guard.  Every stochastic entry
point takes an explicit seed and draws from ``numpy.random.default_rng``
(PCG64); identical seeds give identical shot sequences, and each shot of
``sample_shots`` derives its own generator from (seed, shot index) so shots
are independent and order-insensitive.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, GateKind

MAX_WIDTH = 26
NORM_TOL = 1e-10

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass
class QuantumState:
    """Final amplitudes of a simulation, plus the seed that produced them."""

    amplitudes: np.ndarray
    width: int
    seed: int


@dataclass(frozen=True)
class ShotRecord:
    bitstring: str
    count: int
    probability: float


def _check_width(width: int) -> None:
    if width > MAX_WIDTH:
        raise ValueError(
            f"width {width} exceeds the {MAX_WIDTH}-qubit statevector guard"
        )


def _compile(circuit: Circuit) -> list[tuple]:
    """Precompute the slice tuples each op needs, once per circuit."""
    w = circuit.width
    plan: list[tuple] = []
    for op in circuit.ops:
        sel: list = [slice(None)] * w
        for c in op.controls:
            sel[w - 1 - c.qubit] = 1 if c.positive else 0
        ax_t = w - 1 - op.target
        s0, s1 = list(sel), list(sel)
        s0[ax_t] = 0
        s1[ax_t] = 1
        tag = {GateKind.H: "h", GateKind.RESET: "reset"}.get(op.kind, "swap")
        plan.append((tag, tuple(s0), tuple(s1)))
    return plan


def _norm_sq(amps: np.ndarray) -> float:
    return float(np.vdot(amps, amps).real)


def _execute(
    plan: list[tuple],
    width: int,
    initial: int,
    rng: np.random.Generator,
    check_norm: bool,
) -> np.ndarray:
    amps = np.zeros(1 << width, dtype=np.complex128)
    amps[initial] = 1.0
    tensor = amps.reshape([2] * width)
    for tag, s0, s1 in plan:
        if tag == "swap":
            tmp = tensor[s0].copy()
            tensor[s0] = tensor[s1]
            tensor[s1] = tmp
        elif tag == "h":
            a0 = tensor[s0].copy()
            a1 = tensor[s1].copy()
            tensor[s0] = (a0 + a1) * _INV_SQRT2
            tensor[s1] = (a0 - a1) * _INV_SQRT2
        else:  # reset = measure target, then flip the 1 outcome back to 0
            p1 = float(np.vdot(tensor[s1], tensor[s1]).real)
            outcome = 1 if rng.random() < p1 else 0
            p_keep = p1 if outcome else 1.0 - p1
            if p_keep < 1e-12:
                raise RuntimeError(
                    "reset collapsed onto a zero-norm branch; "
                    "amplitude bookkeeping bug"
                )
            scale = 1.0 / math.sqrt(p_keep)
            if outcome:
                tensor[s0] = tensor[s1] * scale
                tensor[s1] = 0.0
            else:
                tensor[s1] = 0.0
                tensor[s0] *= scale
        if check_norm and abs(_norm_sq(amps) - 1.0) > NORM_TOL:
            raise RuntimeError("state norm drifted beyond tolerance")
    return amps


def run(circuit: Circuit, initial: int = 0, *, seed: int) -> QuantumState:
    """Simulate one trajectory from the basis state ``initial``."""
    _check_width(circuit.width)
    if not 0 <= initial < (1 << circuit.width):
        raise ValueError(
            f"initial basis index {initial} does not fit width {circuit.width}"
        )
    rng = np.random.default_rng(seed)
    amps = _execute(_compile(circuit), circuit.width, initial, rng, check_norm=True)
    return QuantumState(amps, circuit.width, seed)


def _record_key(circuit: Circuit, basis_index: int) -> str:
    if circuit.layout is not None:
        return circuit.layout.readout_bitstring(basis_index)
    return format(basis_index, f"0{circuit.width}b")


def sample_shots(
    circuit: Circuit, shots: int, *, seed: int, initial: int = 0
) -> list[ShotRecord]:
    """Run ``shots`` independent end-to-end trajectories and tally outcomes.

    Each shot ends with a full measurement; outcomes are aggregated by the
    (color, position) readout when the circuit has a layout, else by the full
    bitstring, and returned sorted by bitstring.
    """
    _check_width(circuit.width)
    if shots < 1:
        raise ValueError("shots must be at least 1")
    if not 0 <= initial < (1 << circuit.width):
        raise ValueError(
            f"initial basis index {initial} does not fit width {circuit.width}"
        )
    plan = _compile(circuit)
    counter: Counter[str] = Counter()
    for shot in range(shots):
        rng = np.random.default_rng([seed, shot])
        amps = _execute(plan, circuit.width, initial, rng, check_norm=False)
        probs = amps.real**2 + amps.imag**2
        total = probs.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise RuntimeError("state norm drifted beyond tolerance")
        edges = np.cumsum(probs)
        idx = int(np.searchsorted(edges, rng.random() * total, side="right"))
        idx = min(idx, len(probs) - 1)
        counter[_record_key(circuit, idx)] += 1
    return [
        ShotRecord(bits, count, count / shots)
        for bits, count in sorted(counter.items())
    ]


def probabilities(state: QuantumState, qubits: list[int]) -> dict[str, float]:
    """Marginal distribution over ``qubits`` (first index = most significant)."""
    qubits = list(qubits)
    if len(set(qubits)) != len(qubits):
        raise ValueError("qubit subset must be distinct")
    if any(not 0 <= qb < state.width for qb in qubits):
        raise ValueError("qubit subset outside state width")
    probs = state.amplitudes.real**2 + state.amplitudes.imag**2
    tensor = probs.reshape([2] * state.width)
    keep = [state.width - 1 - qb for qb in qubits]
    drop = tuple(ax for ax in range(state.width) if ax not in keep)
    marginal = tensor.sum(axis=drop) if drop else tensor
    order = [sorted(keep).index(ax) for ax in keep]
    marginal = np.transpose(marginal, order).reshape(-1)
    if abs(marginal.sum() - 1.0) > NORM_TOL:
        raise RuntimeError("marginal does not sum to 1")
    digits = len(qubits)
    return {format(i, f"0{digits}b"): float(p) for i, p in enumerate(marginal)}


def records_to_csv(records: list[ShotRecord]) -> str:
    """Histogram rows as ``bitstring,count,probability`` CSV text."""
    lines = ["bitstring,count,probability"]
    for r in records:
        lines.append(f"{r.bitstring},{r.count},{r.probability}")
    return "\n".join(lines) + "\n"
