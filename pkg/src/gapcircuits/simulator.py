"""Two independent simulation backends for Hadamard-layer-plus-reversible circuits.

Path-sum backend: after the leading Hadamard layer every gate maps a basis
state to a basis state with a sign, so the final state is a signed sum over
2^h branch words.  A branch is accepted when every Z-measured qubit is 0;
each X-measured qubit contributes a factor 1/sqrt(2) to the accepted
amplitude regardless of its bit.  With S the signed count of accepted
branches, the acceptance probability is exactly S^2 / 2^(h + #x_measured),
computed as an exact rational.

Dense backend: a literal statevector simulation that applies explicit
Hadamards to the X-measured qubits at the end and reads the all-zero
amplitudes.  It shares no acceptance math with the path-sum backend, which
is what makes the agreement check meaningful.

Branch words pack qubit q into bit q of an int64, so circuits are capped at
62 qubits; the dense backend has its own, much smaller, qubit cap.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ir import CX, Circuit, H, MCBitmask, QramLoad, Toffoli, X, Z

DENSE_CAP_DEFAULT = 22
BRANCH_CAP_DEFAULT = 24
_WORD_QUBIT_CAP = 62
_SQRT_HALF = np.sqrt(0.5)


class SimulationError(RuntimeError):
    """Circuit cannot be simulated as given (structure or vocabulary)."""


class CapExceededError(SimulationError):
    """A resource cap (qubits, branches) would be exceeded; caps are explicit."""


@dataclass(frozen=True)
class SimOutcome:
    """Exact path-sum result: p_acc == signed_sum^2 / 2^exponent."""

    signed_sum: int
    exponent: int
    n_branches: int
    n_accepted: int
    p_acc: Fraction


def _placed_mask(mask_bits, targets: tuple[int, ...]) -> int:
    return sum(1 << targets[j] for j, b in enumerate(mask_bits) if b)


def _compile_ops(circuit: Circuit, *, start: int = 0) -> list[tuple]:
    """Lower gates[start:] to word-level ops shared by both backends."""
    if circuit.n_qubits > _WORD_QUBIT_CAP:
        raise CapExceededError(
            f"{circuit.n_qubits} qubits exceed the {_WORD_QUBIT_CAP}-qubit word cap")
    ops: list[tuple] = []
    for gate in circuit.gates[start:]:
        if isinstance(gate, H):
            ops.append(("h", gate.target))
        elif isinstance(gate, X):
            ops.append(("flip", 1 << gate.target))
        elif isinstance(gate, Z):
            ops.append(("z", gate.target))
        elif isinstance(gate, CX):
            ops.append(("cx", gate.control, gate.target))
        elif isinstance(gate, Toffoli):
            ops.append(("ccx", gate.control1, gate.control2, gate.target))
        elif isinstance(gate, MCBitmask):
            ops.append(("mcb", gate.controls, _placed_mask(gate.mask, gate.targets)))
        elif isinstance(gate, QramLoad):
            table = circuit.tables[gate.table_id]
            lut = np.zeros(1 << len(gate.address), dtype=np.int64)
            for address, value in table.entries:
                lut[address] = _placed_mask(
                    ((value >> j) & 1 for j in range(len(gate.data))), gate.data)
            ops.append(("qram", gate.address, lut))
        else:
            raise SimulationError(f"gate {type(gate).__name__} is outside the simulator vocabulary")
    return ops


def _gather_bits(words: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    value = (words >> qubits[0]) & 1
    for t, q in enumerate(qubits[1:], start=1):
        value = value | (((words >> q) & 1) << t)
    return value


def _apply_ops(ops, words: np.ndarray, signs: np.ndarray) -> None:
    for op in ops:
        kind = op[0]
        if kind == "flip":
            words ^= op[1]
        elif kind == "cx":
            _, c, t = op
            words ^= ((words >> c) & 1) << t
        elif kind == "ccx":
            _, c1, c2, t = op
            words ^= ((words >> c1) & (words >> c2) & 1) << t
        elif kind == "mcb":
            _, controls, placed = op
            fire = words >> controls[0]
            for c in controls[1:]:
                fire = fire & (words >> c)
            words ^= (fire & 1) * placed
        elif kind == "z":
            signs *= 1 - 2 * ((words >> op[1]) & 1)
        elif kind == "qram":
            _, address, lut = op
            words ^= lut[_gather_bits(words, address)]
        else:
            raise SimulationError(f"op {kind!r} is not a basis-state permutation")


def apply_gates(circuit: Circuit, words: np.ndarray, signs: np.ndarray | None = None,
                *, start: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Propagate packed basis words (int64) through gates[start:], in place.

    Only permutation gates are allowed in the slice; an H raises.  Returns
    the same arrays for convenience.
    """
    if signs is None:
        signs = np.ones(len(words), dtype=np.int64)
    ops = _compile_ops(circuit, start=start)
    if any(op[0] == "h" for op in ops):
        raise SimulationError("cannot propagate basis words through an H gate")
    _apply_ops(ops, words, signs)
    return words, signs


def _h_prefix(circuit: Circuit) -> tuple[int, ...]:
    h = circuit.h_layer_size
    prefix = circuit.gates[:h]
    if len(prefix) != h or any(not isinstance(g, H) for g in prefix):
        raise SimulationError("Hadamard layer does not match h_layer_size")
    targets = tuple(g.target for g in prefix)
    if len(set(targets)) != len(targets):
        raise SimulationError("Hadamard layer targets must be distinct")
    return targets


def simulate_pathsum(circuit: Circuit, *, branch_cap: int = BRANCH_CAP_DEFAULT,
                     jobs: int = 1, chunk_size: int = 1 << 16) -> SimOutcome:
    """Exact acceptance statistics by enumerating all 2^h Hadamard branches.

    Branches are evaluated in fixed-size chunks whose partial sums combine
    by integer addition, so chunking and the thread count never change the
    result.
    """
    plan = circuit.measurement
    if plan is None:
        raise SimulationError("circuit has no measurement plan")
    h_targets = _h_prefix(circuit)
    h = len(h_targets)
    if h > branch_cap:
        raise CapExceededError(f"2^{h} branches exceed the 2^{branch_cap} branch cap")
    ops = _compile_ops(circuit, start=h)
    z_mask = sum(1 << q for q in plan.z_qubits)

    def run_chunk(lo: int, hi: int) -> tuple[int, int]:
        branch = np.arange(lo, hi, dtype=np.int64)
        words = np.zeros(hi - lo, dtype=np.int64)
        for t, q in enumerate(h_targets):
            words |= ((branch >> t) & 1) << q
        signs = np.ones(hi - lo, dtype=np.int64)
        _apply_ops(ops, words, signs)
        accepted = (words & z_mask) == 0
        return int(signs[accepted].sum()), int(accepted.sum())

    n_branches = 1 << h
    bounds = [(lo, min(lo + chunk_size, n_branches)) for lo in range(0, n_branches, chunk_size)]
    if jobs > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda b: run_chunk(*b), bounds))
    else:
        parts = [run_chunk(lo, hi) for lo, hi in bounds]
    signed_sum = sum(p[0] for p in parts)
    n_accepted = sum(p[1] for p in parts)
    exponent = h + len(plan.x_qubits)
    p_acc = Fraction(signed_sum * signed_sum, 1 << exponent)
    return SimOutcome(signed_sum, exponent, n_branches, n_accepted, p_acc)


def _dense_h(state: np.ndarray, idx: np.ndarray, q: int) -> np.ndarray:
    m = 1 << q
    lo = idx & ~m
    hi = idx | m
    phase = np.where((idx & m) != 0, -1.0, 1.0)
    return (state[lo] + phase * state[hi]) * _SQRT_HALF


def simulate_dense(circuit: Circuit, *, cap: int = DENSE_CAP_DEFAULT) -> np.ndarray:
    """Full statevector after the circuit body, index bit q holding qubit q."""
    n = circuit.n_qubits
    if n > cap:
        raise CapExceededError(f"{n} qubits exceed the dense cap of {cap}")
    idx = np.arange(1 << n, dtype=np.int64)
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    for op in _compile_ops(circuit):
        kind = op[0]
        if kind == "h":
            state = _dense_h(state, idx, op[1])
        elif kind == "flip":
            state = state[idx ^ op[1]]
        elif kind == "cx":
            _, c, t = op
            state = state[idx ^ (((idx >> c) & 1) << t)]
        elif kind == "ccx":
            _, c1, c2, t = op
            state = state[idx ^ (((idx >> c1) & (idx >> c2) & 1) << t)]
        elif kind == "mcb":
            _, controls, placed = op
            fire = idx >> controls[0]
            for c in controls[1:]:
                fire = fire & (idx >> c)
            state = state[idx ^ ((fire & 1) * placed)]
        elif kind == "z":
            state = state * (1 - 2 * ((idx >> op[1]) & 1))
        elif kind == "qram":
            _, address, lut = op
            state = state[idx ^ lut[_gather_bits(idx, address)]]
    return state


def dense_acceptance(circuit: Circuit, state: np.ndarray) -> float:
    """Probability of the all-zero outcome on the measured qubits.

    Applies literal Hadamards to every X-measured qubit, then sums the
    squared magnitude over all assignments of the unmeasured qubits with
    every measured qubit at 0.
    """
    plan = circuit.measurement
    if plan is None:
        raise SimulationError("circuit has no measurement plan")
    if len(plan.unmeasured) > 20:
        raise CapExceededError("too many unmeasured qubits to marginalize")
    idx = np.arange(len(state), dtype=np.int64)
    state = state.copy()
    for q in plan.x_qubits:
        state = _dense_h(state, idx, q)
    total = 0.0
    for assignment in range(1 << len(plan.unmeasured)):
        pointer = 0
        for t, q in enumerate(plan.unmeasured):
            pointer |= ((assignment >> t) & 1) << q
        total += abs(state[pointer]) ** 2
    return float(total)


def acceptance_probability(circuit: Circuit, backend: str = "pathsum", *,
                           dense_cap: int = DENSE_CAP_DEFAULT,
                           branch_cap: int = BRANCH_CAP_DEFAULT,
                           jobs: int = 1) -> Fraction | float:
    """All-zero-outcome probability: exact Fraction (pathsum) or float (dense)."""
    if backend == "pathsum":
        return simulate_pathsum(circuit, branch_cap=branch_cap, jobs=jobs).p_acc
    if backend == "dense":
        return dense_acceptance(circuit, simulate_dense(circuit, cap=dense_cap))
    raise SimulationError(f"unknown backend {backend!r}")
