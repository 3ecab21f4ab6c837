"""Brute-force oracles and exact verification of the acceptance identity.

For each problem the oracle counts solutions s among `total` candidates by
direct enumeration, giving gap = 2s - total.  Verification simulates the
built circuit with the exact path-sum backend and demands

    p_acc == gap^2 / 2^k

as a rational-number equality, plus |signed_sum| == |gap|, the closed-form
qubit count, and per-step gate budgets.  The dense backend can be added as
an independent floating-point cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .builders import (
    BuiltCircuit,
    Instance,
    InstanceError,
    NwtInstance,
    OVInstance,
    ThreeSumInstance,
    build_circuit,
    denom_exponent,
    qubit_formula,
    PROBLEM_3SUM,
    PROBLEM_NWT,
    PROBLEM_OV,
    MODE_QRAM,
)
from .ir import CX, H, MCBitmask, QramLoad, Toffoli, X, Z, mcx_toffoli_cost
from .simulator import (
    BRANCH_CAP_DEFAULT,
    DENSE_CAP_DEFAULT,
    SimOutcome,
    dense_acceptance,
    simulate_dense,
    simulate_pathsum,
)

DENSE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class OracleCounts:
    solutions: int
    total: int

    @property
    def gap(self) -> int:
        return 2 * self.solutions - self.total


def oracle_ov(instance: OVInstance) -> OracleCounts:
    """Count pairs (i, j) whose vectors have no common 1 bit."""
    u = [bs.to_int() for bs in instance.u]
    v = [bs.to_int() for bs in instance.v]
    solutions = sum(1 for a in u for b in v if a & b == 0)
    return OracleCounts(solutions, instance.n ** 2)


def oracle_threesum(instance: ThreeSumInstance) -> OracleCounts:
    """Count ordered triples (with repetition) of values summing to zero."""
    vals = instance.values
    solutions = sum(1 for a in vals for b in vals for c in vals if a + b + c == 0)
    return OracleCounts(solutions, instance.n ** 3)


def oracle_nwt(instance: NwtInstance) -> OracleCounts:
    """Count ordered vertex triples forming a triangle of negative total weight.

    Works straight off the edge list, not the circuit's matrix encoding:
    all three edges must exist (which rules out repeated vertices) and the
    plain weights must sum below zero.
    """
    weight = {}
    for i, j, w in instance.edges:
        weight[(i, j)] = w
        weight[(j, i)] = w
    rng = range(1, instance.n + 1)
    solutions = 0
    for x in rng:
        for y in rng:
            if (x, y) not in weight:
                continue
            for z in rng:
                if (y, z) in weight and (x, z) in weight \
                        and weight[(x, y)] + weight[(y, z)] + weight[(x, z)] < 0:
                    solutions += 1
    return OracleCounts(solutions, instance.n ** 3)


def oracle_counts(instance: Instance) -> OracleCounts:
    if isinstance(instance, OVInstance):
        return oracle_ov(instance)
    if isinstance(instance, ThreeSumInstance):
        return oracle_threesum(instance)
    if isinstance(instance, NwtInstance):
        return oracle_nwt(instance)
    raise InstanceError(f"unknown instance type {type(instance).__name__}")


def predicted_pacc(problem: str, r: int, d: int, gap: int) -> Fraction:
    return Fraction(gap * gap, 1 << denom_exponent(problem, r, d))


# --- gate accounting ---------------------------------------------------------

_SMALL_CONTROL_NOTE = (
    "multi-controlled flips with <= 3 controls charged at the small-control "
    "costs (1 control -> 1, 2 -> 1, 3 -> 4 primitives)"
)


def tally_gates(circuit) -> dict[str, dict[str, int]]:
    """Per-step primitive counts with multi-controlled flips expanded.

    The CCX row counts Toffoli-equivalent primitives: literal Toffolis plus
    the expansion cost popcount(mask) * mcx_toffoli_cost(#controls) of each
    bitmask flip (a single-control expansion is really a CX but is charged
    here, consistently with the budgets).  QRAM counts lookup gates.
    """
    per_step: dict[str, dict[str, int]] = {}
    for gate, step in zip(circuit.gates, circuit.steps):
        row = per_step.setdefault(step, {})
        if isinstance(gate, H):
            kind, amount = "H", 1
        elif isinstance(gate, X):
            kind, amount = "X", 1
        elif isinstance(gate, Z):
            kind, amount = "Z", 1
        elif isinstance(gate, CX):
            kind, amount = "CX", 1
        elif isinstance(gate, Toffoli):
            kind, amount = "CCX", 1
        elif isinstance(gate, MCBitmask):
            kind = "CCX"
            amount = gate.mask.popcount() * mcx_toffoli_cost(len(gate.controls))
        elif isinstance(gate, QramLoad):
            kind, amount = "QRAM", 1
        else:
            raise InstanceError(f"unknown gate {gate!r}")
        if amount:
            row[kind] = row.get(kind, 0) + amount
    return per_step


def step_gate_bounds(problem: str, mode: str, n: int, r: int, d: int) -> dict[str, dict[str, int]]:
    """Per-step budgets the builders must stay within.

    Rows driven by multi-controlled decompositions use mcx_toffoli_cost in
    place of the asymptotic 8(k-3) factor, which agrees with it for k >= 4
    and substitutes the documented small-control costs below that.
    """
    cost = mcx_toffoli_cost
    qram = mode == MODE_QRAM
    if problem == PROBLEM_OV:
        load = {"QRAM": 2} if qram else {"X": 4 * n * r, "CCX": 2 * n * d * cost(r)}
        return {
            "1": {"H": 2 * r, "X": r},
            "2": {"X": 4 * r + 6, "CX": 8 * r + 2, "CCX": 4 * r},
            "3": load,
            "4": {"CCX": d},
            "5": {"X": 2 * d, "CCX": cost(d)},
            "6": {"Z": 1},
        }
    if problem == PROBLEM_3SUM:
        load = {"QRAM": 3} if qram else {"X": 6 * n * r, "CCX": 3 * n * d * cost(r)}
        return {
            "1": {"H": 3 * r, "X": r},
            "2": {"X": 6 * r + 9, "CX": 12 * r + 3, "CCX": 6 * r},
            "3": load,
            "4": {"CX": 4 * d + 1, "CCX": 2 * d},
            "5": {"CX": 4 * d + 5, "CCX": 2 * d + 2},
            "6": {"X": 2 * d + 4, "CCX": cost(d + 2)},
            "7": {"Z": 1},
        }
    if problem == PROBLEM_NWT:
        pairs = 1 << (2 * r)
        load = {"QRAM": 3} if qram else {"X": 12 * r * pairs, "CCX": 3 * pairs * d * cost(2 * r)}
        return {
            "1": {"H": 3 * r, "X": r},
            "2": {"X": 6 * r + 9, "CX": 12 * r + 3, "CCX": 6 * r},
            "3": load,
            "4": {"X": 6 * d, "CCX": 3 * cost(d)},
            "5": {"CX": 8 * d + 6, "CCX": 4 * d + 2},
            "6": {"X": 3 * d + 8, "CX": 4 * d + 9, "CCX": 2 * d + 4},
            "7": {"X": 8, "CCX": 10},
            "8": {"Z": 1},
        }
    raise InstanceError(f"unknown problem {problem!r}")


@dataclass(frozen=True)
class GateCountReport:
    per_step: dict[str, dict[str, int]]
    bounds: dict[str, dict[str, int]]
    ok: bool
    notes: tuple[str, ...]

    def totals(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for row in self.per_step.values():
            for kind, count in row.items():
                out[kind] = out.get(kind, 0) + count
        return out


def gate_accountant(built: BuiltCircuit) -> GateCountReport:
    """Compare actual per-step counts against the budgets; all must be <=."""
    per_step = tally_gates(built.circuit)
    bounds = step_gate_bounds(built.problem, built.mode, built.n, built.r, built.d)
    ok = True
    for step, row in per_step.items():
        allowed = bounds.get(step, {})
        for kind, count in row.items():
            if count > allowed.get(kind, 0):
                ok = False
    notes = []
    if any(isinstance(g, MCBitmask) and g.mask.popcount() and len(g.controls) <= 3
           for g in built.circuit.gates):
        notes.append(_SMALL_CONTROL_NOTE)
    return GateCountReport(per_step, bounds, ok, tuple(notes))


# --- whole-instance verification ---------------------------------------------


@dataclass(frozen=True)
class VerifyResult:
    problem: str
    mode: str
    n: int
    r: int
    d: int
    bound: int | None
    oracle: OracleCounts
    outcome: SimOutcome
    predicted: Fraction
    identity_ok: bool
    magnitude_ok: bool
    sign_flips: bool
    n_qubits: int
    qubits_ok: bool
    gates: GateCountReport
    dense_value: float | None
    dense_ok: bool | None

    @property
    def ok(self) -> bool:
        return (self.identity_ok and self.magnitude_ok and self.qubits_ok
                and self.gates.ok and self.dense_ok is not False)

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "mode": self.mode,
            "n": self.n,
            "r": self.r,
            "d": self.d,
            "bound": self.bound,
            "oracle": {
                "solutions": self.oracle.solutions,
                "total": self.oracle.total,
                "gap": self.oracle.gap,
            },
            "simulated": {
                "signed_sum": self.outcome.signed_sum,
                "exponent": self.outcome.exponent,
                "branches": self.outcome.n_branches,
                "accepted": self.outcome.n_accepted,
                "p_acc": str(self.outcome.p_acc),
                "p_acc_float": float(self.outcome.p_acc),
            },
            "predicted": {"p_acc": str(self.predicted), "p_acc_float": float(self.predicted)},
            "identity_ok": self.identity_ok,
            "magnitude_ok": self.magnitude_ok,
            "sign_flips": self.sign_flips,
            "n_qubits": self.n_qubits,
            "qubits_ok": self.qubits_ok,
            "gates": {
                "ok": self.gates.ok,
                "per_step": self.gates.per_step,
                "bounds": self.gates.bounds,
                "notes": list(self.gates.notes),
            },
            "dense": None if self.dense_value is None else {
                "p_acc": self.dense_value,
                "tolerance": DENSE_TOLERANCE,
                "ok": self.dense_ok,
            },
            "ok": self.ok,
        }


def verify_built(instance: Instance, built: BuiltCircuit, *, with_dense: bool = False,
                 dense_cap: int = DENSE_CAP_DEFAULT, branch_cap: int = BRANCH_CAP_DEFAULT,
                 jobs: int = 1) -> VerifyResult:
    """Check the acceptance identity of an already-built circuit."""
    counts = oracle_counts(instance)
    outcome = simulate_pathsum(built.circuit, branch_cap=branch_cap, jobs=jobs)
    predicted = predicted_pacc(built.problem, built.r, built.d, counts.gap)
    dense_value: float | None = None
    dense_ok: bool | None = None
    if with_dense:
        dense_value = dense_acceptance(built.circuit, simulate_dense(built.circuit, cap=dense_cap))
        dense_ok = abs(dense_value - float(outcome.p_acc)) <= DENSE_TOLERANCE
    return VerifyResult(
        problem=built.problem,
        mode=built.mode,
        n=built.n,
        r=built.r,
        d=built.d,
        bound=built.bound,
        oracle=counts,
        outcome=outcome,
        predicted=predicted,
        identity_ok=outcome.p_acc == predicted,
        magnitude_ok=abs(outcome.signed_sum) == abs(counts.gap),
        sign_flips=outcome.signed_sum == -counts.gap,
        n_qubits=built.circuit.n_qubits,
        qubits_ok=built.circuit.n_qubits == qubit_formula(built.problem, built.r, built.d),
        gates=gate_accountant(built),
        dense_value=dense_value,
        dense_ok=dense_ok,
    )


def verify_instance(instance: Instance, mode: str = MODE_QRAM, *, with_dense: bool = False,
                    dense_cap: int = DENSE_CAP_DEFAULT, branch_cap: int = BRANCH_CAP_DEFAULT,
                    jobs: int = 1) -> VerifyResult:
    """Build one mode of the instance's circuit and verify it."""
    built = build_circuit(instance, mode)
    return verify_built(instance, built, with_dense=with_dense, dense_cap=dense_cap,
                        branch_cap=branch_cap, jobs=jobs)


def render_report(result: VerifyResult) -> str:
    """Flat `key: value` text rendering of one verification result."""
    lines = [
        f"problem: {result.problem}",
        f"mode: {result.mode}",
        f"n: {result.n}",
        f"index_width: {result.r}",
        f"data_width: {result.d}",
        f"bound: {'-' if result.bound is None else result.bound}",
        f"oracle.solutions: {result.oracle.solutions}",
        f"oracle.total: {result.oracle.total}",
        f"oracle.gap: {result.oracle.gap}",
        f"sim.signed_sum: {result.outcome.signed_sum}",
        f"sim.exponent: {result.outcome.exponent}",
        f"sim.branches: {result.outcome.n_branches}",
        f"sim.accepted: {result.outcome.n_accepted}",
        f"sim.p_acc: {result.outcome.p_acc}",
        f"predicted.p_acc: {result.predicted}",
        f"identity: {'pass' if result.identity_ok else 'FAIL'}",
        f"magnitude: {'pass' if result.magnitude_ok else 'FAIL'}",
        f"sign_flips: {result.sign_flips}",
        f"qubits: {result.n_qubits} ({'pass' if result.qubits_ok else 'FAIL'})",
        f"gates: {'pass' if result.gates.ok else 'FAIL'}",
    ]
    for note in result.gates.notes:
        lines.append(f"gates.note: {note}")
    if result.dense_value is not None:
        lines.append(f"dense.p_acc: {result.dense_value!r}")
        lines.append(f"dense.agree: {'pass' if result.dense_ok else 'FAIL'}")
    lines.append(f"overall: {'pass' if result.ok else 'FAIL'}")
    return "\n".join(lines)
