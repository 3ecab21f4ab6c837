"""Oracles, the acceptance identity, and the gate-count accountant."""

import json
from fractions import Fraction

import pytest

from gapcircuits.builders import (
    MODE_EXPLICIT,
    MODE_QRAM,
    NwtInstance,
    OVInstance,
    ThreeSumInstance,
    build_circuit,
)
from gapcircuits.instancefile import generate_nwt, generate_ov, generate_threesum
from gapcircuits.ir import BitString, MCBitmask, Z, new_circuit
from gapcircuits.simulator import simulate_pathsum
from gapcircuits.verification import (
    gate_accountant,
    oracle_counts,
    oracle_nwt,
    oracle_ov,
    oracle_threesum,
    predicted_pacc,
    render_report,
    step_gate_bounds,
    tally_gates,
    verify_built,
    verify_instance,
)

OV_EXAMPLE = OVInstance(u=(BitString((1,)), BitString((0,))),
                        v=(BitString((1,)), BitString((0,))))
TRIANGLE = NwtInstance(n=3, weight_bound=1, edges=((1, 2, -1), (1, 3, -1), (2, 3, -1)))


def test_oracle_ov_frozen():
    counts = oracle_ov(OV_EXAMPLE)
    assert (counts.solutions, counts.total, counts.gap) == (3, 4, 2)


def test_oracle_threesum_frozen():
    # (-2, 1, 1) in each of three orders; sums run over ordered index triples
    counts = oracle_threesum(ThreeSumInstance(values=(-2, 1), bound=2))
    assert (counts.solutions, counts.total, counts.gap) == (3, 8, -2)
    counts = oracle_threesum(ThreeSumInstance(values=(0,), bound=1))
    assert (counts.solutions, counts.total, counts.gap) == (1, 1, 1)


def test_oracle_nwt_frozen():
    counts = oracle_nwt(TRIANGLE)
    assert (counts.solutions, counts.total, counts.gap) == (6, 27, -15)
    # flipping one weight to +2 makes the triangle non-negative
    counts = oracle_nwt(NwtInstance(n=3, weight_bound=2,
                                    edges=((1, 2, 2), (1, 3, -1), (2, 3, -1))))
    assert counts.solutions == 0


def test_predicted_pacc():
    assert predicted_pacc("ov", 1, 1, 2) == Fraction(4, 1 << 9)
    assert predicted_pacc("ov", 1, 1, 0) == 0
    assert predicted_pacc("nwt", 2, 2, -15) == Fraction(225, 1 << 32)


@pytest.mark.parametrize("mode", [MODE_QRAM, MODE_EXPLICIT])
def test_verify_frozen_examples(mode):
    for instance in (OV_EXAMPLE, ThreeSumInstance(values=(-2, 1), bound=2), TRIANGLE):
        result = verify_instance(instance, mode)
        assert result.ok, render_report(result)
        assert result.sign_flips  # observed S is always the negated gap here
        assert result.outcome.signed_sum == -result.oracle.gap


def test_verify_with_dense_cross_check():
    result = verify_instance(generate_ov(3, 2, seed=2), MODE_EXPLICIT, with_dense=True)
    assert result.dense_ok is True
    assert result.ok


def test_gap_zero_instance_accepts_nothing():
    inst = OVInstance(u=(BitString((1,)), BitString((1,))),
                      v=(BitString((1,)), BitString((0,))))
    assert oracle_ov(inst).gap == 0
    result = verify_instance(inst, MODE_QRAM)
    assert result.outcome.p_acc == 0
    assert result.ok


def test_mutated_circuit_is_detected():
    built = build_circuit(OV_EXAMPLE, MODE_QRAM)
    assert isinstance(built.circuit.gates[-1], Z)
    built.circuit.gates.pop()
    built.circuit.steps.pop()
    result = verify_built(OV_EXAMPLE, built)
    assert not result.identity_ok
    assert not result.ok


def test_exact_range_check_tallies():
    # step 2 is two width-r >-comparators, so its bounds are met exactly
    for n, d in ((2, 1), (5, 3), (8, 4)):
        built = build_circuit(generate_ov(n, d, seed=n), MODE_QRAM)
        report = gate_accountant(built)
        r = built.r
        assert report.per_step["2"] == {"X": 4 * r + 6, "CX": 8 * r + 2, "CCX": 4 * r}
        assert report.per_step["2"] == report.bounds["2"]


@pytest.mark.parametrize("mode", [MODE_QRAM, MODE_EXPLICIT])
@pytest.mark.parametrize("make,args", [
    (generate_ov, (6, 3)), (generate_threesum, (5, 16)), (generate_nwt, (5, 2)),
])
def test_accountant_within_bounds(make, args, mode):
    built = build_circuit(make(*args, seed=13), mode)
    report = gate_accountant(built)
    assert report.ok
    for step, kinds in report.per_step.items():
        for kind, count in kinds.items():
            assert count <= report.bounds[step].get(kind, 0), (step, kind)


def test_qram_mode_counts_loads_not_gates():
    built = build_circuit(generate_threesum(4, 8, seed=1), MODE_QRAM)
    report = gate_accountant(built)
    assert report.per_step["3"].get("QRAM") == 3
    assert "CCX" not in report.per_step["3"]


def test_tally_buckets_mcbitmask_into_ccx():
    circ = new_circuit([("q", 7)])
    circ.begin_step("s")
    # popcount(mask)=2 controlled flips on 4 controls: 2 * 8(4-3) primitives
    circ.add(MCBitmask((0, 1, 2, 3), BitString((1, 1)), (4, 5), ancilla=6))
    assert tally_gates(circ) == {"s": {"CCX": 16}}
    # 1-control masks are plain CXs but stay in the CCX bucket for bound checks
    circ.add(MCBitmask((0,), BitString((1,)), (4,), ancilla=6))
    assert tally_gates(circ)["s"]["CCX"] == 17


def test_step_bounds_table_spot_checks():
    bounds = step_gate_bounds("ov", MODE_QRAM, n=4, r=2, d=3)
    assert bounds["1"] == {"H": 4, "X": 2}
    assert bounds["3"] == {"QRAM": 2}
    assert bounds["6"] == {"Z": 1}
    explicit = step_gate_bounds("ov", MODE_EXPLICIT, n=4, r=2, d=3)
    assert explicit["3"] == {"X": 4 * 4 * 2, "CCX": 2 * 4 * 3 * 1}

    nwt = step_gate_bounds("nwt", MODE_EXPLICIT, n=4, r=2, d=3)
    assert nwt["3"] == {"X": 12 * 2 * 16, "CCX": 3 * 16 * 3 * 8}  # 4^r = 16, cost(2r) = 8


def test_report_serializes():
    result = verify_instance(OV_EXAMPLE, MODE_QRAM, with_dense=True)
    text = render_report(result)
    assert "identity: pass" in text
    assert "overall: pass" in text
    payload = json.loads(json.dumps(result.to_dict()))
    assert payload["ok"] is True
    assert payload["simulated"]["p_acc"] == "1/128"
