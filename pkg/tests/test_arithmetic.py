"""Exhaustive checks of the ripple-carry adder and both comparators.

Every basis state of the standalone arithmetic block is pushed through
the path-sum word simulator, so each case is checked on all inputs,
including dirty initial values of the output bit.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapcircuits.arithmetic import (
    ArithLayout,
    emit_adder,
    emit_comparator_ge,
    emit_comparator_gt,
)
from gapcircuits.ir import CX, CircuitError, Toffoli, X, new_circuit
from gapcircuits.simulator import apply_gates


def _block(width):
    """Circuit with layout [anc | a | b | out] and every basis word."""
    circ = new_circuit([("anc", 1), ("a", width), ("b", width), ("out", 1)])
    circ.begin_step("arith")
    layout = ArithLayout(ancilla=0, a=tuple(range(1, width + 1)),
                         b=tuple(range(width + 1, 2 * width + 1)), out=2 * width + 1)
    words = np.arange(1 << circ.n_qubits, dtype=np.int64)
    return circ, layout, words


def _fields(words, width):
    mask = (1 << width) - 1
    return (words & 1, (words >> 1) & mask,
            (words >> (width + 1)) & mask, (words >> (2 * width + 1)) & 1)


@pytest.mark.parametrize("width", range(1, 7))
def test_adder_exhaustive(width):
    circ, layout, words = _block(width)
    emit_adder(circ, layout)
    anc0, a0, b0, out0 = _fields(words, width)
    done, _ = apply_gates(circ, words.copy())
    anc1, a1, b1, out1 = _fields(done, width)

    total = a0 + b0 + anc0  # carry-in rides the ancilla
    np.testing.assert_array_equal(anc1, anc0)
    np.testing.assert_array_equal(a1, a0)
    np.testing.assert_array_equal(b1, total & ((1 << width) - 1))
    np.testing.assert_array_equal(out1, out0 ^ (total >> width))


@pytest.mark.parametrize("width", range(1, 7))
def test_comparator_ge_exhaustive(width):
    circ, layout, words = _block(width)
    emit_comparator_ge(circ, layout)
    anc0, a0, b0, out0 = _fields(words, width)
    done, _ = apply_gates(circ, words.copy())
    anc1, a1, b1, out1 = _fields(done, width)

    np.testing.assert_array_equal(anc1, anc0)
    np.testing.assert_array_equal(a1, a0)
    np.testing.assert_array_equal(b1, b0)
    clean = anc0 == 0
    np.testing.assert_array_equal(out1[clean], (out0 ^ (a0 >= b0))[clean])


@pytest.mark.parametrize("width", range(1, 7))
def test_comparator_gt_exhaustive(width):
    circ, layout, words = _block(width)
    emit_comparator_gt(circ, layout)
    anc0, a0, b0, out0 = _fields(words, width)
    done, _ = apply_gates(circ, words.copy())
    anc1, a1, b1, out1 = _fields(done, width)

    np.testing.assert_array_equal(anc1, anc0)
    np.testing.assert_array_equal(a1, a0)
    np.testing.assert_array_equal(b1, b0)
    clean = anc0 == 0
    np.testing.assert_array_equal(out1[clean], (out0 ^ (a0 > b0))[clean])


def _tally(circ):
    counts = {"X": 0, "CX": 0, "Toffoli": 0}
    for gate in circ.gates:
        counts[type(gate).__name__] += 1
    return counts


@pytest.mark.parametrize("width", range(1, 9))
def test_exact_gate_tallies(width):
    circ, layout, _ = _block(width)
    emit_adder(circ, layout)
    assert _tally(circ) == {"X": 0, "CX": 4 * width + 1, "Toffoli": 2 * width}

    circ, layout, _ = _block(width)
    emit_comparator_ge(circ, layout)
    assert _tally(circ) == {"X": 2 * width + 2, "CX": 4 * width + 1, "Toffoli": 2 * width}

    circ, layout, _ = _block(width)
    emit_comparator_gt(circ, layout)
    assert _tally(circ) == {"X": 2 * width + 3, "CX": 4 * width + 1, "Toffoli": 2 * width}

    assert all(isinstance(g, (X, CX, Toffoli)) for g in circ.gates)


@settings(max_examples=60)
@given(st.integers(min_value=1, max_value=10), st.data())
def test_comparators_match_oracle(width, data):
    a = data.draw(st.integers(min_value=0, max_value=(1 << width) - 1))
    b = data.draw(st.integers(min_value=0, max_value=(1 << width) - 1))
    word = (a << 1) | (b << (width + 1))

    circ, layout, _ = _block(width)
    emit_comparator_ge(circ, layout)
    done, _ = apply_gates(circ, np.array([word], dtype=np.int64))
    assert (done[0] >> (2 * width + 1)) & 1 == (a >= b)

    circ, layout, _ = _block(width)
    emit_comparator_gt(circ, layout)
    done, _ = apply_gates(circ, np.array([word], dtype=np.int64))
    assert (done[0] >> (2 * width + 1)) & 1 == (a > b)


def test_layout_validation():
    with pytest.raises(CircuitError):
        ArithLayout(ancilla=0, a=(1, 2), b=(3,), out=4)
    with pytest.raises(CircuitError):
        ArithLayout(ancilla=0, a=(1,), b=(1,), out=2)
    with pytest.raises(CircuitError):
        ArithLayout(ancilla=0, a=(), b=(), out=1)
