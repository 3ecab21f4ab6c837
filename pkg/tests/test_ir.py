"""IR construction rules: registers, gate validation, measurement plans."""

import pytest
from hypothesis import given, strategies as st

from gapcircuits.ir import (
    BitString,
    CX,
    CircuitError,
    H,
    MCBitmask,
    QramLoad,
    Toffoli,
    X,
    Z,
    mcx_toffoli_cost,
    new_circuit,
)
from gapcircuits.dataload import DataTable


def test_bitstring_int_round_trip():
    bs = BitString.from_int(6, 4)
    assert bs.bits == (0, 1, 1, 0)
    assert bs.to_int() == 6
    assert bs.width == 4
    assert bs.popcount() == 2
    assert list(bs) == [0, 1, 1, 0]
    assert bs[1] == 1


@given(st.integers(min_value=0, max_value=2**16 - 1), st.integers(min_value=16, max_value=20))
def test_bitstring_round_trip_property(value, width):
    assert BitString.from_int(value, width).to_int() == value


def test_bitstring_rejects_bad_bits():
    with pytest.raises(CircuitError):
        BitString((0, 2))
    with pytest.raises(CircuitError):
        BitString.from_int(4, 2)
    with pytest.raises(CircuitError):
        BitString.from_int(-1, 4)


def test_register_layout():
    circ = new_circuit([("a", 2), ("b", 3)])
    assert circ.n_qubits == 5
    assert circ.reg("a").qubits == (0, 1)
    assert circ.reg("b").qubits == (2, 3, 4)
    assert circ.reg("b")[0] == 2
    with pytest.raises(CircuitError):
        circ.reg("b")[3]
    with pytest.raises(CircuitError):
        circ.reg("missing")
    with pytest.raises(CircuitError):
        new_circuit([("a", 0)])
    with pytest.raises(CircuitError):
        new_circuit([("a", 1), ("a", 1)])


def test_h_only_in_leading_layer():
    circ = new_circuit([("q", 3)])
    circ.begin_step("1")
    circ.add(H(0))
    circ.add(H(1))
    assert circ.h_layer_size == 2
    circ.add(X(2))
    with pytest.raises(CircuitError):
        circ.add(H(2))


def test_begin_step_required_and_validated():
    circ = new_circuit([("q", 1)])
    with pytest.raises(CircuitError):
        circ.add(X(0))
    with pytest.raises(CircuitError):
        circ.begin_step("bad step")
    circ.begin_step("1")
    circ.add(X(0))
    assert circ.steps == ["1"]


def test_gate_operand_validation():
    circ = new_circuit([("q", 5)])
    circ.begin_step("1")
    with pytest.raises(CircuitError):
        circ.add(X(5))
    with pytest.raises(CircuitError):
        circ.add(CX(1, 1))
    with pytest.raises(CircuitError):
        circ.add(Toffoli(0, 0, 1))
    with pytest.raises(CircuitError):
        circ.add(MCBitmask((), BitString((1,)), (1,), 2))
    with pytest.raises(CircuitError):  # mask width must match target count
        circ.add(MCBitmask((0,), BitString((1, 0)), (1,), 2))
    with pytest.raises(CircuitError):  # control and target overlap
        circ.add(MCBitmask((0,), BitString((1,)), (0,), 2))
    with pytest.raises(CircuitError):  # ancilla collides with a target
        circ.add(MCBitmask((0,), BitString((1,)), (1,), 1))
    with pytest.raises(CircuitError):  # ancilla collides with a control
        circ.add(MCBitmask((0, 1), BitString((1, 1)), (2, 3), 0))
    circ.add(MCBitmask((0, 1), BitString((1, 1)), (2, 3), 4))
    circ.add(Z(0))
    assert len(circ.gates) == 2


def test_qram_gate_requires_registered_table():
    circ = new_circuit([("addr", 2), ("data", 2)])
    circ.begin_step("1")
    with pytest.raises(CircuitError):
        circ.add(QramLoad((0, 1), (2, 3), "t"))
    table = DataTable.from_values("t", [3], address_width=2, data_width=2)
    circ.add_table(table)
    circ.add(QramLoad((0, 1), (2, 3), "t"))
    with pytest.raises(CircuitError):  # width mismatch vs the registered table
        circ.add(QramLoad((0,), (2, 3), "t"))
    with pytest.raises(CircuitError):  # overlapping address and data wires
        circ.add(QramLoad((0, 1), (1, 3), "t"))
    # re-registering identical content is fine, different content is not
    circ.add_table(table)
    with pytest.raises(CircuitError):
        circ.add_table(DataTable.from_values("t", [1], address_width=2, data_width=2))


def test_measurement_plan_must_partition():
    circ = new_circuit([("q", 3)])
    circ.set_measurement((0,), (1,), (2,))
    assert circ.measurement.z_qubits == (0,)
    with pytest.raises(CircuitError):
        circ.set_measurement((0,), (1,), ())
    with pytest.raises(CircuitError):
        circ.set_measurement((0, 0), (1,), (2,))


def test_mcx_toffoli_cost_schedule():
    assert [mcx_toffoli_cost(k) for k in (1, 2, 3, 4, 5, 10)] == [1, 1, 4, 8, 16, 56]
    with pytest.raises(CircuitError):
        mcx_toffoli_cost(0)
