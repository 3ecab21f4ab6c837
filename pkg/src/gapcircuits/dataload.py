"""Lookup tables and the two ways of wiring them into a circuit.

A table can be consulted through a single QramLoad gate (one lookup per
path-sum branch, counted as an oracle call), or spelled out as a product of
X-conjugated multi-controlled bitmask flips, one per stored address.  Both
XOR the addressed value into the data qubits, so they implement the same
basis-state map; the product terms commute, making the emission order
irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .ir import BitString, Circuit, CircuitError, QramLoad, X, emit_mcbitmask


@dataclass(frozen=True)
class DataTable:
    """Partial map from address_width-bit addresses to data_width-bit values.

    Entries are sorted (address, value) pairs; addresses absent from the
    table read as zero.
    """

    table_id: str
    address_width: int
    data_width: int
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.address_width < 1 or self.data_width < 1:
            raise CircuitError("table widths must be positive")
        seen = set()
        for address, value in self.entries:
            if not 0 <= address < (1 << self.address_width):
                raise CircuitError(f"address {address} out of range for width {self.address_width}")
            if not 0 <= value < (1 << self.data_width):
                raise CircuitError(f"value {value} does not fit in {self.data_width} bits")
            if address in seen:
                raise CircuitError(f"duplicate address {address}")
            seen.add(address)
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    @classmethod
    def from_values(cls, table_id: str, values, address_width: int, data_width: int) -> DataTable:
        """Table of consecutive addresses 0..len(values)-1."""
        entries = tuple((a, int(v)) for a, v in enumerate(values))
        return cls(table_id, address_width, data_width, entries)

    @cached_property
    def _map(self) -> dict[int, int]:
        return dict(self.entries)

    def lookup(self, address: int) -> int:
        return self._map.get(address, 0)


def qram_semantics(table: DataTable, address: int, data: int) -> int:
    """Reference semantics of one load: the stored value XORs into data."""
    return data ^ table.lookup(address)


def emit_qram_load(circuit: Circuit, table: DataTable, address_qubits, data_qubits) -> None:
    """Register the table on the circuit and append one lookup gate."""
    circuit.add_table(table)
    circuit.add(QramLoad(tuple(address_qubits), tuple(data_qubits), table.table_id))


def emit_loader_unitary(circuit: Circuit, table: DataTable, address_qubits, data_qubits,
                        ancilla: int) -> None:
    """Append the explicit product of per-address loads.

    Each stored address contributes an X-conjugated bitmask flip: X on the
    address qubits where the address bit is 0, a flip of the value's bits
    controlled on the whole address register, then the X frame undone.
    """
    address_qubits = tuple(address_qubits)
    data_qubits = tuple(data_qubits)
    if len(address_qubits) != table.address_width or len(data_qubits) != table.data_width:
        raise CircuitError(
            f"table {table.table_id!r} is {table.address_width}->{table.data_width} bits, "
            f"wires are {len(address_qubits)}->{len(data_qubits)}"
        )
    for address, value in table.entries:
        frame = [address_qubits[t] for t in range(table.address_width) if not (address >> t) & 1]
        for q in frame:
            circuit.add(X(q))
        emit_mcbitmask(
            circuit,
            controls=address_qubits,
            mask=BitString.from_int(value, table.data_width),
            targets=data_qubits,
            ancilla=ancilla,
        )
        for q in frame:
            circuit.add(X(q))


def emit_pair_loader_unitary(circuit: Circuit, table: DataTable, addr1_qubits, addr2_qubits,
                             data_qubits, ancilla: int) -> None:
    """Explicit product for a pair-addressed table.

    The address is the concatenation (addr1 low, addr2 high); controls span
    both registers.  The table is expected to store every pair, sentinel
    entries included, so the product runs over all of them.
    """
    addr1_qubits = tuple(addr1_qubits)
    addr2_qubits = tuple(addr2_qubits)
    if len(addr1_qubits) + len(addr2_qubits) != table.address_width:
        raise CircuitError(
            f"pair table {table.table_id!r} has address width {table.address_width}, "
            f"wires supply {len(addr1_qubits)}+{len(addr2_qubits)}"
        )
    emit_loader_unitary(circuit, table, addr1_qubits + addr2_qubits, data_qubits, ancilla)


def emit_equality_flag(circuit: Circuit, qubits, pattern: BitString, flag: int,
                       ancilla: int) -> None:
    """XOR [qubits == pattern] into the flag qubit.

    X frames the qubits whose pattern bit is 0 so the all-ones control
    fires exactly on a match; the frame is undone afterwards.
    """
    qubits = tuple(qubits)
    if len(qubits) != pattern.width:
        raise CircuitError(f"pattern width {pattern.width} does not match {len(qubits)} qubits")
    frame = [qubits[t] for t in range(pattern.width) if pattern[t] == 0]
    for q in frame:
        circuit.add(X(q))
    emit_mcbitmask(circuit, controls=qubits, mask=BitString((1,)), targets=(flag,), ancilla=ancilla)
    for q in frame:
        circuit.add(X(q))
