"""Mixed-radix statevector evolution, measurement with collapse, and
repetition sampling.

The gate kernel never materializes a full-space unitary: the state is viewed
as a tensor with one axis per wire, the gate tensor is contracted into the
targeted axes, and the axes are moved back in place. Cost is O(D * k) to
apply a k x k gate matrix to D amplitudes, versus O(D^2) for a dense multiply.

Randomness is driven by numpy's SeedSequence/PCG64. `run` derives one child
SeedSequence per repetition via `SeedSequence(seed).spawn(repetitions)`, so
repetition i sees the same stream whether repetitions execute serially or
concurrently.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .circuit import Circuit, GateApplication, Measurement
from .gates import resolve
from .numerics import check_dims, mixed_radix_decode, mixed_radix_encode

NORM_TOL = 1e-8


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over the mixed-radix space of `dims`. Normalized
    within 1e-8; construction rejects anything else."""

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", check_dims(self.dims))
        amps = np.ascontiguousarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != prod(self.dims):
            raise ValueError(
                f"{amps.size} amplitudes do not fill dims {self.dims}"
            )
        norm = np.linalg.norm(amps)
        if not abs(norm - 1.0) <= NORM_TOL:  # NaN fails this too
            raise ValueError(f"state norm {norm} is not 1 within {NORM_TOL}")
        object.__setattr__(self, "amps", amps)

    def amplitude(self, digits) -> complex:
        return complex(self.amps[mixed_radix_encode(digits, self.dims)])

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.amps, other.amps)


@dataclass
class MeasurementTable:
    """Per-key digit sequences, one digit per repetition, plus each key's
    wire dimension for base-d rendering."""

    records: dict[str, list[int]] = field(default_factory=dict)
    key_dims: dict[str, int] = field(default_factory=dict)

    def add(self, key: str, dim: int, digit: int) -> None:
        self.records.setdefault(key, []).append(digit)
        self.key_dims[key] = dim

    def repetitions(self) -> int:
        counts = {len(v) for v in self.records.values()}
        if len(counts) > 1:
            raise ValueError(f"uneven repetition counts per key: {counts}")
        return counts.pop() if counts else 0

    def formatted(self, key: str) -> str:
        """Digits of one key across repetitions, concatenated in base d;
        commas separate digits when the wire dimension exceeds 10."""
        digits = self.records[key]
        sep = "," if self.key_dims[key] > 10 else ""
        return sep.join(str(x) for x in digits)

    def lines(self) -> list[str]:
        return [f"{key}={self.formatted(key)}" for key in self.records]


@dataclass(frozen=True)
class RunResult:
    """Sampling outcome: replaying `run` with the recorded seed reproduces
    the table exactly."""

    table: MeasurementTable
    repetitions: int
    seed: int


def basis_state(dims, digits) -> StateVector:
    """|digits> over the given dims: amplitude 1 at the encoded index."""
    dims = check_dims(dims)
    amps = np.zeros(prod(dims), dtype=complex)
    amps[mixed_radix_encode(digits, dims)] = 1.0
    return StateVector(dims, amps)


def _apply_kernel(amps: np.ndarray, dims, matrix: np.ndarray, wires) -> np.ndarray:
    """Contract a gate into the targeted axes of the state tensor."""
    k = len(wires)
    target_dims = tuple(dims[w] for w in wires)
    psi = amps.reshape(dims)
    gate = np.asarray(matrix, dtype=complex).reshape(target_dims * 2)
    psi = np.tensordot(gate, psi, axes=(tuple(range(k, 2 * k)), tuple(wires)))
    psi = np.moveaxis(psi, range(k), wires)
    return np.ascontiguousarray(psi).reshape(-1)


def apply_gate(state: StateVector, matrix: np.ndarray, wires) -> StateVector:
    """Apply a unitary to the listed wires (any order, any positions)."""
    wires = tuple(int(w) for w in wires)
    if len(set(wires)) != len(wires):
        raise ValueError(f"repeated wire index in {wires}")
    for w in wires:
        if not 0 <= w < len(state.dims):
            raise ValueError(f"wire index {w} out of range for dims {state.dims}")
    matrix = np.asarray(matrix, dtype=complex)
    side = prod(state.dims[w] for w in wires)
    if matrix.shape != (side, side):
        raise ValueError(
            f"matrix shape {matrix.shape} does not match target dims "
            f"{tuple(state.dims[w] for w in wires)}"
        )
    return StateVector(state.dims, _apply_kernel(state.amps, state.dims, matrix, wires))


def _measure_digit(amps: np.ndarray, dims, wire: int, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Sample the wire's marginal, collapse, renormalize."""
    psi = amps.reshape(dims)
    other_axes = tuple(a for a in range(len(dims)) if a != wire)
    probs = np.abs(psi) ** 2
    if other_axes:
        probs = probs.sum(axis=other_axes)
    probs = probs / probs.sum()
    digit = int(rng.choice(dims[wire], p=probs))
    sel = [slice(None)] * len(dims)
    sel[wire] = digit
    collapsed = np.zeros_like(psi)
    collapsed[tuple(sel)] = psi[tuple(sel)] / np.sqrt(probs[digit])
    return digit, collapsed.reshape(-1)


def simulate(
    circuit: Circuit,
    initial: StateVector | None = None,
    seed: int | np.random.Generator | None = None,
) -> tuple[StateVector, MeasurementTable]:
    """Run ops in program order; measurements sample, record, and collapse.

    Returns the final state and the single-shot measurement record. `seed`
    only matters when the circuit measures; it may be an int or a Generator.
    """
    dims = circuit.dims
    if initial is None:
        amps = np.zeros(prod(dims), dtype=complex)
        amps[0] = 1.0
    else:
        if initial.dims != dims:
            raise ValueError(
                f"initial state dims {initial.dims} do not match circuit dims {dims}"
            )
        amps = initial.amps.copy()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    table = MeasurementTable()
    for op in circuit.ops:
        if isinstance(op, Measurement):
            wire = circuit.wire_index(op.wire)
            digit, amps = _measure_digit(amps, dims, wire, rng)
            table.add(op.key, dims[wire], digit)
        else:
            wires = tuple(circuit.wire_index(w) for w in op.wires)
            amps = _apply_kernel(amps, dims, resolve(op.spec), wires)
    return StateVector(dims, amps), table


def _measurements_are_terminal(circuit: Circuit) -> bool:
    """True when no gate follows a measurement on the same wire."""
    measured: set[str] = set()
    for op in circuit.ops:
        if isinstance(op, Measurement):
            measured.add(op.wire.name)
        else:
            if any(w.name in measured for w in op.wires):
                return False
    return True


def run(circuit: Circuit, repetitions: int, seed: int | None = None) -> RunResult:
    """Sample the circuit's measurements over independent repetitions.

    Each repetition draws from its own SeedSequence child stream. When every
    measurement is terminal, the state is evolved once and the joint final
    distribution is sampled per repetition; otherwise each repetition
    re-executes with mid-circuit collapse.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    measurements = [op for op in circuit.ops if isinstance(op, Measurement)]
    if not measurements:
        raise ValueError("circuit has no measurements to sample")
    if seed is None:
        seed = secrets.randbits(64)
    streams = np.random.SeedSequence(seed).spawn(repetitions)

    table = MeasurementTable()
    dims = circuit.dims
    if _measurements_are_terminal(circuit):
        gates_only = Circuit()
        for q in circuit.qudits:
            gates_only.add_qudit(q.name, q.dimension)
        gates_only.extend(op for op in circuit.ops if isinstance(op, GateApplication))
        final, _ = simulate(gates_only)
        probs = np.abs(final.amps) ** 2
        probs = probs / probs.sum()
        for stream in streams:
            rng = np.random.default_rng(stream)
            index = int(rng.choice(len(probs), p=probs))
            digits = mixed_radix_decode(index, dims)
            for m in measurements:
                wire = circuit.wire_index(m.wire)
                table.add(m.key, dims[wire], digits[wire])
    else:
        for stream in streams:
            _, shot = simulate(circuit, seed=np.random.default_rng(stream))
            for key, digits in shot.records.items():
                table.add(key, shot.key_dims[key], digits[0])
    return RunResult(table=table, repetitions=repetitions, seed=seed)
