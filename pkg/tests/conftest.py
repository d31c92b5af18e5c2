import numpy as np

from quditsim import Circuit, GateKind, GateSpec

ONE_WIRE_KINDS = (GateKind.X, GateKind.Z, GateKind.H, GateKind.S)
TWO_WIRE_KINDS = (GateKind.CZ, GateKind.CNOT)


def random_mixed_circuit(rng, max_qudits=4, max_dim=5, max_depth=12) -> Circuit:
    """Measurement-free circuit with per-wire dimensions drawn independently;
    two-wire gates only land on equal-dimension wire pairs."""
    n = int(rng.integers(1, max_qudits + 1))
    dims = [int(rng.integers(2, max_dim + 1)) for _ in range(n)]
    circuit = Circuit()
    wires = [circuit.add_qudit(f"q{i}", d) for i, d in enumerate(dims)]
    pairs = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if i != j and dims[i] == dims[j]
    ]
    for _ in range(int(rng.integers(1, max_depth + 1))):
        if pairs and rng.random() < 0.4:
            i, j = pairs[int(rng.integers(len(pairs)))]
            kind = TWO_WIRE_KINDS[int(rng.integers(2))]
            circuit.apply(GateSpec(kind, (dims[i], dims[j])), wires[i], wires[j])
        else:
            w = int(rng.integers(n))
            kind = ONE_WIRE_KINDS[int(rng.integers(len(ONE_WIRE_KINDS)))]
            circuit.apply(GateSpec(kind, (dims[w],)), wires[w])
    return circuit


def random_unit_amps(rng, size: int) -> np.ndarray:
    amps = rng.normal(size=size) + 1j * rng.normal(size=size)
    return amps / np.linalg.norm(amps)
