import re
from pathlib import Path

import numpy as np
import pytest

from quditsim import (
    Circuit,
    MEASURE,
    build,
    moments,
    render_diagram,
    single,
    two_qudit,
)
from conftest import random_mixed_circuit

GOLDEN = Path(__file__).parent / "golden"


def golden(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8").rstrip("\n")


def manual_pair(with_keys=None):
    """H then CNOT on two qutrits named 0 and 1, optional measurement keys."""
    c = Circuit()
    q0 = c.add_qudit("0", 3)
    q1 = c.add_qudit("1", 3)
    c.apply(single("H", 3), q0)
    c.apply(two_qudit("CNOT", 3), q0, q1)
    if with_keys:
        c.measure(q0, with_keys[0])
        c.measure(q1, with_keys[1])
    return c


def test_manual_pair_matches_golden():
    assert render_diagram(manual_pair()) == golden("pair_manual.txt")


def test_builder_pair_matches_golden():
    circuit, _, _ = build(
        3, ("H", "q0"), ("CNOT", ["q0", "q1"]), (MEASURE, "q0"), (MEASURE, "q1")
    )
    assert render_diagram(circuit) == golden("pair_builder.txt")


def test_ghz3_matches_golden():
    c = Circuit()
    wires = [c.add_qudit(str(i), 3) for i in range(3)]
    c.apply(single("H", 3), wires[0])
    c.apply(two_qudit("CNOT", 3), wires[0], wires[1])
    c.apply(two_qudit("CNOT", 3), wires[1], wires[2])
    assert render_diagram(c) == golden("ghz3.txt")


def test_caller_chosen_measurement_keys_render():
    text = render_diagram(manual_pair(with_keys=("q1", "q2")))
    assert "M('q1')" in text and "M('q2')" in text


def test_empty_circuit_renders_empty_text():
    assert render_diagram(Circuit()) == ""


def test_cz_renders_control_glyph_on_both_wires():
    circuit, _, _ = build(3, ("CZ", ["a", "b"]))
    lines = render_diagram(circuit).splitlines()
    assert lines[0].count("C(d=3)") == 1
    assert lines[2].count("C(d=3)") == 1
    assert "|" in lines[1]


def test_power_glyph():
    circuit, _, _ = build(4, ("Z", "q0", 2))
    assert "Z^2(d=4)" in render_diagram(circuit)


def test_labels_pad_to_common_width():
    circuit, _, _ = build(3, ("H", ["q0", "q10"]))
    lines = render_diagram(circuit).splitlines()
    assert len(lines[0]) == len(lines[1])
    assert lines[1].startswith("q10 (d=3): ")


CELL = re.compile(r"[A-Z]+(?:\^-?\d+)?\(d=\d+\)|M\('[^']+'\)")


def recover_structure(text: str):
    """(wire rows' glyphs grouped by column offset, connector columns)."""
    wire_rows = []
    connectors = []
    for line in text.splitlines():
        if ": " in line:
            body_at = line.index(": ") + 2
            wire_rows.append((len(wire_rows), line))
        else:
            connectors.append({i for i, ch in enumerate(line) if ch == "|"})
    by_offset: dict[int, list[tuple[int, str]]] = {}
    for row, line in wire_rows:
        for m in CELL.finditer(line):
            by_offset.setdefault(m.start(), []).append((row, m.group(0)))
    return by_offset, connectors


def expected_cells(circuit):
    from quditsim.circuit import _glyphs

    cols = moments(circuit)
    out = []
    for ops in cols:
        cells = []
        for op in ops:
            cells.extend(_glyphs(circuit, op))
        out.append(sorted(cells))
    return out


def test_rendering_recovers_moment_structure():
    rng = np.random.default_rng(23)
    for _ in range(30):
        circuit = random_mixed_circuit(rng, max_qudits=4, max_dim=5, max_depth=10)
        text = render_diagram(circuit)
        by_offset, _ = recover_structure(text)
        recovered = [sorted(v) for _, v in sorted(by_offset.items())]
        assert recovered == expected_cells(circuit)


def test_connectors_sit_between_spanned_rows():
    from quditsim import DECLARE

    circuit, _, _ = build(
        3, (DECLARE, "a"), (DECLARE, "b"), (DECLARE, "c"), ("CNOT", ["a", "c"]), ("H", "b")
    )
    lines = render_diagram(circuit).splitlines()
    # Rows: a, connector, b, connector, c. The gate spans both gaps.
    assert len(lines) == 5
    col = lines[0].index("C(d=3)") + 2
    assert lines[1][col] == "|"
    assert lines[3][col] == "|"
    assert "H(d=3)" in lines[2]
