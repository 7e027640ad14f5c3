import itertools
import random

import pytest

from neqrseg import (
    Circuit,
    Control,
    GateKind,
    GateOp,
    QasmParseError,
    apply_to_basis,
    export_circuit_text,
    lower,
    parse_circuit_text,
    pos,
    neg,
)


def test_export_header_and_simple_gates():
    c = Circuit(3)
    c.h(0).x(1).cx(0, 2).ccx(0, 1, 2).reset(1)
    text = export_circuit_text(c)
    assert text.splitlines() == [
        "OPENQASM 2.0;",
        "qreg q[3];",
        "h q[0];",
        "x q[1];",
        "cx q[0],q[2];",
        "ccx q[0],q[1],q[2];",
        "reset q[1];",
    ]


def test_negative_control_exports_as_x_flank():
    c = Circuit(2)
    c.cx(neg(0), 1)
    body = export_circuit_text(c).splitlines()[2:]
    assert body == ["x q[0];", "cx q[0],q[1];", "x q[0];"]


def test_stage_comments_round_trip():
    c = Circuit(3)
    c.x(0)
    with c.stage("alpha"):
        c.x(1).x(2)
    c.x(0)
    with c.stage("beta"):
        c.reset(2)
    text = export_circuit_text(c)
    lines = text.splitlines()
    assert lines[3] == "// stage:alpha"
    assert lines[6] == "// stage:"  # unstaged gap after alpha
    parsed = parse_circuit_text(text)
    assert parsed.ops == lower(c).ops
    assert parsed.stages == lower(c).stages


def test_empty_stage_then_unstaged_tail():
    c = Circuit(2)
    with c.stage("empty"):
        pass
    c.x(0)
    parsed = parse_circuit_text(export_circuit_text(c))
    assert parsed.stages == lower(c).stages
    assert [op.kind for op in parsed.ops] == [GateKind.X]


def _random_op(rng, width):
    choices = ["h", "x", "reset", "cx", "ccx"]
    if width >= 5:
        choices.append("mcx")
    pick = rng.choice([k for k in choices if _min_width(k) <= width])
    if pick == "mcx":
        m = rng.randint(3, (width + 1) // 2)
        wires = rng.sample(range(width), m + 1)
        kind = GateKind.MCX
    else:
        arity = {"h": 1, "x": 1, "reset": 1, "cx": 2, "ccx": 3}[pick]
        wires = rng.sample(range(width), arity)
        kind = {
            "h": GateKind.H,
            "x": GateKind.X,
            "reset": GateKind.RESET,
            "cx": GateKind.CNOT,
            "ccx": GateKind.TOFFOLI,
        }[pick]
    controls = tuple(Control(w, rng.random() < 0.7) for w in wires[:-1])
    return GateOp(kind, wires[-1], controls)


def _min_width(kind):
    return {"h": 1, "x": 1, "reset": 1, "cx": 2, "ccx": 3, "mcx": 5}[kind]


def test_random_circuits_round_trip():
    rng = random.Random(20240817)
    for trial in range(40):
        width = rng.randint(1, 16)
        c = Circuit(width)
        total = rng.randint(0, 200)
        placed = 0
        while placed < total:
            if rng.random() < 0.4:
                run_len = min(rng.randint(1, 8), total - placed)
                with c.stage(f"s{len(c.stages)}"):
                    for _ in range(run_len):
                        c.append(_random_op(rng, width))
                placed += run_len
            else:
                c.append(_random_op(rng, width))
                placed += 1
        text = export_circuit_text(c)
        parsed = parse_circuit_text(text)
        low = lower(c)
        assert parsed.width == low.width
        assert parsed.ops == low.ops
        assert parsed.stages == low.stages
        # exporting an already-lowered circuit is a fixed point
        assert export_circuit_text(parsed) == text


def test_mcx_ladder_semantics_exhaustive():
    """The borrowed-ancilla expansion must act like MCX for *every* ancilla
    state, not just |0> ancillas."""
    for m in range(3, 7):
        width = 2 * m - 1  # controls + target + (m-2) borrowed wires
        c = Circuit(width)
        controls = tuple(range(m))
        c.controlled_x(controls, m)
        low = lower(c)
        assert all(op.kind is GateKind.TOFFOLI for op in low.ops)
        assert len(low.ops) == 4 * (m - 2)
        mcx = GateOp(GateKind.MCX, m, tuple(pos(qb) for qb in controls))
        for basis in range(1 << width):
            state = basis
            for op in low.ops:
                state = apply_to_basis(op, state)
            assert state == apply_to_basis(mcx, basis)


def test_mcx_with_negative_controls_lowered_correctly():
    width = 7
    c = Circuit(width)
    c.controlled_x((neg(0), neg(1), neg(2)), 3)
    low = lower(c)
    mcx = GateOp(GateKind.MCX, 3, (neg(0), neg(1), neg(2)))
    for basis in range(1 << width):
        state = basis
        for op in low.ops:
            state = apply_to_basis(op, state)
        assert state == apply_to_basis(mcx, basis)


def test_mcx_without_room_is_rejected():
    c = Circuit(4)
    c.controlled_x((0, 1, 2), 3)
    with pytest.raises(ValueError, match="spare"):
        export_circuit_text(c)


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("OPENQASM 2.0;\nqreg r[2];\n", 2, "named 'q'"),
        ("OPENQASM 2.0;\nqreg q[2];\nqreg q[2];\n", 3, "duplicate"),
        ("OPENQASM 2.0;\nh q[0];\n", 2, "before qreg"),
        ("OPENQASM 2.0;\nqreg q[2];\nrz q[0];\n", 3, "unknown mnemonic"),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0];\n", 3, "takes 2"),
        ("OPENQASM 2.0;\nqreg q[2];\nx q[5];\n", 3, "outside"),
        ("OPENQASM 2.0;\nqreg q[2];\nx q[0]\n", 3, "malformed"),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[0];\n", 3, "also be a control"),
        ("OPENQASM 2.0;\n", 1, "missing qreg"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(QasmParseError) as err:
        parse_circuit_text(text)
    assert err.value.line == line
    assert fragment in str(err.value)


def test_parser_tolerates_blank_lines_and_include():
    text = (
        "OPENQASM 2.0;\n"
        'include "qelib1.inc";\n'
        "\n"
        "qreg q[2];\n"
        "// a free comment\n"
        "x q[1];\n"
    )
    c = parse_circuit_text(text)
    assert c.width == 2
    assert [op.target for op in c.ops] == [1]


def test_all_toffoli_control_orders_parse_back():
    for a, b in itertools.permutations(range(3), 2):
        t = 3 - a - b
        c = Circuit(3)
        c.ccx(a, b, t)
        assert parse_circuit_text(export_circuit_text(c)).ops == c.ops
