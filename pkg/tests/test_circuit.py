import numpy as np
import pytest

from aignn.circuit import (
    Aig,
    CircuitSyntaxError,
    CycleDetected,
    DuplicateDefinition,
    GateKind,
    LatchesUnsupported,
    LiteralOutOfRange,
    MalformedHeader,
    Netlist,
    NoPrimaryInputs,
    UndefinedSignal,
    levelize,
    parse_aiger_ascii,
    parse_bench,
    structurally_equal,
    topo_order,
    write_aiger_ascii,
    write_bench,
)

SIMPLE_BENCH = "INPUT(a)\nINPUT(b)\nc = AND(a, b)\nOUTPUT(c)\n"

MINIMAL_AAG = "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n"


def test_parse_bench_simple():
    n = parse_bench(SIMPLE_BENCH)
    assert n.n_nodes == 3
    assert n.kinds == [GateKind.PI, GateKind.PI, GateKind.AND]
    assert n.fanins == [(), (), (0, 1)]
    assert n.outputs == [2]
    assert n.names == ["a", "b", "c"]


def test_parse_bench_case_and_comments():
    text = "# header\ninput(x1) # trailing\nInput(x2)\ny = nand(x1, x2)\noutput(y)\n"
    n = parse_bench(text)
    assert n.kinds[2] == GateKind.NAND
    assert n.outputs == [2]


def test_parse_bench_undefined_signal():
    with pytest.raises(UndefinedSignal):
        parse_bench("c = AND(a, b)\nOUTPUT(c)\n")


def test_parse_bench_self_loop():
    with pytest.raises(CycleDetected):
        parse_bench("INPUT(x)\na = NOT(a)\n")


def test_parse_bench_cycle():
    with pytest.raises(CycleDetected):
        parse_bench("INPUT(x)\na = NOT(b)\nb = NOT(a)\n")


def test_parse_bench_duplicate():
    with pytest.raises(DuplicateDefinition):
        parse_bench("INPUT(a)\nINPUT(a)\n")


def test_parse_bench_no_inputs():
    with pytest.raises(NoPrimaryInputs):
        parse_bench("# nothing\n")


def test_parse_bench_syntax_error_carries_line():
    with pytest.raises(CircuitSyntaxError) as e:
        parse_bench("INPUT(a)\nwhat is this\n")
    assert e.value.line == 2


def test_parse_bench_arity_errors():
    with pytest.raises(CircuitSyntaxError):
        parse_bench("INPUT(a)\nb = NOT(a, a)\n")
    with pytest.raises(CircuitSyntaxError):
        parse_bench("INPUT(a)\nb = AND(a)\n")


def test_parse_bench_forward_references_are_reordered():
    text = "INPUT(a)\nINPUT(b)\nd = NOT(c)\nc = AND(a, b)\nOUTPUT(d)\n"
    n = parse_bench(text)
    assert [n.names[i] for i in range(4)] == ["a", "b", "c", "d"]
    assert levelize(n) == [0, 0, 1, 2]


def test_levelize_chain():
    # c=AND(a,b); d=NOT(c); e=AND(d,a)
    n = parse_bench("INPUT(a)\nINPUT(b)\nc = AND(a, b)\nd = NOT(c)\ne = AND(d, a)\nOUTPUT(e)\n")
    assert levelize(n) == [0, 0, 1, 2, 3]


def test_levelize_isolated_pi():
    n = parse_bench("INPUT(a)\nINPUT(b)\nc = NOT(a)\nOUTPUT(c)\n")
    assert levelize(n)[1] == 0


def test_topo_diamond_partial_order():
    text = (
        "INPUT(a)\nINPUT(b)\ns = AND(a, b)\np = NOT(s)\nq = NOT(s)\n"
        "r = AND(p, q)\nOUTPUT(r)\n"
    )
    n = parse_bench(text)
    order = topo_order(n)
    pos = {v: i for i, v in enumerate(order)}
    s, p, q, r = 2, 3, 4, 5
    assert pos[s] < pos[p] and pos[s] < pos[q]
    assert pos[p] < pos[r] and pos[q] < pos[r]


def test_topo_pi_only():
    n = Netlist("pis", [GateKind.PI] * 3, [(), (), ()], outputs=[0, 1, 2]).validate()
    assert topo_order(n) == [0, 1, 2]


def test_bench_round_trip():
    n = parse_bench(SIMPLE_BENCH)
    again = parse_bench(write_bench(n))
    assert structurally_equal(n, again)


def test_bench_round_trip_all_gate_kinds():
    text = (
        "INPUT(a)\nINPUT(b)\nINPUT(c)\n"
        "g1 = AND(a, b)\ng2 = OR(b, c)\ng3 = NAND(a, c)\ng4 = NOR(g1, g2)\n"
        "g5 = XOR(g3, g4)\ng6 = NOT(g5)\ng7 = BUFF(g6)\n"
        "OUTPUT(g7)\nOUTPUT(g2)\n"
    )
    n = parse_bench(text)
    again = parse_bench(write_bench(n))
    assert structurally_equal(n, again)


def test_parse_aiger_minimal():
    aig = parse_aiger_ascii(MINIMAL_AAG)
    assert aig.kinds == [GateKind.PI, GateKind.PI, GateKind.AND]
    assert aig.fanins[2] == (0, 1)
    assert aig.outputs == [2]
    assert aig.levels == [0, 0, 1]


def test_parse_aiger_negated_output():
    aig = parse_aiger_ascii("aag 3 2 0 1 1\n2\n4\n7\n6 2 4\n")
    assert aig.kinds.count(GateKind.NOT) == 1
    o = aig.outputs[0]
    assert aig.kinds[o] == GateKind.NOT
    assert aig.kinds[aig.fanins[o][0]] == GateKind.AND


def test_parse_aiger_shared_not():
    # both ands consume ~2: only one NOT node materialized
    text = "aag 4 1 0 2 2\n2\n6\n8\n6 3 3\n8 3 2\n"
    aig = parse_aiger_ascii(text)
    assert aig.kinds.count(GateKind.NOT) == 1


def test_parse_aiger_latches_unsupported():
    with pytest.raises(LatchesUnsupported):
        parse_aiger_ascii("aag 1 1 1 1 0\n2\n4 2\n2\n")


def test_parse_aiger_malformed_header():
    with pytest.raises(MalformedHeader):
        parse_aiger_ascii("aig 3 2 0 1 1\n")
    with pytest.raises(MalformedHeader):
        parse_aiger_ascii("aag 3 2 0 1\n")


def test_parse_aiger_literal_out_of_range():
    with pytest.raises(LiteralOutOfRange):
        parse_aiger_ascii("aag 3 2 0 1 1\n2\n4\n99\n6 2 4\n")


def test_parse_aiger_constants_rejected():
    with pytest.raises(LiteralOutOfRange):
        parse_aiger_ascii("aag 3 2 0 1 1\n2\n4\n6\n6 0 4\n")


def test_aiger_round_trip():
    for text in (
        MINIMAL_AAG,
        "aag 3 2 0 1 1\n2\n4\n7\n6 2 4\n",
        "aag 5 2 0 1 3\n2\n4\n10\n6 2 4\n8 3 5\n10 7 9\n",
    ):
        aig = parse_aiger_ascii(text)
        again = parse_aiger_ascii(write_aiger_ascii(aig))
        assert structurally_equal(aig, again)
        third = parse_aiger_ascii(write_aiger_ascii(again))
        assert structurally_equal(again, third)


def test_aiger_round_trip_preserves_pi_names():
    text = MINIMAL_AAG + "i0 alpha\ni1 beta\n"
    aig = parse_aiger_ascii(text)
    assert aig.names[0] == "alpha"
    again = parse_aiger_ascii(write_aiger_ascii(aig))
    assert again.names[0] == "alpha" and again.names[1] == "beta"


def test_aiger_out_of_order_ands():
    # 10 depends on 8 which is declared after it
    text = "aag 5 2 0 1 3\n2\n4\n10\n10 8 6\n6 2 4\n8 6 5\n"
    aig = parse_aiger_ascii(text)
    assert levelize(aig) == aig.levels
    pos = {v: i for i, v in enumerate(aig.topo)}
    for v, fi in enumerate(aig.fanins):
        for u in fi:
            assert pos[u] < pos[v]


def test_level_monotone_along_edges_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n_pi = int(rng.integers(2, 5))
        kinds = [GateKind.PI] * n_pi
        fanins = [()] * n_pi
        for _ in range(int(rng.integers(1, 30))):
            k = GateKind.AND if rng.random() < 0.7 else GateKind.NOT
            n_prev = len(kinds)
            if k == GateKind.AND:
                a, b = rng.integers(0, n_prev, size=2)
                fanins.append((int(a), int(b)))
            else:
                fanins.append((int(rng.integers(0, n_prev)),))
            kinds.append(k)
        aig = Aig.from_parts(kinds, fanins, outputs=[len(kinds) - 1])
        pos = {v: i for i, v in enumerate(aig.topo)}
        for v, fi in enumerate(aig.fanins):
            for u in fi:
                assert pos[u] < pos[v]
                assert aig.levels[u] < aig.levels[v]
