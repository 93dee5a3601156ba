"""Gate-level circuit data model, BENCH / AIGER-ASCII parsing and writing.

Two graph flavours share the same node layout (dense integer ids, fanin
lists referring to earlier ids):

* :class:`Netlist` - generic multi-type gate netlist as read from BENCH.
* :class:`Aig` - restricted to PI / 2-input AND / NOT, with per-node
  logic levels and a topological order precomputed.

Inverters are explicit nodes here, not edge attributes: every node kind
(including NOT) adds one logic level.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from enum import IntEnum


class CircuitError(Exception):
    """Base class for circuit parsing/validation failures."""


class CircuitSyntaxError(CircuitError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UndefinedSignal(CircuitError):
    pass


class DuplicateDefinition(CircuitError):
    pass


class CycleDetected(CircuitError):
    pass


class NoPrimaryInputs(CircuitError):
    pass


class LatchesUnsupported(CircuitError):
    pass


class MalformedHeader(CircuitError):
    pass


class LiteralOutOfRange(CircuitError):
    pass


class GateKind(IntEnum):
    PI = 0
    AND = 1
    OR = 2
    NAND = 3
    NOR = 4
    XOR = 5
    NOT = 6
    BUF = 7


AIG_KINDS = (GateKind.PI, GateKind.AND, GateKind.NOT)

# Fixed one-hot layouts: 3-wide for AIGs, 7-wide for raw netlists (BUF is
# always eliminated before feature encoding).
AIG_FEATURE_ORDER = (GateKind.PI, GateKind.AND, GateKind.NOT)
RAW_FEATURE_ORDER = (
    GateKind.PI,
    GateKind.AND,
    GateKind.OR,
    GateKind.NAND,
    GateKind.NOR,
    GateKind.XOR,
    GateKind.NOT,
)


@dataclass
class Netlist:
    """Gate-level circuit. Node ids are dense and topologically ordered."""

    name: str
    kinds: list[GateKind]
    fanins: list[tuple[int, ...]]
    outputs: list[int]
    names: list[str] | None = None

    @property
    def n_nodes(self):
        return len(self.kinds)

    @property
    def pi_ids(self):
        return [i for i, k in enumerate(self.kinds) if k == GateKind.PI]

    def node_name(self, i):
        if self.names is not None and self.names[i] is not None:
            return self.names[i]
        return f"n{i}"

    def validate(self):
        _validate_graph(self)
        for i, k in enumerate(self.kinds):
            n_in = len(self.fanins[i])
            if k == GateKind.PI:
                if n_in != 0:
                    raise CircuitError(f"PI node {i} has fanins")
            elif k in (GateKind.NOT, GateKind.BUF):
                if n_in != 1:
                    raise CircuitError(f"{k.name} node {i} needs exactly 1 input, got {n_in}")
            elif n_in < 2:
                raise CircuitError(f"{k.name} node {i} needs >= 2 inputs, got {n_in}")
        return self


@dataclass
class Aig:
    """AND-inverter graph with explicit NOT nodes, levels and topo order."""

    name: str
    kinds: list[GateKind]
    fanins: list[tuple[int, ...]]
    outputs: list[int]
    names: list[str] | None = None
    levels: list[int] = field(default_factory=list)
    topo: list[int] = field(default_factory=list)

    @staticmethod
    def from_parts(kinds, fanins, outputs, names=None, name="aig"):
        aig = Aig(name=name, kinds=list(kinds), fanins=[tuple(f) for f in fanins],
                  outputs=list(outputs), names=names)
        aig.validate()
        return aig

    @property
    def n_nodes(self):
        return len(self.kinds)

    @property
    def pi_ids(self):
        return [i for i, k in enumerate(self.kinds) if k == GateKind.PI]

    @property
    def max_level(self):
        return max(self.levels) if self.levels else 0

    def node_name(self, i):
        if self.names is not None and self.names[i] is not None:
            return self.names[i]
        return f"n{i}"

    def validate(self):
        for i, k in enumerate(self.kinds):
            n_in = len(self.fanins[i])
            if k == GateKind.PI:
                if n_in != 0:
                    raise CircuitError(f"PI node {i} has fanins")
            elif k == GateKind.AND:
                if n_in != 2:
                    raise CircuitError(f"AND node {i} needs exactly 2 inputs, got {n_in}")
            elif k == GateKind.NOT:
                if n_in != 1:
                    raise CircuitError(f"NOT node {i} needs exactly 1 input, got {n_in}")
            else:
                raise CircuitError(f"node {i}: kind {k.name} not allowed in an AIG")
        _validate_graph(self)
        self.topo = topo_order(self)
        self.levels = levelize(self)
        return self


def _validate_graph(graph):
    n = graph.n_nodes
    for i, fi in enumerate(graph.fanins):
        for u in fi:
            if not 0 <= u < n:
                raise UndefinedSignal(f"node {i} references unknown node {u}")
    for o in graph.outputs:
        if not 0 <= o < n:
            raise UndefinedSignal(f"output references unknown node {o}")
    # acyclicity comes out of topo_order
    topo_order(graph)


def fanout_lists(graph):
    """Successor id list per node (duplicate edges kept)."""
    outs = [[] for _ in range(graph.n_nodes)]
    for v, fi in enumerate(graph.fanins):
        for u in fi:
            outs[u].append(v)
    return outs


def topo_order(graph):
    """Topological order, smallest-id-first among ready nodes.

    For graphs whose ids are already topological (the invariant both
    parsers establish), this returns 0..n-1.
    """
    n = graph.n_nodes
    indeg = [len(set(fi)) for fi in graph.fanins]
    outs = [set() for _ in range(n)]
    for v, fi in enumerate(graph.fanins):
        for u in set(fi):
            outs[u].add(v)
    ready = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in outs[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != n:
        raise CycleDetected(f"{graph.name}: cycle through {n - len(order)} node(s)")
    return order


def levelize(graph):
    """Longest-path level per node: PIs at 0, every gate (NOT included) +1."""
    levels = [0] * graph.n_nodes
    for v in topo_order(graph):
        fi = graph.fanins[v]
        if fi:
            levels[v] = 1 + max(levels[u] for u in fi)
    return levels


def structurally_equal(a, b):
    """Node-by-node equality: kinds, unordered fanin pairs, outputs."""
    if a.n_nodes != b.n_nodes or len(a.outputs) != len(b.outputs):
        return False
    for ka, kb, fa, fb in zip(a.kinds, b.kinds, a.fanins, b.fanins):
        if ka != kb or sorted(fa) != sorted(fb):
            return False
    return a.outputs == b.outputs


# ---------------------------------------------------------------------------
# BENCH format

_BENCH_INPUT = re.compile(r"^INPUT\s*\(\s*([^()\s,]+)\s*\)$", re.IGNORECASE)
_BENCH_OUTPUT = re.compile(r"^OUTPUT\s*\(\s*([^()\s,]+)\s*\)$", re.IGNORECASE)
_BENCH_GATE = re.compile(r"^([^()\s=]+)\s*=\s*([A-Za-z]+)\s*\(\s*([^()]*)\s*\)$")

_GATE_ALIASES = {
    "AND": GateKind.AND,
    "OR": GateKind.OR,
    "NAND": GateKind.NAND,
    "NOR": GateKind.NOR,
    "XOR": GateKind.XOR,
    "NOT": GateKind.NOT,
    "INV": GateKind.NOT,
    "BUF": GateKind.BUF,
    "BUFF": GateKind.BUF,
}

_BENCH_GATE_NAMES = {
    GateKind.AND: "AND",
    GateKind.OR: "OR",
    GateKind.NAND: "NAND",
    GateKind.NOR: "NOR",
    GateKind.XOR: "XOR",
    GateKind.NOT: "NOT",
    GateKind.BUF: "BUFF",
}


def parse_bench(text, name="bench"):
    """Parse BENCH text into a validated Netlist.

    Keywords are case-insensitive, signal names are not. Definitions may
    appear in any acyclic order; node ids follow declaration order whenever
    that order is already topological.
    """
    decls = []  # (name, kind, arg names, line_no) in declaration order
    defined = {}
    output_names = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _BENCH_INPUT.match(line)
        if m:
            sig = m.group(1)
            if sig in defined:
                raise DuplicateDefinition(f"line {line_no}: '{sig}' already defined")
            defined[sig] = len(decls)
            decls.append((sig, GateKind.PI, (), line_no))
            continue
        m = _BENCH_OUTPUT.match(line)
        if m:
            output_names.append((m.group(1), line_no))
            continue
        m = _BENCH_GATE.match(line)
        if m:
            sig, gate, args = m.group(1), m.group(2).upper(), m.group(3)
            if gate in ("INPUT", "OUTPUT"):
                raise CircuitSyntaxError(f"'{gate}' cannot be assigned", line_no)
            kind = _GATE_ALIASES.get(gate)
            if kind is None:
                raise CircuitSyntaxError(f"unknown gate type '{gate}'", line_no)
            arg_names = tuple(a.strip() for a in args.split(",")) if args.strip() else ()
            if any(not a for a in arg_names):
                raise CircuitSyntaxError("empty argument", line_no)
            if kind in (GateKind.NOT, GateKind.BUF):
                if len(arg_names) != 1:
                    raise CircuitSyntaxError(
                        f"{gate} takes exactly 1 input, got {len(arg_names)}", line_no)
            elif len(arg_names) < 2:
                raise CircuitSyntaxError(
                    f"{gate} takes at least 2 inputs, got {len(arg_names)}", line_no)
            if sig in defined:
                raise DuplicateDefinition(f"line {line_no}: '{sig}' already defined")
            defined[sig] = len(decls)
            decls.append((sig, kind, arg_names, line_no))
            continue
        raise CircuitSyntaxError(f"unrecognized statement: '{line}'", line_no)

    for sig, kind, arg_names, line_no in decls:
        for a in arg_names:
            if a not in defined:
                raise UndefinedSignal(f"line {line_no}: '{a}' is never defined")
    for sig, line_no in output_names:
        if sig not in defined:
            raise UndefinedSignal(f"line {line_no}: output '{sig}' is never defined")
    if not any(kind == GateKind.PI for _, kind, _, _ in decls):
        raise NoPrimaryInputs(f"{name}: no INPUT declarations")

    order = _stable_order(decls, defined, name)
    new_id = {decls[d][0]: i for i, d in enumerate(order)}
    kinds, fanins, names = [], [], []
    for d in order:
        sig, kind, arg_names, _ = decls[d]
        kinds.append(kind)
        fanins.append(tuple(new_id[a] for a in arg_names))
        names.append(sig)
    outputs = [new_id[sig] for sig, _ in output_names]
    return Netlist(name=name, kinds=kinds, fanins=fanins, outputs=outputs,
                   names=names).validate()


def _stable_order(decls, defined, name):
    """Kahn's algorithm keyed by declaration index; detects cycles."""
    n = len(decls)
    indeg = [0] * n
    succs = [[] for _ in range(n)]
    for d, (_, _, arg_names, _) in enumerate(decls):
        for a in set(arg_names):
            u = defined[a]
            succs[u].append(d)
            indeg[d] += 1
    ready = [d for d in range(n) if indeg[d] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in succs[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != n:
        bad = next(decls[d][3] for d in range(n) if indeg[d] > 0)
        raise CycleDetected(f"{name}: combinational loop (near line {bad})")
    return order


def write_bench(graph):
    """Serialize a Netlist (or Aig) as BENCH text."""
    lines = [f"# {graph.name}"]
    for i in graph.pi_ids:
        lines.append(f"INPUT({graph.node_name(i)})")
    for o in graph.outputs:
        lines.append(f"OUTPUT({graph.node_name(o)})")
    for i, kind in enumerate(graph.kinds):
        if kind == GateKind.PI:
            continue
        args = ", ".join(graph.node_name(u) for u in graph.fanins[i])
        lines.append(f"{graph.node_name(i)} = {_BENCH_GATE_NAMES[kind]}({args})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# AIGER ASCII ("aag"), combinational subset

def parse_aiger_ascii(text, name="aig"):
    """Parse an AIGER ASCII file into an Aig.

    Negated literals become explicit NOT nodes, one shared NOT per negated
    driver. Latches are not supported (L must be 0).
    """
    lines = text.splitlines()
    if not lines:
        raise MalformedHeader("empty file")
    header = lines[0].split()
    if len(header) != 6 or header[0] != "aag":
        raise MalformedHeader(f"expected 'aag M I L O A', got '{lines[0]}'")
    try:
        m_max, n_in, n_latch, n_out, n_and = (int(t) for t in header[1:])
    except ValueError:
        raise MalformedHeader(f"non-integer field in header '{lines[0]}'") from None
    if n_latch > 0:
        raise LatchesUnsupported(f"{name}: {n_latch} latch(es); only combinational aag supported")
    if m_max < n_in + n_and:
        raise MalformedHeader(f"M={m_max} smaller than I+A={n_in + n_and}")

    body = lines[1:]
    needed = n_in + n_out + n_and
    if len(body) < needed:
        raise MalformedHeader(f"expected {needed} body lines, found {len(body)}")

    def check_lit(lit, line_no, allow_odd=True):
        if lit < 0 or lit > 2 * m_max + 1:
            raise LiteralOutOfRange(f"line {line_no}: literal {lit} out of range (max {2 * m_max + 1})")
        if lit in (0, 1):
            raise LiteralOutOfRange(f"line {line_no}: constant literal {lit} unsupported (no constant nodes)")
        if not allow_odd and lit % 2:
            raise LiteralOutOfRange(f"line {line_no}: literal {lit} must be even")

    def parse_ints(idx, count, width):
        vals = []
        for k in range(count):
            line_no = idx + k + 2  # 1-based, after header
            parts = body[idx + k].split()
            if len(parts) != width:
                raise MalformedHeader(f"line {line_no}: expected {width} literal(s)")
            try:
                vals.append(([int(p) for p in parts], line_no))
            except ValueError:
                raise MalformedHeader(f"line {line_no}: non-integer literal") from None
        return vals

    in_lits = parse_ints(0, n_in, 1)
    out_lits = parse_ints(n_in, n_out, 1)
    and_defs = parse_ints(n_in + n_out, n_and, 3)

    pi_vars = []
    var_seen = set()
    for (lit,), line_no in in_lits:
        check_lit(lit, line_no, allow_odd=False)
        v = lit // 2
        if v in var_seen:
            raise MalformedHeader(f"line {line_no}: variable {v} defined twice")
        var_seen.add(v)
        pi_vars.append(v)
    and_by_var = {}
    for (lhs, rhs0, rhs1), line_no in and_defs:
        check_lit(lhs, line_no, allow_odd=False)
        check_lit(rhs0, line_no)
        check_lit(rhs1, line_no)
        v = lhs // 2
        if v in var_seen:
            raise MalformedHeader(f"line {line_no}: variable {v} defined twice")
        var_seen.add(v)
        and_by_var[v] = (rhs0, rhs1)
    for (lit,), line_no in out_lits:
        check_lit(lit, line_no)
        if lit // 2 not in var_seen:
            raise LiteralOutOfRange(f"line {line_no}: output variable {lit // 2} undefined")
    for (lhs, rhs0, rhs1), line_no in and_defs:
        for r in (rhs0, rhs1):
            if r // 2 not in var_seen:
                raise LiteralOutOfRange(f"line {line_no}: variable {r // 2} undefined")

    # optional symbol table: apply input names, ignore the rest
    pi_names = {}
    for raw in body[needed:]:
        s = raw.strip()
        if s == "c":
            break
        m = re.match(r"^i(\d+)\s+(\S.*)$", s)
        if m and int(m.group(1)) < n_in:
            pi_names[int(m.group(1))] = m.group(2).strip()

    # Emit nodes in a stable topological order. Items are even literals
    # (PI/AND variables) and the odd literals actually used (shared NOT
    # nodes); priorities follow declaration position, a NOT right after
    # its driver.
    seq = {}
    for pos, v in enumerate(pi_vars):
        seq[2 * v] = float(pos)
    for pos, ((lhs, _, _), _) in enumerate(and_defs):
        seq[lhs] = float(n_in + pos)

    used_lits = {lit for (lit,), _ in out_lits}
    for (lhs, rhs0, rhs1), _ in and_defs:
        used_lits.update((rhs0, rhs1))
    items = [2 * v for v in var_seen] + sorted(l for l in used_lits if l % 2)
    for lit in items:
        if lit % 2:
            seq[lit] = seq[lit - 1] + 0.5

    indeg = {lit: 0 for lit in items}
    succs = {lit: [] for lit in items}

    def add_dep(u, v):
        succs[u].append(v)
        indeg[v] += 1

    for lit in items:
        if lit % 2:
            add_dep(lit - 1, lit)
        elif lit // 2 in and_by_var:
            r0, r1 = and_by_var[lit // 2]
            for r in {r0, r1}:
                add_dep(r, lit)

    ready = [(seq[lit], lit) for lit in items if indeg[lit] == 0]
    heapq.heapify(ready)
    kinds, fanins, names = [], [], []
    node_of = {}

    while ready:
        _, lit = heapq.heappop(ready)
        if lit % 2:
            kinds.append(GateKind.NOT)
            fanins.append((node_of[lit - 1],))
            names.append(f"n{lit}")
        elif lit // 2 in and_by_var:
            r0, r1 = and_by_var[lit // 2]
            kinds.append(GateKind.AND)
            fanins.append((node_of[r0], node_of[r1]))
            names.append(f"n{lit}")
        else:
            idx = pi_vars.index(lit // 2)
            kinds.append(GateKind.PI)
            fanins.append(())
            names.append(pi_names.get(idx, f"i{idx}"))
        node_of[lit] = len(kinds) - 1
        for w in succs[lit]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, (seq[w], w))

    if len(node_of) != len(items):
        raise CycleDetected(f"{name}: AND definitions form a cycle")
    outputs = [node_of[lit] for (lit,), _ in out_lits]
    return Aig.from_parts(kinds, fanins, outputs, names=names, name=name)


def write_aiger_ascii(aig):
    """Serialize an Aig as AIGER ASCII.

    NOT nodes map to literal negation, so chained/duplicated inverters are
    canonicalized on write; round-tripping is exact for parsed (canonical)
    graphs.
    """
    lit = {}
    n_in = 0
    pi_positions = []
    for i, k in enumerate(aig.kinds):
        if k == GateKind.PI:
            n_in += 1
            lit[i] = 2 * n_in
            pi_positions.append(i)
    and_ids = [i for i in topo_order(aig) if aig.kinds[i] == GateKind.AND]
    var = n_in
    for i in and_ids:
        var += 1
        lit[i] = 2 * var
    for i in topo_order(aig):
        if aig.kinds[i] == GateKind.NOT:
            lit[i] = lit[aig.fanins[i][0]] ^ 1

    lines = [f"aag {var} {n_in} 0 {len(aig.outputs)} {len(and_ids)}"]
    for i in pi_positions:
        lines.append(str(lit[i]))
    for o in aig.outputs:
        lines.append(str(lit[o]))
    for i in and_ids:
        a, b = aig.fanins[i]
        lines.append(f"{lit[i]} {lit[a]} {lit[b]}")
    for pos, i in enumerate(pi_positions):
        lines.append(f"i{pos} {aig.node_name(i)}")
    return "\n".join(lines) + "\n"
