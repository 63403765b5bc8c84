"""Acyclic boolean and partial circuits.

A circuit is a tuple of vertices in topological order.  Vertex ids are list
positions; parents always have smaller ids.  Input vertex number i (in vertex
order) reads x_i, and output vertex number j writes y_j.  Bits of an input
word beyond the last input vertex pass straight through after the outputs.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence

from .errors import CircuitInvalid, InputTooShort
from .prefix_algebra import words_of_length
from .rim import RimTable


class Gate(IntEnum):
    INPUT = 0
    OUTPUT = 1
    AND = 2
    OR = 3
    NOT = 4
    FORK = 5
    ZETA1 = 6


FAN_IN = {Gate.INPUT: 0, Gate.OUTPUT: 1, Gate.AND: 2, Gate.OR: 2, Gate.NOT: 1, Gate.FORK: 1, Gate.ZETA1: 2}
FAN_OUT = {Gate.INPUT: 1, Gate.OUTPUT: 0, Gate.AND: 1, Gate.OR: 1, Gate.NOT: 1, Gate.FORK: 2, Gate.ZETA1: 1}
NAMES = {Gate.INPUT: "input", Gate.OUTPUT: "output", Gate.AND: "and", Gate.OR: "or",
         Gate.NOT: "not", Gate.FORK: "fork", Gate.ZETA1: "zeta1"}
BY_NAME = {v: k for k, v in NAMES.items()}


@dataclass(frozen=True)
class Vertex:
    gate: Gate
    parents: tuple[int, ...] = ()


class Circuit:
    """Immutable DAG of gate vertices, stored in topological order."""

    __slots__ = ("vertices", "inputs", "outputs", "_consumers")

    def __init__(self, vertices: Sequence[Vertex]):
        self.vertices = tuple(vertices)
        self.inputs = tuple(i for i, v in enumerate(self.vertices) if v.gate == Gate.INPUT)
        self.outputs = tuple(i for i, v in enumerate(self.vertices) if v.gate == Gate.OUTPUT)
        self._consumers = None

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"Circuit({len(self.inputs)} in, {len(self.outputs)} out, {self.n_gates} gates)"

    def __eq__(self, other):
        return isinstance(other, Circuit) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    @property
    def n_gates(self) -> int:
        return len(self.vertices) - len(self.inputs) - len(self.outputs)

    @property
    def l_in(self) -> int:
        return len(self.inputs)

    @property
    def l_out(self) -> int:
        return len(self.outputs)

    def consumers(self) -> list[list[int]]:
        if self._consumers is None:
            cons = [[] for _ in self.vertices]
            for i, v in enumerate(self.vertices):
                for p in v.parents:
                    if 0 <= p < len(cons):
                        cons[p].append(i)
            self._consumers = cons
        return self._consumers

    def gate_counts(self) -> dict[Gate, int]:
        out = {}
        for v in self.vertices:
            out[v.gate] = out.get(v.gate, 0) + 1
        return out

    def to_netlist(self) -> str:
        lines = []
        for i, v in enumerate(self.vertices):
            ps = " ".join(f"v{p + 1}" for p in v.parents)
            lines.append(f"v{i + 1}: {NAMES[v.gate]} {ps}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_netlist(cls, text: str) -> "Circuit":
        verts = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            m = re.fullmatch(r"v(\d+)\s*:\s*(\w+)((?:\s+v\d+)*)", line)
            if not m or int(m.group(1)) != len(verts) + 1 or m.group(2) not in BY_NAME:
                raise CircuitInvalid(f"bad netlist line: {line!r}")
            parents = tuple(int(p[1:]) - 1 for p in m.group(3).split())
            verts.append(Vertex(BY_NAME[m.group(2)], parents))
        c = cls(verts)
        check(c)
        return c


class Builder:
    """Incremental construction helper; ids returned are vertex positions."""

    def __init__(self):
        self.vertices: list[Vertex] = []

    def add(self, gate: Gate, *parents: int) -> int:
        self.vertices.append(Vertex(gate, tuple(parents)))
        return len(self.vertices) - 1

    def input(self) -> int:
        return self.add(Gate.INPUT)

    def output(self, v: int) -> int:
        return self.add(Gate.OUTPUT, v)

    def not_(self, a):
        return self.add(Gate.NOT, a)

    def and_(self, a, b):
        return self.add(Gate.AND, a, b)

    def or_(self, a, b):
        return self.add(Gate.OR, a, b)

    def zeta1(self, a, b):
        return self.add(Gate.ZETA1, a, b)

    def fork(self, a) -> int:
        """A fork vertex; reference it from exactly two consumers."""
        return self.add(Gate.FORK, a)

    def copies(self, a: int, n: int) -> list[int]:
        """n wires carrying the value of a, via a balanced fork tree."""
        if n <= 1:
            return [a] * n
        f = self.fork(a)
        left = n // 2
        return self.copies(f, left) + self.copies(f, n - left)

    def tree(self, gate: Gate, wires: Sequence[int], depth_of=None) -> int:
        """Combine wires with a binary and/or tree, shallowest wires first."""
        ws = list(wires)
        if depth_of is None:
            while len(ws) > 1:
                nxt = [self.add(gate, ws[i], ws[i + 1]) for i in range(0, len(ws) - 1, 2)]
                if len(ws) % 2:
                    nxt.append(ws[-1])
                ws = nxt
            return ws[0]
        heap = [(depth_of[w], n, w) for n, w in enumerate(ws)]
        heapq.heapify(heap)
        n = len(heap)
        while len(heap) > 1:
            da, _, a = heapq.heappop(heap)
            db, _, b = heapq.heappop(heap)
            v = self.add(gate, a, b)
            depth_of[v] = max(da, db) + 1
            heapq.heappush(heap, (depth_of[v], n, v))
            n += 1
        return heap[0][2]

    def const0(self, a: int) -> tuple[int, int]:
        """Return (a kept, constant 0) built from a as a ∧ ¬a."""
        f1 = self.fork(a)
        f2 = self.fork(f1)
        return f1, self.and_(f2, self.not_(f2))

    def const1(self, a: int) -> tuple[int, int]:
        f1 = self.fork(a)
        f2 = self.fork(f1)
        return f1, self.or_(f2, self.not_(f2))

    def build(self, check_it: bool = True) -> Circuit:
        c = Circuit(self.vertices)
        if check_it:
            check(c)
        return c


def diagnostics(c: Circuit) -> list[tuple[int, int, str]]:
    """All rule violations as (step, vertex number, message)."""
    problems = []
    cons = c.consumers()
    for i, v in enumerate(c.vertices):
        num = i + 1
        if len(v.parents) != FAN_IN[v.gate]:
            problems.append((3, num, f"{NAMES[v.gate]} needs {FAN_IN[v.gate]} parents"))
            continue
        for p in v.parents:
            if not 0 <= p < i:
                problems.append((2, num, f"parent v{p + 1} does not precede v{num}"))
        if FAN_IN[v.gate] == 2 and v.parents[0] == v.parents[1]:
            problems.append((3, num, "both parents are the same vertex"))
    for i, v in enumerate(c.vertices):
        used = len(cons[i])
        if used != FAN_OUT[v.gate]:
            problems.append((4, i + 1, f"{NAMES[v.gate]} feeds {used} inputs, expected {FAN_OUT[v.gate]}"))
        if v.gate == Gate.FORK and used == 2 and cons[i][0] == cons[i][1]:
            problems.append((4, i + 1, "both fork outputs feed the same vertex"))
    return problems


def validate(c: Circuit) -> tuple[bool, list[str]]:
    probs = diagnostics(c)
    return not probs, [f"step {s}, v{n}: {msg}" for s, n, msg in probs]


def check(c: Circuit) -> Circuit:
    probs = diagnostics(c)
    if probs:
        s, n, msg = probs[0]
        raise CircuitInvalid(f"v{n}: {msg}", step=s, vertex=n)
    return c


def eval_circuit(c: Circuit, x: str) -> str | None:
    m = len(c.inputs)
    if len(x) < m:
        raise InputTooShort(f"circuit reads {m} bits, got {len(x)}")
    val = [0] * len(c.vertices)
    nxt = 0
    out = []
    for i, v in enumerate(c.vertices):
        g = v.gate
        if g == Gate.INPUT:
            val[i] = x[nxt] == "1"
            nxt += 1
        elif g == Gate.NOT:
            val[i] = not val[v.parents[0]]
        elif g == Gate.AND:
            val[i] = val[v.parents[0]] and val[v.parents[1]]
        elif g == Gate.OR:
            val[i] = val[v.parents[0]] or val[v.parents[1]]
        elif g == Gate.FORK:
            val[i] = val[v.parents[0]]
        elif g == Gate.ZETA1:
            if val[v.parents[0]]:
                return None
            val[i] = val[v.parents[1]]
        else:
            out.append("1" if val[v.parents[0]] else "0")
    return "".join(out) + x[m:]


def circuit_table(c: Circuit) -> RimTable:
    """The right-ideal morphism of c, with domain words of length l_in."""
    rows = {}
    for x in words_of_length(c.l_in):
        y = eval_circuit(c, x)
        if y is not None:
            rows[x] = y
    return RimTable(rows, 2, check=False)


def depths(c: Circuit) -> list[int]:
    """Number of gates on the longest path ending at each vertex."""
    d = [0] * len(c.vertices)
    for i, v in enumerate(c.vertices):
        base = max((d[p] for p in v.parents), default=0)
        d[i] = base + (0 if v.gate in (Gate.INPUT, Gate.OUTPUT) else 1)
    return d


@dataclass(frozen=True)
class Metrics:
    l_in: int
    l_out: int
    size: int
    depth: int


def circuit_metrics(c: Circuit) -> Metrics:
    return Metrics(c.l_in, c.l_out, max(c.l_in, c.l_out, c.n_gates), max(depths(c), default=0))


# Precedence encoding ------------------------------------------------------

CODE0 = {"0": "00", "1": "01", "#": "1"}


def canonical_order(c: Circuit) -> list[int]:
    """Kahn order on non-output vertices, tie-broken by (gate, input index, id);
    output vertices follow in output order so their positions stay meaningful."""
    input_rank = {v: n for n, v in enumerate(c.inputs)}
    indeg = [len(set(v.parents)) for v in c.vertices]
    cons = c.consumers()
    heap = [(int(v.gate), input_rank.get(i, 0), i) for i, v in enumerate(c.vertices)
            if not v.parents and v.gate != Gate.OUTPUT]
    heapq.heapify(heap)
    order = []
    while heap:
        _, _, i = heapq.heappop(heap)
        order.append(i)
        for j in sorted(set(cons[i])):
            indeg[j] -= 1
            if indeg[j] == 0 and c.vertices[j].gate != Gate.OUTPUT:
                heapq.heappush(heap, (int(c.vertices[j].gate), input_rank.get(j, 0), j))
    return order + list(c.outputs)


def encode_records(c: Circuit) -> str:
    """The {0,1,#} string of vertex records plus the ## terminator."""
    check(c)
    order = canonical_order(c)
    num = {old: n + 1 for n, old in enumerate(order)}
    w = len(order).bit_length()

    def b(n):
        return format(n, f"0{w}b")

    parts = []
    for old in order:
        v = c.vertices[old]
        me = num[old]
        ps = [num[p] for p in v.parents] or [me]
        left, right = ps[0], ps[-1]
        parts.append(f"#{b(me)}#{int(v.gate):03b}#{b(left)}#{b(right)}#")
    return "".join(parts) + "##"


def encode_precedence(c: Circuit) -> str:
    return "".join(CODE0[ch] for ch in encode_records(c))


def bits_to_hex(bits: str) -> str:
    """Hex text of a bitstring; the bit length is kept as a prefix."""
    if not bits:
        return "0:"
    return f"{len(bits)}:" + format(int(bits, 2), f"0{(len(bits) + 3) // 4}x")


def hex_to_bits(text: str) -> str:
    n, _, h = text.strip().partition(":")
    n = int(n)
    return format(int(h, 16), f"0{n}b") if n else ""


_RECORD = re.compile(r"#([01]+)#([01]{3})#([01]+)#([01]+)#")


def decode_code0(bits: str) -> str:
    out, i = [], 0
    while i < len(bits):
        if bits[i] == "1":
            out.append("#")
            i += 1
        elif i + 1 < len(bits) and bits[i + 1] in "01":
            out.append(bits[i + 1])
            i += 2
        else:
            raise CircuitInvalid("bit string is not a code_0 image", step=1)
    return "".join(out)


def decode_precedence(bits: str) -> Circuit:
    if not bits or set(bits) - {"0", "1"}:
        raise CircuitInvalid("empty or non-binary input", step=1)
    s = decode_code0(bits)
    if not s.endswith("##"):
        raise CircuitInvalid("missing ## terminator", step=1)
    body = s[:-2]
    records = []
    pos = 0
    while pos < len(body):
        m = _RECORD.match(body, pos)
        if not m:
            raise CircuitInvalid(f"malformed record at offset {pos}", step=1)
        records.append(m.groups())
        pos = m.end()
    if not records or any(int(r[1], 2) > 6 for r in records):
        raise CircuitInvalid("no records or unknown gate code", step=1)

    # step 2: widths, numbering and precedence
    w = len(records[0][0])
    n = len(records)
    if w != n.bit_length():
        raise CircuitInvalid(f"vertex width {w} does not match {n} vertices", step=2)
    parsed = []
    for idx, (v, b, l, r) in enumerate(records, start=1):
        if not (len(v) == len(l) == len(r) == w):
            raise CircuitInvalid("vertex strings differ in length", step=2, vertex=idx)
        v, l, r, gate = int(v, 2), int(l, 2), int(r, 2), Gate(int(b, 2))
        if v != idx:
            raise CircuitInvalid(f"vertex {v} out of sequence, expected {idx}", step=2, vertex=idx)
        source = l == r == v
        if not source and not (1 <= l < v and 1 <= r < v):
            raise CircuitInvalid(f"parents of v{v} do not precede it", step=2, vertex=v)
        parsed.append((v, gate, l, r, source))

    # step 3: in-degree
    verts = []
    for v, gate, l, r, source in parsed:
        if gate == Gate.INPUT:
            if not source:
                raise CircuitInvalid(f"input v{v} must name itself as parent", step=3, vertex=v)
            verts.append(Vertex(gate, ()))
        elif FAN_IN[gate] == 2:
            if len({l, r, v}) != 3:
                raise CircuitInvalid(f"v{v} needs two distinct parents", step=3, vertex=v)
            verts.append(Vertex(gate, (l - 1, r - 1)))
        else:
            if source or l != r:
                raise CircuitInvalid(f"v{v} needs a single earlier parent", step=3, vertex=v)
            verts.append(Vertex(gate, (l - 1,)))

    # step 4: out-degree
    c = Circuit(verts)
    cons = c.consumers()
    for i, v in enumerate(verts):
        need = FAN_OUT[v.gate]
        if len(cons[i]) != need or (need == 2 and cons[i][0] == cons[i][1]):
            raise CircuitInvalid(f"v{i + 1} has out-degree {len(cons[i])}, expected {need}", step=4, vertex=i + 1)
    return c


def is_isomorphic(c1: Circuit, c2: Circuit) -> bool:
    """Label-, port- and variable-preserving DAG isomorphism.

    Output j must map to output j and parents map port by port, so walking
    up from the outputs forces the whole correspondence; every vertex of a
    valid circuit reaches some output, hence nothing is left to guess.
    """
    if len(c1) != len(c2) or len(c1.inputs) != len(c2.inputs) or len(c1.outputs) != len(c2.outputs):
        return False
    iso, used = {}, set()
    stack = list(zip(c1.outputs, c2.outputs))
    while stack:
        a, b = stack.pop()
        if a in iso:
            if iso[a] != b:
                return False
            continue
        if b in used:
            return False
        va, vb = c1.vertices[a], c2.vertices[b]
        if va.gate != vb.gate or len(va.parents) != len(vb.parents):
            return False
        iso[a] = b
        used.add(b)
        stack.extend(zip(va.parents, vb.parents))
    if len(iso) != len(c1):
        return False
    return all(iso[v] == w for v, w in zip(c1.inputs, c2.inputs))


# Positioned gates as tables ------------------------------------------------

def _table_from_fn(n: int, fn) -> RimTable:
    rows = {}
    for x in words_of_length(n):
        y = fn(x)
        if y is not None:
            rows[x] = y
    return RimTable(rows, 2, check=False)


def gate_fn(gate: Gate, j: int = 1):
    """Action of the gate at position j on a long enough bit string."""
    i = j - 1
    if gate == Gate.NOT:
        return lambda x: x[:i] + ("1" if x[i] == "0" else "0") + x[i + 1:]
    if gate == Gate.AND:
        return lambda x: x[:i] + ("1" if x[i] == x[i + 1] == "1" else "0") + x[i + 2:]
    if gate == Gate.OR:
        return lambda x: x[:i] + ("1" if "1" in x[i:i + 2] else "0") + x[i + 2:]
    if gate == Gate.FORK:
        return lambda x: x[:i + 1] + x[i] + x[i + 1:]
    if gate == Gate.ZETA1:
        return lambda x: x[:i] + x[i + 1:] if x[i] == "0" else None
    raise ValueError(f"{gate!r} is not a logic gate")


def gate_need(gate: Gate, j: int = 1) -> int:
    return j + 1 if FAN_IN[gate] == 2 else j


def gate_table(gate: Gate, j: int = 1) -> RimTable:
    if j < 1:
        raise ValueError("positions start at 1")
    return _table_from_fn(gate_need(gate, j), gate_fn(gate, j))


def tau_table(i: int, j: int) -> RimTable:
    if not 1 <= i < j:
        raise ValueError("need 1 <= i < j")
    return _table_from_fn(j, lambda x: x[:i - 1] + x[j - 1] + x[i:j - 1] + x[i - 1] + x[j:])


def kappa_table(n: int) -> RimTable:
    """Cyclic shift x_1 x_2 ... x_n -> x_2 ... x_n x_1."""
    return _table_from_fn(n, lambda x: x[1:n] + x[0] + x[n:])


def zeta_m_table(m: int) -> RimTable:
    rows = {}
    for bs in words_of_length(m):
        rows["".join("0" + b for b in bs)] = bs
    return RimTable(rows, 2, check=False)
