"""Unambiguous unions: expressions, merging into one word, decompositions.

An unambiguous union keeps only the points that lie in exactly one of the
domains.  Expressions combine words with composition (``Concat``) and
unambiguous union (``Union``); their tables are memoized on the nodes, so
the decomposition algorithms can build large shared structures cheaply and
flatten to plain words only on demand.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .circuit import Builder, Circuit, Gate
from .completion import _lower
from .convert import circuit_of_word, word_of_circuit
from .errors import DomainError
from .genword import (
    FRAGMENTS,
    MPFL,
    PFL,
    RM,
    TFL,
    GenWord,
    Tau,
    eval_word_symbolic,
    expand,
    parse_word,
    trace_state,
    word_depth,
)
from .oracle import DEFAULT_CAP, brute_force_table
from .prefix_algebra import words_of_length
from .rim import (
    RimTable,
    compose,
    delta,
    refine_to_level,
    theta,
    unambiguous_union_tables,
)


# Expressions ----------------------------------------------------------------

class UnionExpr:
    _table: RimTable | None = None

    def table(self) -> RimTable:
        if self._table is None:
            self._table = self._eval()
        return self._table


class Word(UnionExpr):
    def __init__(self, word: GenWord):
        self.word = word

    def _eval(self):
        return eval_word_symbolic(self.word)

    def __repr__(self):
        return f"Word({str(self.word)!r})"


class Concat(UnionExpr):
    """``Concat(second, first)``: first is applied first."""

    def __init__(self, second: UnionExpr, first: UnionExpr):
        self.second, self.first = second, first

    def _eval(self):
        return compose(self.second.table(), self.first.table())

    def __repr__(self):
        return f"Concat({self.second!r}, {self.first!r})"


class Union(UnionExpr):
    def __init__(self, parts: Sequence[UnionExpr]):
        if len(parts) < 2:
            raise DomainError("a union needs at least two parts")
        self.parts = tuple(parts)

    def _eval(self):
        return unambiguous_union_tables([p.table() for p in self.parts])

    def __repr__(self):
        return f"Union({list(self.parts)!r})"


def cat(second: UnionExpr, first: UnionExpr) -> UnionExpr:
    """Concatenation that fuses two plain words into one."""
    if isinstance(second, Word) and isinstance(first, Word):
        return Word(second.word + first.word)
    return Concat(second, first)


def union(parts: Sequence[UnionExpr]) -> UnionExpr:
    return parts[0] if len(parts) == 1 else Union(parts)


def eval_union_expr(x: UnionExpr) -> RimTable:
    return x.table()


@dataclass(frozen=True)
class ExprMetrics:
    length: int
    depth: int


def expr_metrics(x: UnionExpr) -> ExprMetrics:
    """Length adds over every node; depth adds along Concat, maxes over Union."""
    if isinstance(x, Word):
        return ExprMetrics(len(x.word), word_depth(x.word) or 0)
    if isinstance(x, Concat):
        a, b = expr_metrics(x.second), expr_metrics(x.first)
        return ExprMetrics(a.length + b.length, a.depth + b.depth)
    ms = [expr_metrics(p) for p in x.parts]
    return ExprMetrics(sum(m.length for m in ms), max(m.depth for m in ms))


def trace_expr(x: UnionExpr, cur: str, depth: list[int]) -> tuple[str, list[int]] | None:
    """Run one input through x, tracking per-bit depth; a union defers to the
    part whose domain holds the input."""
    if isinstance(x, Word):
        return trace_state(x.word, cur, depth)
    if isinstance(x, Concat):
        mid = trace_expr(x.first, cur, depth)
        return None if mid is None else trace_expr(x.second, *mid)
    hits = [p for p in x.parts if p.table().prefix_in_domain(cur) is not None]
    return trace_expr(hits[0], cur, depth) if len(hits) == 1 else None


def expr_input_depth(x: UnionExpr, m: int) -> int | None:
    """Largest traced depth over the inputs of length m where x is defined."""
    best = None
    for s in words_of_length(m):
        out = trace_expr(x, s, [0] * m)
        if out is not None:
            d = max(out[1], default=0)
            best = d if best is None else max(best, d)
    return best


# Merging a union into one word ----------------------------------------------

def _pad(c: Circuit, m: int) -> Circuit:
    """c with extra pass-through inputs so that it reads m bits."""
    extra = m - len(c.inputs)
    if extra <= 0:
        return c
    b = Builder()
    new_id = {}
    outs = []
    for i, v in enumerate(c.vertices):
        if v.gate == Gate.OUTPUT:
            outs.append(new_id[v.parents[0]])
        else:
            new_id[i] = b.add(v.gate, *(new_id[p] for p in v.parents))
    outs += [b.input() for _ in range(extra)]
    for w in outs:
        b.output(w)
    return b.build()


def _branch_circuits(us: Sequence[GenWord], min_out: int = 0) -> tuple[int, list[Circuit]]:
    cs = [circuit_of_word(u if u.alphabet in (PFL, TFL) else expand(u)) for u in us]
    m = max([len(c.inputs) for c in cs] + [1])
    cs = [_pad(c, m) for c in cs]
    while min(len(c.outputs) for c in cs) < min_out:
        m += 1
        cs = [_pad(c, m) for c in cs]
    return m, cs


def _check_pieces(us: Sequence[GenWord], same_delta: bool, cap: int) -> list[int]:
    if not us:
        raise DomainError("nothing to merge")
    tables = [eval_word_symbolic(u) for u in us]
    if any(t.is_empty for t in tables):
        raise DomainError("a piece evaluates to the empty function")
    ds = [delta(t) for t in tables]
    if None in ds:
        raise DomainError("every piece must have a single delta value")
    if same_delta and len(set(ds)) > 1:
        raise DomainError(f"delta values differ: {ds}")
    if not same_delta and len(set(ds)) < len(ds):
        raise DomainError(f"delta values repeat: {ds}")
    if same_delta and len(us) > 1:
        m = max(t.maxlen for t in tables)
        seen: set[str] = set()
        for u in us:
            dom = set(brute_force_table(u, m, cap).rows)
            if dom & seen:
                raise DomainError("piece domains overlap")
            seen |= dom
    return ds


def _lower_branches(b: Builder, cs: Sequence[Circuit], m: int, uses: Sequence[int]):
    """Lower every branch on its own copy of the input.

    Returns per branch (selector copies, masked outputs): the selector is 1
    exactly where the branch is defined and the masked outputs are zero
    elsewhere.  uses[i] extra selector copies are handed back for branch i.
    """
    from .circuit import depths

    k = len(cs)
    copies = [b.copies(b.input(), k) for _ in range(m)]
    out = []
    for i, c in enumerate(cs):
        data, valid = _lower(c, b, [copies[t][i] for t in range(m)])
        if not valid:
            raise DomainError("a total piece cannot share the input space with others")
        depth = dict(enumerate(depths(Circuit(b.vertices))))
        sel = b.copies(b.tree(Gate.AND, valid, depth), len(data) + uses[i])
        masked = [b.and_(s, y) for s, y in zip(sel, data)]
        out.append((sel[len(data):], masked))
    return out


def merge_same_delta(us: Sequence[GenWord], cap: int = DEFAULT_CAP) -> tuple[Circuit, GenWord]:
    """One partial circuit (and its word) for the union of pieces sharing δ."""
    _check_pieces(us, True, cap)
    m, cs = _branch_circuits(us, min_out=1)
    if len(cs) == 1:
        return cs[0], word_of_circuit(cs[0], PFL)
    b = Builder()
    branches = _lower_branches(b, cs, m, [1] * len(cs))
    n = len(cs[0].outputs)
    y0 = b.tree(Gate.OR, [sel[0] for sel, _ in branches])
    ys = [b.tree(Gate.OR, [masked[t] for _, masked in branches]) for t in range(n)]
    # y0 = 1 or undefined: zeta1(not y0, y0)
    f = b.fork(y0)
    h = b.zeta1(b.not_(f), f)
    ys[0] = b.and_(h, ys[0])
    for y in ys:
        b.output(y)
    c = b.build()
    return c, word_of_circuit(c, PFL)


def merge_mixed_delta(us: Sequence[GenWord], cap: int = DEFAULT_CAP) -> GenWord:
    """A word over Γ_RM ∪ τ for the union of pieces with distinct δ.

    A boolean circuit writes a validity bit followed by a fixed-length
    block; branch j lays out G_j pairs (0, 0), then P - G_j ones, then its
    output, with G_j = n_max - n_j and P = n_max - n_min.  The word then
    strips the validity bit with e and runs zeta P times: each zeta removes
    a pair led by 0 or a single leading 1.
    """
    _check_pieces(us, False, cap)
    if len(us) == 1:
        return GenWord(us[0].syms, RM)
    m, cs = _branch_circuits(us)
    ns = [len(c.outputs) for c in cs]
    n_max, P = max(ns), max(ns) - min(ns)
    gaps = [n_max - n for n in ns]
    layouts = []
    for g, n in zip(gaps, ns):
        layout = ["0"] * (2 * g) + ["1"] * (P - g) + list(range(n))
        layouts.append(layout)
    uses = [1 + sum(1 for s in lay if s == "1") for lay in layouts]
    b = Builder()
    branches = _lower_branches(b, cs, m, uses)
    sels = [iter(sel) for sel, _ in branches]
    valid = b.tree(Gate.OR, [next(s) for s in sels])
    bits = [valid]
    for p in range(n_max + P):
        terms = []
        for j, lay in enumerate(layouts):
            s = lay[p]
            if s == "1":
                terms.append(next(sels[j]))
            elif s != "0":
                terms.append(branches[j][1][s])
        bits.append(b.tree(Gate.OR, terms))
    for w in bits:
        b.output(w)
    body = word_of_circuit(b.build(), TFL)
    return GenWord(["zeta"] * P + ["e"] + list(body.syms), RM)


# Tagged sets ----------------------------------------------------------------

@dataclass
class TaggedWordSet:
    """Pieces keyed by δ; the pieces have disjoint domains and their union
    is the decomposed element.  m is the base input length."""
    m: int
    entries: dict[int, UnionExpr] = field(default_factory=dict)

    def deltas(self) -> list[int]:
        return sorted(self.entries)

    def tables(self) -> dict[int, RimTable]:
        return {d: x.table() for d, x in sorted(self.entries.items())}

    def union_table(self) -> RimTable:
        ts = list(self.tables().values())
        return unambiguous_union_tables(ts) if ts else theta()

    def words(self, cap: int = DEFAULT_CAP) -> dict[int, GenWord]:
        return {d: flatten(x, cap) for d, x in sorted(self.entries.items())}

    def to_text(self, cap: int = DEFAULT_CAP) -> str:
        lines = [f"m={self.m}"]
        lines += [f"delta={d} : {w}" for d, w in self.words(cap).items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TaggedWordSet":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("m="):
            raise DomainError("tagged set text must start with m=<m>")
        out = cls(int(lines[0][2:]))
        for ln in lines[1:]:
            head, _, body = ln.partition(":")
            if not head.strip().startswith("delta="):
                raise DomainError(f"bad entry line {ln!r}")
            out.entries[int(head.strip()[6:])] = Word(parse_word(body))
        return out


def flatten(x: UnionExpr, cap: int = DEFAULT_CAP) -> GenWord:
    """A single word with the same evaluation as x (unions get merged)."""
    if isinstance(x, Word):
        return x.word
    if isinstance(x, Concat):
        a, b = flatten(x.second, cap), flatten(x.first, cap)
        if a.alphabet != b.alphabet:
            a, b = _to_pfl(a), _to_pfl(b)
        return a + b
    _, w = merge_same_delta([_to_pfl(flatten(p, cap)) for p in x.parts], cap)
    return w


def _to_pfl(w: GenWord) -> GenWord:
    return w if w.alphabet in (PFL, TFL) else expand(w)


def _prune(entries: dict[int, list[UnionExpr]]) -> dict[int, UnionExpr]:
    out = {}
    for d in sorted(entries):
        parts = [p for p in entries[d] if not p.table().is_empty]
        if parts:
            out[d] = union(parts)
    return out


def compose_tagged_sets(U: TaggedWordSet, V: TaggedWordSet) -> TaggedWordSet:
    """Pieces of (!∪ V)∘(!∪ U): every v·u, regrouped by the summed δ."""
    grouped: dict[int, list[UnionExpr]] = {}
    for du, u in sorted(U.entries.items()):
        for dv, v in sorted(V.entries.items()):
            grouped.setdefault(du + dv, []).append(cat(v, u))
    entries = _prune(grouped)
    ts = [x.table() for x in entries.values()]
    m = max([U.m] + [t.maxlen for t in ts])
    return TaggedWordSet(m, entries)


def decompose_table_by_output_length(f: RimTable) -> list[RimTable]:
    """Pieces of f grouped by image length at the level of its longest key."""
    if f.k != 2:
        raise DomainError("decomposition works over {0,1}")
    if f.is_empty:
        raise DomainError("the empty function has no pieces")
    g = refine_to_level(f, f.maxlen)
    groups: dict[int, dict[str, str]] = {}
    for x, y in g.rows.items():
        groups.setdefault(len(y), {})[x] = y
    return [RimTable(groups[i], 2, check=False) for i in sorted(groups)]


def symbol_set(sym, alpha) -> TaggedWordSet:
    """The tagged set of a single symbol over Γ_M ∪ τ."""
    if isinstance(sym, Tau):
        return TaggedWordSet(sym.j, {0: Word(GenWord([sym], MPFL))})
    names = FRAGMENTS.get(sym, (sym,))
    entries = {}
    for n in names:
        t = MPFL[n].table
        entries[delta(t)] = Word(GenWord([n], MPFL))
    return TaggedWordSet(max(MPFL[n].table.maxlen for n in names), entries)


def _identity_set() -> TaggedWordSet:
    return TaggedWordSet(0, {0: Word(GenWord([], MPFL))})


def _check_m_word(w: GenWord) -> None:
    for s in w.syms:
        if not isinstance(s, Tau) and s not in FRAGMENTS and s not in MPFL:
            raise DomainError(f"{s} is not a generator of the M alphabet")


def decompose_word_sequential(w: GenWord) -> TaggedWordSet:
    """Right-to-left scan; split symbols fan each piece out by fragment."""
    _check_m_word(w)
    cur = _identity_set()
    for s in w.applied_order():
        cur = compose_tagged_sets(cur, symbol_set(s, w.alphabet))
    cur.m = eval_word_symbolic(w).maxlen
    return cur


def decompose_word_parallel(w: GenWord, workers: int = 1) -> TaggedWordSet:
    """Balanced tree of pairwise compositions; each round's pairs are
    independent, so they may run on a thread pool without changing the
    result."""
    _check_m_word(w)
    level = [symbol_set(s, w.alphabet) for s in w.applied_order()] or [_identity_set()]
    size = 1
    while size < len(level):
        size *= 2
    level += [_identity_set() for _ in range(size - len(level))]
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while len(level) > 1:
            pairs = [(level[i], level[i + 1]) for i in range(0, len(level), 2)]
            if pool is None:
                level = [compose_tagged_sets(a, b) for a, b in pairs]
            else:
                level = list(pool.map(lambda p: compose_tagged_sets(*p), pairs))
    finally:
        if pool is not None:
            pool.shutdown()
    out = level[0]
    out.m = eval_word_symbolic(w).maxlen
    return out


def tagged_sets_agree(a: TaggedWordSet, b: TaggedWordSet) -> bool:
    from .rim import equiv_fin

    if a.deltas() != b.deltas():
        return False
    return all(equiv_fin(a.entries[d].table(), b.entries[d].table()) for d in a.deltas())
