"""Completions: total elements from which a partial element can be read back.

The inverse-homomorphic completions use a marker bit in front: inputs 1x
carry the original element, inputs 0x are parked in the 0-sector.  The
projection ``rho_project`` keeps the rows 1x -> 1y and strips the marker.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable

from .circuit import Builder, Circuit, Gate, depths
from .convert import circuit_of_word, word_of_circuit
from .errors import DomainError
from .genword import PFL, TFL, GenWord, Tau, expand
from .prefix_algebra import PrefixCode, codes_equiv_fin, complement_code, expand_with_sentinel, words_of_length
from .rim import (
    RimTable,
    compose,
    equiv_fin,
    identity,
    is_pfl,
    make_rim,
)

BOTTOM = "2"


def _pfl_shape(f: RimTable) -> tuple[int, int] | None:
    """(m, n) when every domain word has length m and every image length n."""
    if f.is_empty or not is_pfl(f):
        return None
    x, y = next(iter(f.rows.items()))
    return len(x), len(y)


def tilde_complete(f: RimTable) -> RimTable:
    if f.k != 2:
        raise DomainError("tilde completion is defined over {0,1}")
    rows = dict(f.rows)
    shape = _pfl_shape(f)
    if shape is not None:
        m, n = shape
        for x in words_of_length(m):
            rows.setdefault(x, "0" * n)
        return RimTable(rows, 2, check=False)
    for x in complement_code(f.domain()):
        rows[x] = "0"
    return RimTable(rows, 2, check=False)


def three_letter_complete(f: RimTable) -> RimTable:
    """Total table over {0,1,2} agreeing with f and sending the rest to 2."""
    if f.k != 2:
        raise DomainError("three-letter completion starts from a binary table")
    P = f.domain()
    full = PrefixCode(P.words | complement_code(P).words, 2)
    rows = {x: f.rows.get(x, BOTTOM) for x in expand_with_sentinel(full)}
    return RimTable(rows, 3)


_ZERO_SECTOR = make_rim({"0": "0"})
_ONE_SECTOR = make_rim({"1": "1"})


def sector_membership(f: RimTable) -> tuple[bool, bool]:
    """(in F0, in S0): f fixes, respectively preserves, the 0-sector."""
    if f.k != 2:
        raise DomainError("sectors are defined over {0,1}")
    on_zero = compose(f, _ZERO_SECTOR)
    in_f0 = equiv_fin(on_zero, _ZERO_SECTOR)
    total = codes_equiv_fin(on_zero.domain(), _ZERO_SECTOR.domain())
    in_s0 = total and all(y.startswith("0") for y in on_zero.rows.values())
    return in_f0, in_s0


def rho_project(fbar: RimTable, check: bool = True) -> RimTable:
    if check:
        in_f0, in_s0 = sector_membership(fbar)
        if not (in_f0 or in_s0):
            raise DomainError("rho is only defined on F0 and S0")
    on_one = compose(fbar, _ONE_SECTOR)
    rows = {x[1:]: y[1:] for x, y in on_one.rows.items() if y.startswith("1")}
    return RimTable(rows, 2, check=False)


Policy = Callable[[str, "int | None"], str]


def zero_policy(x: str, n: int | None) -> str:
    """All-zero filler of length n, or of length |x| when no length is fixed."""
    return "0" * (len(x) if n is None else n)


def nondet_table_complete(g: RimTable, mode: str = "M", choose: Policy = zero_policy) -> RimTable:
    """A completion of g in F0 (mode "M") or in S0 with fixed lengths ("plep")."""
    if g.k != 2:
        raise DomainError("completion works over {0,1}")
    if mode == "M":
        rows = {"0": "0"}
        rows.update({"1" + x: "1" + y for x, y in g.rows.items()})
        for x in complement_code(g.domain()):
            rows["1" + x] = "0" + choose(x, None)
        return RimTable(rows, 2)
    if mode != "plep":
        raise DomainError(f"unknown completion mode {mode!r}")
    if g.is_empty:
        m = n = 0
    else:
        shape = _pfl_shape(g)
        if shape is None:
            raise DomainError("plep completion needs a table with fixed input and output lengths")
        m, n = shape
    rows = {}
    for u in words_of_length(m):
        rows["0" + u] = "0" + choose(u, n)
        if u in g.rows:
            rows["1" + u] = "1" + g.rows[u]
        else:
            rows["1" + u] = "0" + choose(u, n)
    return RimTable(rows, 2)


# Circuit completion ---------------------------------------------------------

def _pass_through(c: Circuit) -> set[int]:
    """zeta1 vertices whose data wire can stand in for the gate itself.

    Passing the data wire through fails when it would give some gate two
    equal parents (a fork feeding both operands); those zeta1 vertices get a
    real gate instead.
    """
    zetas = {i for i, v in enumerate(c.vertices) if v.gate == Gate.ZETA1}
    while True:
        root = {}
        for i, v in enumerate(c.vertices):
            root[i] = root[v.parents[1]] if i in zetas else i
        clash = None
        for v in c.vertices:
            if len(v.parents) == 2 and v.gate != Gate.ZETA1:
                p, q = v.parents
                if root[p] == root[q]:
                    clash = p if p in zetas else q
                    break
        if clash is None:
            return zetas
        zetas.discard(clash)


def _lower(c: Circuit, b: Builder, inputs: list[int]) -> tuple[list[int], list[int]]:
    """Copy c into b with every zeta1 made total.

    Returns (data wires feeding c's outputs, validity wires); a validity wire
    is 1 exactly when its zeta1 would have been defined.
    """
    mapped = {}
    valid = []
    it = iter(inputs)
    outs = []
    passing = _pass_through(c)
    for i, v in enumerate(c.vertices):
        g = v.gate
        ps = [mapped[p] for p in v.parents]
        if g == Gate.INPUT:
            mapped[i] = next(it)
        elif g == Gate.OUTPUT:
            outs.append(ps[0])
        elif g == Gate.ZETA1 and i in passing:
            valid.append(b.not_(ps[0]))
            mapped[i] = ps[1]
        elif g == Gate.ZETA1:
            # or(a, b) equals b whenever the gate is defined
            fa = b.fork(ps[0])
            valid.append(b.not_(fa))
            mapped[i] = b.or_(fa, ps[1])
        else:
            mapped[i] = b.add(g, *ps)
    return outs, valid


def _masked_outputs(b: Builder, mask_sources: list[int], data: list[int], keep_marker: bool) -> list[int]:
    depth = {i: d for i, d in enumerate(depths(Circuit(b.vertices)))}
    marker = b.tree(Gate.AND, mask_sources, depth)
    copies = b.copies(marker, len(data) + (1 if keep_marker else 0))
    outs = [copies[0]] if keep_marker else []
    rest = copies[1:] if keep_marker else copies
    outs += [b.and_(m, y) for m, y in zip(rest, data)]
    return outs


def complete_circuit(c: Circuit) -> Circuit:
    """Boolean circuit for x0 x -> 1·C(x) if x0 = 1 and C(x) is defined, else 0^{n+1}."""
    b = Builder()
    x0 = b.input()
    xs = [b.input() for _ in c.inputs]
    data, valid = _lower(c, b, xs)
    for w in _masked_outputs(b, [x0] + valid, data, keep_marker=True):
        b.output(w)
    return b.build()


def tilde_circuit(c: Circuit) -> Circuit:
    """Boolean circuit of the classical completion: C(x) when defined, else 0^n."""
    b = Builder()
    xs = [b.input() for _ in c.inputs]
    data, valid = _lower(c, b, xs)
    outs = _masked_outputs(b, valid, data, keep_marker=False) if valid else data
    for w in outs:
        b.output(w)
    return b.build()


def depth_bound(d: int, s: int, n: int, const: int) -> int:
    """const + max{d, ⌈log2 s⌉ + 2⌈log2(n+1)⌉}."""
    return const + max(d, (s - 1).bit_length() + 2 * n.bit_length())


# Word completion ------------------------------------------------------------

@lru_cache(maxsize=None)
def gate_completion_word(name: str) -> GenWord:
    """Γ_tfl ∪ τ word of the completed single gate, marker on wire 1."""
    c = circuit_of_word(GenWord([name], PFL))
    return word_of_circuit(complete_circuit(c), TFL)


def complete_pfl_word(w: GenWord) -> GenWord:
    if w.alphabet not in (PFL, TFL):
        w = expand(w)
    out = []
    for s in w.syms:
        if isinstance(s, Tau):
            out.append(Tau(s.i + 1, s.j + 1))
        else:
            out.extend(gate_completion_word(s).syms)
    return GenWord(out, TFL)


def tau_bar(i: int, j: int) -> RimTable:
    t = Tau(i + 1, j + 1)
    rows = {"0": "0"}
    for u in words_of_length(j):
        rows["1" + u] = t.act("1" + u)
    return RimTable(rows, 2)


def complete_M_generators(w: GenWord) -> RimTable:
    """Compose the F0 completions of the symbols of w (rightmost first)."""
    out = identity()
    for s in w.applied_order():
        if isinstance(s, Tau):
            bar = tau_bar(s.i, s.j)
        else:
            bar = nondet_table_complete(w.alphabet[s].table, "M")
        out = compose(bar, out)
    return out
