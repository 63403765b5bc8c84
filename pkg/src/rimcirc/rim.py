"""Right-ideal morphisms given by finite tables.

A table ``{x_i: y_i}`` stands for the map ``x_i u -> y_i u``.  The keys form
a prefix code (the domain code).  Tables are compared either literally or up
to the finite-difference equivalence ``equiv_fin``, which identifies a table
with all of its refinements.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from .errors import AlphabetMismatch, DomainError, InvalidTable
from .prefix_algebra import (
    PrefixCode,
    alphabet,
    check_word,
    read_word,
    show,
    words_of_length,
)


class RimTable:
    """Finite table of a right-ideal morphism over an alphabet of size k."""

    __slots__ = ("k", "_rows", "_keys", "_lengths", "_hash")

    def __init__(self, rows: Mapping[str, str] | Iterable[tuple[str, str]] = (), k: int = 2, check: bool = True):
        rows = dict(rows)
        if check:
            for x, y in rows.items():
                check_word(x, k)
                check_word(y, k)
            keys = sorted(rows)
            for a, b in zip(keys, keys[1:]):
                if b.startswith(a):
                    raise InvalidTable(f"domain is not a prefix code: {show(a)} is a prefix of {show(b)}")
        self.k = k
        self._rows = rows
        self._keys = None
        self._lengths = None
        self._hash = None

    @property
    def rows(self) -> Mapping[str, str]:
        return MappingProxyType(self._rows)

    def __len__(self):
        return len(self._rows)

    def __iter__(self):
        return iter(sorted(self._rows.items()))

    def __eq__(self, other):
        return isinstance(other, RimTable) and self.k == other.k and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.k, frozenset(self._rows.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{show(x)}->{show(y)}" for x, y in self)
        return f"RimTable({{{body}}}, k={self.k})"

    @property
    def is_empty(self) -> bool:
        return not self._rows

    def sorted_keys(self) -> list[str]:
        if self._keys is None:
            self._keys = sorted(self._rows)
        return self._keys

    def key_lengths(self) -> list[int]:
        if self._lengths is None:
            self._lengths = sorted({len(x) for x in self._rows})
        return self._lengths

    def domain(self) -> PrefixCode:
        return PrefixCode(self._rows, self.k)

    def images(self) -> set[str]:
        return set(self._rows.values())

    @property
    def maxlen(self) -> int:
        return max((len(x) for x in self._rows), default=0)

    def prefix_in_domain(self, x: str) -> str | None:
        for n in self.key_lengths():
            if n > len(x):
                break
            if x[:n] in self._rows:
                return x[:n]
        return None

    def to_text(self) -> str:
        lines = [f"# k={self.k}"] + [f"{show(x)} -> {show(y)}" for x, y in self]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, k: int | None = None) -> "RimTable":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("#"):
                head = line[1:].strip()
                if head.startswith("k=") and k is None:
                    k = int(head[2:])
                continue
            if not line:
                continue
            if "->" not in line:
                raise InvalidTable(f"bad table line: {line!r}")
            x, y = line.split("->", 1)
            rows.append((x.strip(), y.strip()))
        k = 2 if k is None else k
        seen = {}
        for x, y in rows:
            x, y = read_word(x, k), read_word(y, k)
            if x in seen:
                raise InvalidTable(f"repeated domain word {show(x)}")
            seen[x] = y
        return cls(seen, k)


def make_rim(rows, k: int = 2) -> RimTable:
    return RimTable(rows, k)


def identity(k: int = 2) -> RimTable:
    return RimTable({"": ""}, k, check=False)


def theta(k: int = 2) -> RimTable:
    return RimTable({}, k, check=False)


def _same_k(*tables) -> int:
    ks = {t.k for t in tables}
    if len(ks) > 1:
        raise AlphabetMismatch(f"alphabet sizes differ: {sorted(ks)}")
    return ks.pop()


def apply(f: RimTable, x: str) -> str | None:
    p = f.prefix_in_domain(x)
    if p is None:
        return None
    return f._rows[p] + x[len(p):]


def strip_zeros(w: str) -> str:
    return w.rstrip("0")


def apply_rational(f: RimTable, x: str) -> str | None:
    """Apply f to x·0^ω; the result y·0^ω is reported as y without trailing zeros."""
    pad = max(0, f.maxlen - len(x))
    y = apply(f, x + "0" * pad)
    return None if y is None else strip_zeros(y)


def extensions_in(f: RimTable, y: str) -> list[str]:
    """Domain words of f that have y as a proper or improper prefix."""
    keys = f.sorted_keys()
    out = []
    i = bisect_left(keys, y)
    while i < len(keys) and keys[i].startswith(y):
        out.append(keys[i])
        i += 1
    return out


def compose(g: RimTable, f: RimTable) -> RimTable:
    """Table of g∘f (f applied first), by prefix-match-or-extend."""
    k = _same_k(g, f)
    out = {}
    grows = g._rows
    for x, y in f._rows.items():
        q = g.prefix_in_domain(y)
        if q is not None:
            out[x] = grows[q] + y[len(q):]
            continue
        for d in extensions_in(g, y):
            out[x + d[len(y):]] = grows[d]
    return RimTable(out, k, check=False)


def refine_to_level(f: RimTable, m: int) -> RimTable:
    if m < f.maxlen:
        raise DomainError(f"cannot refine to level {m} below maxlen {f.maxlen}")
    out = {}
    for x, y in f._rows.items():
        for s in words_of_length(m - len(x), f.k):
            out[x + s] = y + s
    return RimTable(out, f.k, check=False)


def canonicalize(f: RimTable) -> RimTable:
    """Merge sibling rows p·a -> v·a into p -> v until nothing merges."""
    rows = dict(f._rows)
    letters = alphabet(f.k)
    for n in range(f.maxlen, 0, -1):
        parents = {x[:-1] for x in rows if len(x) == n}
        for p in sorted(parents):
            kids = [p + a for a in letters]
            if not all(c in rows for c in kids):
                continue
            ys = [rows[c] for c in kids]
            v = ys[0][:-1]
            if all(y and y[-1] == a and y[:-1] == v for y, a in zip(ys, letters)):
                for c in kids:
                    del rows[c]
                rows[p] = v
    return RimTable(rows, f.k, check=False)


def common_level(*tables) -> int:
    return max((t.maxlen for t in tables), default=0)


def equiv_fin(f: RimTable, g: RimTable) -> bool:
    """Decide f ≡_fin g by refining both tables to a common level."""
    _same_k(f, g)
    L = common_level(f, g)
    return refine_to_level(f, L)._rows == refine_to_level(g, L)._rows


def equiv_fin_canonical(f: RimTable, g: RimTable) -> bool:
    """Decide f ≡_fin g by comparing maximally merged tables."""
    _same_k(f, g)
    return canonicalize(f) == canonicalize(g)


def _prefix_minimal(words: Iterable[str]) -> set[str]:
    ws = set(words)
    return {w for w in ws if not any(w[:i] in ws for i in range(len(w)))}


def image_code(f: RimTable) -> PrefixCode:
    return PrefixCode(_prefix_minimal(f._rows.values()), f.k)


@dataclass(frozen=True)
class Flags:
    total: bool
    injective: bool
    surjective: bool
    normal: bool
    plep: bool
    pfl: bool
    tfl: bool
    idempotent: bool


def is_injective(f: RimTable) -> bool:
    # x_i u -> y_i u is injective iff the images are distinct and no image is
    # a proper prefix of another (y_j = y_i s would give f(x_i s) = f(x_j)).
    ys = list(f._rows.values())
    return len(set(ys)) == len(ys) and len(_prefix_minimal(ys)) == len(ys)


def is_normal(f: RimTable) -> bool:
    return set(f._rows.values()) == image_code(f).words


def delta_set(f: RimTable) -> frozenset[int]:
    return frozenset(len(y) - len(x) for x, y in f._rows.items())


def is_plep(f: RimTable) -> bool:
    return len(delta_set(f)) <= 1


def is_pfl(f: RimTable) -> bool:
    return len({len(x) for x in f._rows}) <= 1 and len({len(y) for y in f._rows.values()}) <= 1


def classify(f: RimTable) -> Flags:
    dom = f.domain()
    pfl = is_pfl(f)
    return Flags(
        total=dom.is_maximal,
        injective=is_injective(f),
        surjective=image_code(f).is_maximal,
        normal=is_normal(f),
        plep=is_plep(f),
        pfl=pfl,
        tfl=pfl and bool(f._rows) and len(f) == f.k ** f.maxlen,
        idempotent=equiv_fin(compose(f, f), f),
    )


def delta(f: RimTable) -> int | None:
    ds = delta_set(f)
    return next(iter(ds)) if len(ds) == 1 else None


def lex_least(candidates: Sequence[str]) -> str:
    return min(candidates)


def regular_inverse(f: RimTable, chooser: Callable[[Sequence[str]], str] = lex_least) -> RimTable:
    """An injective f' with f∘f'∘f = f; domC(f') = imC(f)."""
    if f.is_empty:
        return f
    pre = {}
    for x, y in f._rows.items():
        pre.setdefault(y, []).append(x)
    rows = {y: chooser(sorted(pre[y])) for y in image_code(f).words}
    return RimTable(rows, f.k, check=False)


def injective_normal_factorization(f: RimTable) -> tuple[RimTable, RimTable]:
    """Return (nu, j) with f = nu∘j, j injective and nu normal."""
    imc = image_code(f)
    nu, j = {}, {}
    for p, y in f._rows.items():
        q = imc.covers(y)
        nu[p] = q
        j[p] = p + y[len(q):]
    return RimTable(nu, f.k, check=False), RimTable(j, f.k, check=False)


def normal_chain_decomposition(f: RimTable) -> list[RimTable]:
    """Normal factors, in application order, each merging at most one row."""
    if not is_normal(f):
        raise DomainError("normal_chain_decomposition needs a normal table")
    chain = []
    rows = dict(f._rows)
    while len(rows) - len(set(rows.values())) > 1:
        fibres = {}
        for x in sorted(rows):
            fibres.setdefault(rows[x], []).append(x)
        fibre = min((xs for xs in fibres.values() if len(xs) > 1), key=lambda xs: xs[0])
        x1, x2 = fibre[0], fibre[1]
        psi = {x: x for x in rows}
        psi[x1] = x2
        chain.append(RimTable(psi, f.k, check=False))
        del rows[x1]
    chain.append(RimTable(rows, f.k, check=False))
    return chain


def compose_all(tables: Sequence[RimTable], k: int = 2) -> RimTable:
    """Compose tables given in application order."""
    out = identity(k)
    for t in tables:
        out = compose(t, out)
    return out


def unambiguous_union_tables(fs: Sequence[RimTable], k: int | None = None) -> RimTable:
    if not fs:
        return theta(2 if k is None else k)
    k = _same_k(*fs)
    L = common_level(*fs)
    count, value = {}, {}
    for f in fs:
        for x, y in refine_to_level(f, L)._rows.items():
            count[x] = count.get(x, 0) + 1
            value[x] = y
    return RimTable({x: value[x] for x, c in count.items() if c == 1}, k, check=False)


def higman_transport(f: RimTable, C: PrefixCode, eta: Sequence[str]) -> RimTable:
    if len(eta) != f.k or set(eta) != C.words:
        raise DomainError("eta must biject the alphabet onto C")
    if C.k != 2 or not C.is_maximal:
        raise DomainError("transport needs a maximal binary code")

    def code(w):
        return "".join(eta[int(c)] for c in w)

    return RimTable({code(x): code(y) for x, y in f._rows.items()}, 2)
