"""Generator alphabets and words over Γ ∪ τ.

A word is written left to right but acts right to left: the text
``"zeta1 fork"`` first applies fork, then zeta1.  Transpositions are written
``t(i,j)``.  Every generator acts on the front of a bit string.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Union

from .circuit import Gate, gate_fn, gate_need
from .errors import DomainError
from .prefix_algebra import words_of_length
from .rim import RimTable, apply, compose, delta, identity, make_rim


@dataclass(frozen=True, order=True)
class Tau:
    i: int
    j: int

    def __post_init__(self):
        if not 1 <= self.i < self.j:
            raise DomainError(f"transposition needs 1 <= i < j, got ({self.i},{self.j})")

    def __str__(self):
        return f"t({self.i},{self.j})"

    def act(self, y: str) -> str:
        i, j = self.i - 1, self.j - 1
        return y[:i] + y[j] + y[i + 1:j] + y[i] + y[j + 1:]


Sym = Union[str, Tau]


@dataclass(frozen=True)
class Generator:
    name: str
    table: RimTable
    gate: Gate | None = None
    expansion: tuple | None = None
    fragments: tuple[str, ...] = ()


@dataclass(frozen=True)
class Alphabet:
    name: str
    gens: dict = field(hash=False, compare=False)

    def __contains__(self, name):
        return name in self.gens

    def __getitem__(self, name) -> Generator:
        try:
            return self.gens[name]
        except KeyError:
            raise DomainError(f"{name!r} is not a generator of {self.name}") from None

    def __hash__(self):
        return hash(self.name)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.name == other.name

    @property
    def maxlen(self) -> int:
        return max(g.table.maxlen for g in self.gens.values())

    def delta_bounds(self) -> tuple[int, int]:
        """(c_minus, c_plus): every generator moves lengths within [-c_minus, c_plus]."""
        ds = [d for g in self.gens.values() for d in {len(y) - len(x) for x, y in g.table.rows.items()}]
        return max(0, -min(ds, default=0)), max(0, max(ds, default=0))


_TOKEN = re.compile(r"t\((\d+),(\d+)\)")


class GenWord:
    """A word over a generator alphabet and τ, stored in written order."""

    __slots__ = ("syms", "alphabet")

    def __init__(self, syms: Iterable[Sym] = (), alphabet: Alphabet | None = None):
        self.alphabet = PFL if alphabet is None else alphabet
        self.syms = tuple(syms)
        for s in self.syms:
            if not isinstance(s, Tau):
                self.alphabet[s]

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> "GenWord":
        return cls([parse_token(t) for t in text.split()], alphabet)

    def __str__(self):
        return " ".join(str(s) for s in self.syms)

    def __repr__(self):
        return f"GenWord({str(self)!r}, {self.alphabet.name})"

    def __len__(self):
        return len(self.syms)

    def __eq__(self, other):
        return isinstance(other, GenWord) and self.syms == other.syms and self.alphabet == other.alphabet

    def __hash__(self):
        return hash((self.syms, self.alphabet.name))

    def __add__(self, other: "GenWord") -> "GenWord":
        """Concatenation; ``v + u`` applies u first."""
        alpha = self.alphabet if self.alphabet == other.alphabet else join_alphabets(self.alphabet, other.alphabet)
        return GenWord(self.syms + other.syms, alpha)

    def applied_order(self):
        return reversed(self.syms)


def parse_token(tok: str) -> Sym:
    m = _TOKEN.fullmatch(tok)
    if m:
        return Tau(int(m.group(1)), int(m.group(2)))
    return tok


# Built-in alphabets --------------------------------------------------------

def _gate_gen(name, gate):
    from .circuit import gate_table
    return Generator(name, gate_table(gate, 1), gate=gate, expansion=(name,))


_TFL = {g.name: g for g in (
    _gate_gen("not", Gate.NOT), _gate_gen("and", Gate.AND),
    _gate_gen("or", Gate.OR), _gate_gen("fork", Gate.FORK))}
_PFL = dict(_TFL, zeta1=_gate_gen("zeta1", Gate.ZETA1))

TFL = Alphabet("tfl", _TFL)
PFL = Alphabet("pfl", _PFL)

M_TABLES = {
    "a0": {"0": "1", "1": "0"},
    "a1": {"00": "00", "01": "1", "1": "01"},
    "a2": {"0": "10", "10": "0", "11": "11"},
    "a3": {"": "0"},
    "a4": {"0": ""},
    "a5": {"0": "00"},
    "a6": {"00": "0"},
    "a7": {"0": "0", "1": "0"},
    "a8": {"0": "0", "1": "01"},
}

FRAGMENT_TABLES = {
    "a1_-1": {"01": "1"}, "a1_0": {"00": "00"}, "a1_1": {"1": "01"},
    "a2_-1": {"10": "0"}, "a2_0": {"11": "11"}, "a2_1": {"0": "10"},
    "a8_0": {"0": "0"}, "a8_1": {"1": "01"},
}

FRAGMENTS = {"a1": ("a1_-1", "a1_0", "a1_1"), "a2": ("a2_-1", "a2_0", "a2_1"), "a8": ("a8_0", "a8_1")}

# Words over Γ_pfl ∪ τ realizing each pfl generator of Γ_M (up to ≡_fin).
_A10 = "fork zeta1 fork zeta1 fork zeta1"
_FLIP2 = "t(1,2) not t(1,2) not"
EXPANSIONS = {
    "a0": "not",
    "a3": "and not fork fork",
    "a4": "zeta1",
    "a5": "fork zeta1 fork",
    "a6": "zeta1 fork zeta1",
    "a7": "and not fork",
    "a1_-1": "not zeta1 fork not zeta1",
    "a1_0": _A10,
    "a1_1": "t(1,2) not t(1,2) fork zeta1 fork not",
    "a2_-1": "zeta1 fork zeta1 not",
    "a2_0": f"{_FLIP2} {_A10} {_FLIP2}",
    "a2_1": "not fork zeta1 fork",
    "a8_0": "zeta1 fork",
    "a8_1": "t(1,2) not t(1,2) fork zeta1 fork not",
}


def _table_gen(name, rows, **kw):
    return Generator(name, make_rim(rows), **kw)


def _expansion(name):
    return tuple(parse_token(t) for t in EXPANSIONS[name].split())


_M = {n: _table_gen(n, t, fragments=FRAGMENTS.get(n, ()),
                    expansion=_expansion(n) if n in EXPANSIONS else None)
      for n, t in M_TABLES.items()}
_MPFL = {n: g for n, g in _M.items() if n not in FRAGMENTS}
_MPFL.update({n: _table_gen(n, t, expansion=_expansion(n)) for n, t in FRAGMENT_TABLES.items()})

M = Alphabet("M", _M)
MPFL = Alphabet("Mpfl", _MPFL)

# ζ(0 z1) = ε and ζ(1 z1) = z1; e(1) = ε.  Used for unions of mixed δ.
_RM = dict(_PFL)
_RM.update(_MPFL)
_RM["zeta"] = _table_gen("zeta", {"00": "", "01": "", "10": "0", "11": "1"})
_RM["e"] = _table_gen("e", {"1": ""})
RM = Alphabet("RM", _RM)

ALPHABETS = {a.name: a for a in (TFL, PFL, M, MPFL, RM)}


def infer_alphabet(names: Iterable[str]) -> Alphabet:
    """Smallest built-in alphabet containing every generator name."""
    names = set(names)
    for a in (TFL, PFL, MPFL, M, RM):
        if names <= set(a.gens):
            return a
    raise DomainError(f"no built-in alphabet has all of {sorted(names)}")


def parse_word(text: str, alphabet: Alphabet | str | None = None) -> GenWord:
    """Parse a token string, inferring the alphabet when none is given."""
    syms = [parse_token(t) for t in text.split()]
    if isinstance(alphabet, str):
        alphabet = ALPHABETS[alphabet]
    if alphabet is None:
        alphabet = infer_alphabet(s for s in syms if not isinstance(s, Tau))
    return GenWord(syms, alphabet)


def join_alphabets(a: Alphabet, b: Alphabet) -> Alphabet:
    for big in (RM, M):
        if all(n in big for n in list(a.gens) + list(b.gens)):
            return big
    return Alphabet(f"{a.name}+{b.name}", dict(a.gens, **b.gens))


def custom_alphabet(name: str, tables: dict) -> Alphabet:
    """A user alphabet from name -> RimTable (or row dict)."""
    gens = {}
    for n, t in tables.items():
        t = t if isinstance(t, RimTable) else make_rim(t)
        gens[n] = Generator(n, t)
    return Alphabet(name, gens)


def expand(w: GenWord) -> GenWord:
    """Rewrite every named generator by its Γ_pfl ∪ τ expansion."""
    out = []
    for s in w.syms:
        if isinstance(s, Tau):
            out.append(s)
            continue
        g = w.alphabet[s]
        if g.expansion is None:
            raise DomainError(f"{s} has no circuit expansion")
        out.extend(g.expansion)
    return GenWord(out, PFL)


# Evaluation ----------------------------------------------------------------

def _front_action(sym: Sym, alpha: Alphabet):
    """(need, fn) when sym acts through a fixed-length window, else None."""
    if isinstance(sym, Tau):
        return sym.j, sym.act
    g = alpha[sym]
    if g.gate is not None:
        return gate_need(g.gate), gate_fn(g.gate)
    return None


@lru_cache(maxsize=4096)
def _steps(syms: tuple, alpha: Alphabet) -> tuple:
    """(need, fn) per symbol in application order; need 0 marks a table."""
    out = []
    for s in reversed(syms):
        act = _front_action(s, alpha)
        if act is None:
            t = alpha[s].table
            out.append((0, lambda y, t=t: apply(t, y)))
        else:
            out.append(act)
    return tuple(out)


def eval_word_on_input(w: GenWord, x: str) -> str | None:
    cur = x
    for need, fn in _steps(w.syms, w.alphabet):
        if len(cur) < need:
            return None
        cur = fn(cur)
        if cur is None:
            return None
    return cur


def post_compose(sym: Sym, f: RimTable, alpha: Alphabet) -> RimTable:
    """Table of sym ∘ f."""
    act = _front_action(sym, alpha)
    if act is None:
        return compose(alpha[sym].table, f)
    need, fn = act
    out = {}
    for x, y in f.rows.items():
        if len(y) >= need:
            z = fn(y)
            if z is not None:
                out[x] = z
        else:
            for s in words_of_length(need - len(y)):
                z = fn(y + s)
                if z is not None:
                    out[x + s] = z
    return RimTable(out, 2, check=False)


@lru_cache(maxsize=8192)
def _symbolic(syms: tuple, alpha: Alphabet) -> RimTable:
    f = identity()
    for s in reversed(syms):
        f = post_compose(s, f, alpha)
    return f


def eval_word_symbolic(w: GenWord) -> RimTable:
    """E_w, composed symbolically; domain words have length <= ℓ_in(w)."""
    return _symbolic(w.syms, w.alphabet)


def input_length(w: GenWord) -> int:
    return eval_word_symbolic(w).maxlen


def output_length(w: GenWord) -> int | None:
    f = eval_word_symbolic(w)
    d = delta(f)
    return None if d is None else f.maxlen + d


@dataclass(frozen=True)
class WordMetrics:
    gamma_length: int
    length: int
    maxindex: int
    total_length: int


def maxindex_tau(w: GenWord) -> int:
    return max((s.j for s in w.syms if isinstance(s, Tau)), default=0)


def word_metrics(w: GenWord) -> WordMetrics:
    g = sum(1 for s in w.syms if not isinstance(s, Tau))
    mi = maxindex_tau(w)
    return WordMetrics(g, len(w.syms), mi, len(w.syms) + mi)


def generator_delta(sym: Sym, alpha: Alphabet) -> int:
    if isinstance(sym, Tau):
        return 0
    d = delta(alpha[sym].table)
    if d is None:
        raise DomainError(f"{sym} is not length-preserving up to a constant")
    return d


def word_delta_sum(w: GenWord) -> int:
    return sum(generator_delta(s, w.alphabet) for s in w.syms)


def length_bound(w: GenWord) -> int:
    """maxlen(Γ)·|w|_Γ + maxindex_τ(w), the a-priori input-length bound."""
    m = word_metrics(w)
    return w.alphabet.maxlen * m.gamma_length + m.maxindex


# Depth ----------------------------------------------------------------------

def _row_used(sym: Sym, alpha: Alphabet, cur: str) -> tuple[int, int] | None:
    """(bits read, bits written) when sym acts on cur, None when undefined."""
    act = _front_action(sym, alpha)
    if act is not None:
        need, fn = act
        if len(cur) < need:
            return None
        if isinstance(sym, Tau):
            return 0, 0
        out = fn(cur)
        return None if out is None else (need, len(out) - len(cur) + need)
    t = alpha[sym].table
    p = t.prefix_in_domain(cur)
    return None if p is None else (len(p), len(t.rows[p]))


def trace_state(w: GenWord, cur: str, depth: list[int]) -> tuple[str, list[int]] | None:
    """Run w on cur while tracking the gate depth of every bit."""
    for s in w.applied_order():
        used = _row_used(s, w.alphabet, cur)
        if used is None:
            return None
        if isinstance(s, Tau):
            depth = list(depth)
            i, j = s.i - 1, s.j - 1
            depth[i], depth[j] = depth[j], depth[i]
            cur = s.act(cur)
            continue
        r, n = used
        d = 1 + max(depth[:r], default=0)
        depth = [d] * n + depth[r:]
        cur = eval_word_on_input(GenWord([s], w.alphabet), cur)
    return cur, depth


def trace_depth(w: GenWord, x: str) -> int | None:
    """Depth of the per-input circuit C_{w,x}: each generator application is
    one gate reading and writing the bits of the table row it uses."""
    out = trace_state(w, x, [0] * len(x))
    return None if out is None else max(out[1], default=0)


def gate_depth(w: GenWord) -> int:
    """Longest chain of gates in a Γ_pfl/Γ_tfl word, read off wire by wire.

    This is the depth of C(w) except where C(w) has to route both copies of
    one fork into a single gate through a pair of nots; those padding gates
    are not counted.
    """
    wires: list[int] = []
    for s in w.applied_order():
        if isinstance(s, Tau):
            wires += [0] * (s.j - len(wires))
            wires[s.i - 1], wires[s.j - 1] = wires[s.j - 1], wires[s.i - 1]
            continue
        g = w.alphabet[s].gate
        need = 2 if g in (Gate.AND, Gate.OR, Gate.ZETA1) else 1
        wires += [0] * (need - len(wires))
        d = 1 + max(wires[:need])
        wires[:need] = [d, d] if g == Gate.FORK else [d]
    return max(wires, default=0)


def word_depth(w: GenWord) -> int | None:
    """Gate depth for Γ_pfl/Γ_tfl words; max per-input depth otherwise."""
    if w.alphabet in (PFL, TFL):
        return gate_depth(w)
    m = input_length(w)
    best = None
    for x in words_of_length(m):
        d = trace_depth(w, x)
        if d is not None and (best is None or d > best):
            best = d
    return best
