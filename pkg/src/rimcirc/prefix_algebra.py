"""Finite words over {0,...,k-1}, prefix codes and the code-level algorithms.

A word is a plain ``str`` of decimal digits; the empty string is the empty
word.  The alphabet size travels on the containers (``PrefixCode.k``) rather
than on each word, which keeps words hashable and cheap to slice.
"""
from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from .errors import AlphabetMismatch, DomainError

DIGITS = "0123456789"
EPS = "eps"


def alphabet(k: int) -> str:
    if not 2 <= k <= 10:
        raise DomainError(f"alphabet size must lie in [2, 10], got {k}")
    return DIGITS[:k]


def check_word(w: str, k: int) -> str:
    letters = alphabet(k)
    for c in w:
        if c not in letters:
            raise AlphabetMismatch(f"symbol {c!r} of {w!r} is not below k={k}")
    return w


def words_of_length(n: int, k: int = 2):
    """All words of length n in lexicographic order."""
    letters = alphabet(k)
    if n == 0:
        yield ""
        return
    for t in product(letters, repeat=n):
        yield "".join(t)


def show(w: str) -> str:
    return w if w else EPS


def read_word(token: str, k: int = 2) -> str:
    token = token.strip()
    if token in (EPS, "ε"):
        return ""
    return check_word(token, k)


def _prefix_free(words: Sequence[str]) -> bool:
    # In sorted order every proper extension of w directly follows w or
    # another extension of w, so comparing neighbours is enough.
    s = sorted(set(words))
    return all(not s[i + 1].startswith(s[i]) for i in range(len(s) - 1))


def is_prefix_code(words: Iterable[str], k: int = 2) -> bool:
    return _prefix_free([check_word(w, k) for w in words])


class PrefixCode:
    """A finite prefix code over an alphabet of size k (immutable)."""

    __slots__ = ("words", "k", "_maximal")

    def __init__(self, words: Iterable[str] = (), k: int = 2):
        ws = frozenset(check_word(w, k) for w in words)
        if not _prefix_free(list(ws)):
            raise DomainError(f"not a prefix code: {sorted(ws)}")
        object.__setattr__(self, "words", ws)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "_maximal", None)

    def __setattr__(self, name, value):
        raise AttributeError("PrefixCode is immutable")

    def __iter__(self):
        return iter(sorted(self.words))

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return w in self.words

    def __eq__(self, other):
        return isinstance(other, PrefixCode) and self.k == other.k and self.words == other.words

    def __hash__(self):
        return hash((self.k, self.words))

    def __repr__(self):
        return "PrefixCode({%s}, k=%d)" % (", ".join(show(w) for w in self), self.k)

    @property
    def maxlen(self) -> int:
        return max((len(w) for w in self.words), default=0)

    @property
    def is_maximal(self) -> bool:
        if self._maximal is None:
            object.__setattr__(self, "_maximal", _maximal(self.words, self.k))
        return self._maximal

    def covers(self, x: str) -> str | None:
        """The element of the code that is a prefix of x, if any."""
        for i in range(min(len(x), self.maxlen) + 1):
            if x[:i] in self.words:
                return x[:i]
        return None

    def to_text(self) -> str:
        lines = [f"# k={self.k}"] + [show(w) for w in self]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, k: int | None = None) -> "PrefixCode":
        words = []
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("#"):
                head = line[1:].strip()
                if head.startswith("k=") and k is None:
                    k = int(head[2:])
                continue
            if line:
                words.append(line)
        k = 2 if k is None else k
        return cls((read_word(w, k) for w in words), k)


def same_k(*codes) -> int:
    ks = {c.k for c in codes}
    if len(ks) > 1:
        raise AlphabetMismatch(f"alphabet sizes differ: {sorted(ks)}")
    return ks.pop()


def _interior(words) -> set[str]:
    return {w[:i] for w in words for i in range(len(w))}


def _maximal(words, k: int) -> bool:
    if not words:
        return False
    nodes = _interior(words) | set(words)
    letters = alphabet(k)
    return all(p + a in nodes for p in _interior(words) for a in letters)


def is_maximal_code(P: PrefixCode) -> bool:
    return P.is_maximal


def strict_prefixes(P: PrefixCode) -> set[str]:
    return _interior(P.words) - P.words


def complement_code(P: PrefixCode) -> PrefixCode:
    """Missing siblings along every branch of the prefix tree of P."""
    if not P.words:
        return PrefixCode({""}, P.k)
    nodes = _interior(P.words) | set(P.words)
    missing = {p + a for p in _interior(P.words) for a in alphabet(P.k) if p + a not in nodes}
    return PrefixCode(missing, P.k)


def standard_code(n: int) -> PrefixCode:
    if n < 2:
        raise DomainError("standard_code needs n >= 2")
    words = {"0" * (n - 2) + "0", "0" * (n - 2) + "1"}
    words |= {"0" * r + "1" for r in range(n - 2)}
    return PrefixCode(words, 2)


def expand_with_sentinel(P: PrefixCode) -> PrefixCode:
    """P together with strict_prefixes(P)·2, read over three letters."""
    if P.k != 2:
        raise AlphabetMismatch("expand_with_sentinel expects a binary code")
    return PrefixCode(set(P.words) | {p + "2" for p in strict_prefixes(P)}, 3)


def restrict_code_one_step(P: PrefixCode, p: str) -> PrefixCode:
    if p not in P.words:
        raise DomainError(f"{show(p)} is not in the code")
    return PrefixCode((P.words - {p}) | {p + a for a in alphabet(P.k)}, P.k)


def level_cover(P: PrefixCode, L: int) -> set[str]:
    """Words of length L that have a prefix in P (requires L >= maxlen)."""
    out = set()
    for w in P.words:
        out.update(w + s for s in words_of_length(L - len(w), P.k))
    return out


def codes_equiv_fin(P: PrefixCode, Q: PrefixCode) -> bool:
    same_k(P, Q)
    L = max(P.maxlen, Q.maxlen)
    return level_cover(P, L) == level_cover(Q, L)


def factor_over_maximal_code(z: str, C: PrefixCode) -> tuple[list[str], str]:
    if not C.is_maximal or len(C) < 2:
        raise DomainError("factorization needs a maximal code with at least two words")
    check_word(z, C.k)
    factors, i = [], 0
    while True:
        c = C.covers(z[i:])
        if c is None:
            return factors, z[i:]
        factors.append(c)
        i += len(c)


def higman_encode_word(x: str, C: PrefixCode, eta: Sequence[str]) -> str:
    """Image of x under the monoid morphism sending letter i to eta[i]."""
    if len(eta) != len(C) or set(eta) != C.words:
        raise DomainError("eta must list the words of C, one per letter")
    if not C.is_maximal:
        raise DomainError("Higman coding needs a maximal code")
    k = len(eta)
    if k < 2:
        raise DomainError("need at least two letters")
    check_word(x, k)
    return "".join(eta[int(c)] for c in x)
