"""Emptiness and δ at desk scale, plus the reduction from unsatisfiability.

Emptiness is decided by exhaustive search at the a-priori length
maxlen(Γ)·|w|_Γ + maxindex_τ(w), which never depends on symbolic
composition.  The search is exponential, hence the cap.
"""
from __future__ import annotations

from .circuit import Circuit, Gate
from .convert import word_of_circuit
from .errors import DomainError
from .genword import PFL, TFL, GenWord, eval_word_on_input, length_bound, word_delta_sum
from .oracle import DEFAULT_CAP, check_cap
from .prefix_algebra import words_of_length

# Passes 1z through unchanged and is undefined on 0z: copy the first bit,
# flip one copy, and let zeta1 test it.
GUARD = GenWord(["zeta1", "not", "fork"], PFL)


def emptiness_check(w: GenWord, cap: int = DEFAULT_CAP) -> bool:
    m = length_bound(w)
    check_cap(m, cap)
    return not any(eval_word_on_input(w, x) is not None for x in words_of_length(m))


def delta_compute(w: GenWord, cap: int = DEFAULT_CAP) -> int | None:
    if w.alphabet not in (PFL, TFL):
        raise DomainError("delta_compute expects a word over the pfl gates and τ")
    if emptiness_check(w, cap):
        return None
    return word_delta_sum(w)


def nonsat_reduce(c: Circuit) -> GenWord:
    """A word that is the empty function exactly when c is unsatisfiable."""
    if len(c.outputs) != 1:
        raise DomainError("the reduction needs a single-output circuit")
    if any(v.gate == Gate.ZETA1 for v in c.vertices):
        raise DomainError("the reduction needs a boolean circuit")
    return GUARD + word_of_circuit(c, PFL)
