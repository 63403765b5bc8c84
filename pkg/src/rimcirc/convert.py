"""Compilers between circuits and generator words.

``word_of_circuit`` simulates the circuit gate by gate on a string of wires:
the operands of each gate are brought to the front with at most two
transpositions, the gate is applied at position 1, and a final permutation
puts the outputs in order.  ``circuit_of_word`` runs the word on a list of
wire references, so transpositions become plain rewiring.
"""
from __future__ import annotations

from .circuit import Builder, Circuit, Gate, NAMES, is_isomorphic
from .errors import DomainError
from .genword import PFL, TFL, Alphabet, GenWord, Tau, expand


def _place(wires: list, src: int, pos: int, start: int, out: list) -> None:
    """Move the first occurrence of src at index >= start to index pos."""
    i = wires.index(src, start)
    if i != pos:
        out.append(Tau(pos + 1, i + 1))
        wires[pos], wires[i] = wires[i], wires[pos]


def word_of_circuit(c: Circuit, alphabet: Alphabet | None = None) -> GenWord:
    has_zeta = any(v.gate == Gate.ZETA1 for v in c.vertices)
    if alphabet is None:
        alphabet = PFL if has_zeta else TFL
    applied = []
    wires = list(c.inputs)
    reached = 0
    for vid, v in enumerate(c.vertices):
        if v.gate in (Gate.INPUT, Gate.OUTPUT):
            continue
        name = NAMES[v.gate]
        if name not in alphabet:
            raise DomainError(f"gate {name} is not in alphabet {alphabet.name}")
        before = len(applied)
        _place(wires, v.parents[0], 0, 0, applied)
        if len(v.parents) == 2:
            _place(wires, v.parents[1], 1, 1, applied)
        # positions shift with the gates applied so far; count input indices
        shift = len(wires) - len(c.inputs)
        reached = max([reached, len(v.parents) - shift] + [s.j - shift for s in applied[before:]])
        applied.append(name)
        if v.gate == Gate.FORK:
            wires[:1] = [vid, vid]
        elif len(v.parents) == 2:
            wires[:2] = [vid]
        else:
            wires[0] = vid
    target = [c.vertices[o].parents[0] for o in c.outputs]
    for j in range(len(target)):
        if wires[j] != target[j]:
            _place(wires, target[j], j, j + 1, applied)
            reached = max(reached, applied[-1].j - (len(wires) - len(c.inputs)))
    m = len(c.inputs)
    if reached < m:
        # the last inputs are plain wires; touch position m so ℓ_in is kept
        applied[:0] = [Tau(m - 1, m), Tau(m - 1, m)] if m >= 2 else []
    return GenWord(reversed(applied), alphabet)


def circuit_of_word(u: GenWord) -> Circuit:
    if any(not isinstance(s, Tau) and u.alphabet[s].gate is None for s in u.syms):
        u = expand(u)
    b = Builder()
    wires: list[int] = []

    def pull(n):
        while len(wires) < n:
            wires.append(b.input())

    for s in u.applied_order():
        if isinstance(s, Tau):
            pull(s.j)
            i, j = s.i - 1, s.j - 1
            wires[i], wires[j] = wires[j], wires[i]
            continue
        g = u.alphabet[s].gate
        if g in (Gate.AND, Gate.OR, Gate.ZETA1):
            pull(2)
            a, c = wires[0], wires[1]
            if a == c:
                # both halves of one fork: a gate may not have equal parents
                c = b.not_(b.not_(c))
            wires[:2] = [b.add(g, a, c)]
        elif g == Gate.NOT:
            pull(1)
            wires[0] = b.not_(wires[0])
        elif g == Gate.FORK:
            pull(1)
            f = b.fork(wires[0])
            wires[:1] = [f, f]
        else:
            raise DomainError(f"{s} is not a circuit gate")
    for w in wires:
        b.output(w)
    return b.build()


def roundtrip_check(c: Circuit) -> bool:
    return is_isomorphic(circuit_of_word(word_of_circuit(c)), c)
