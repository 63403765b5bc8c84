"""Brute-force oracles and seeded random instances.

Everything symbolic in the package is checked against exhaustive
evaluation here, so these helpers deliberately avoid the symbolic
machinery they are meant to test.
"""
from __future__ import annotations

import random

from .circuit import Builder, Circuit, Gate
from .errors import ResourceCap
from .genword import Alphabet, GenWord, Tau, eval_word_on_input
from .prefix_algebra import PrefixCode, alphabet, words_of_length
from .rim import RimTable

DEFAULT_CAP = 16


def check_cap(m: int, cap: int = DEFAULT_CAP) -> None:
    if m > cap:
        raise ResourceCap(f"exhaustive sweep over {{0,1}}^{m} exceeds cap {cap}", required=m)


def brute_force_table(w: GenWord, m: int, cap: int = DEFAULT_CAP) -> RimTable:
    check_cap(m, cap)
    rows = {}
    for x in words_of_length(m):
        y = eval_word_on_input(w, x)
        if y is not None:
            rows[x] = y
    return RimTable(rows, 2, check=False)


def defined_at(fn, m: int) -> set[str]:
    return {x for x in words_of_length(m) if fn(x) is not None}


def brute_force_input_length(w: GenWord, bound: int, cap: int = DEFAULT_CAP) -> int:
    """Least m whose defined inputs generate the same ideal as at level bound."""
    check_cap(bound, cap)
    top = defined_at(lambda x: eval_word_on_input(w, x), bound)
    for m in range(bound + 1):
        level = defined_at(lambda x: eval_word_on_input(w, x), m)
        grown = {x + s for x in level for s in words_of_length(bound - m)}
        if grown == top:
            return m
    return bound


def agree_on_level(f, g, m: int) -> bool:
    """Two partial functions on strings agree on every input of length m."""
    return all(f(x) == g(x) for x in words_of_length(m))


# Random instances -----------------------------------------------------------

def random_code(rng: random.Random, maxlen: int, k: int = 2, p_stop: float = 0.45) -> PrefixCode:
    """Random finite prefix code grown from a random tree walk."""
    letters = alphabet(k)
    words = []

    def grow(prefix):
        if len(prefix) == maxlen or (prefix and rng.random() < p_stop):
            if rng.random() < 0.8:
                words.append(prefix)
            return
        for a in letters:
            if rng.random() < 0.85:
                grow(prefix + a)

    if rng.random() < 0.05:
        return PrefixCode({""}, k)
    grow("")
    return PrefixCode(words, k)


def random_word_upto(rng: random.Random, n: int, k: int = 2) -> str:
    return "".join(rng.choice(alphabet(k)) for _ in range(rng.randint(0, n)))


def random_table(rng: random.Random, maxlen: int = 4, k: int = 2, img_len: int | None = None) -> RimTable:
    code = random_code(rng, maxlen, k)
    top = maxlen if img_len is None else img_len
    return RimTable({x: random_word_upto(rng, top, k) for x in code}, k)


def random_total_table(rng: random.Random, maxlen: int = 3, k: int = 2) -> RimTable:
    from .prefix_algebra import complement_code
    f = random_table(rng, maxlen, k)
    rows = dict(f.rows)
    for x in complement_code(f.domain()):
        rows[x] = random_word_upto(rng, maxlen, k)
    return RimTable(rows, k)


def random_pfl_table(rng: random.Random, m: int, n: int, density: float = 0.6) -> RimTable:
    rows = {}
    for x in words_of_length(m):
        if rng.random() < density:
            rows[x] = "".join(rng.choice("01") for _ in range(n))
    return RimTable(rows, 2)


def random_normal_table(rng: random.Random, maxlen: int = 4) -> RimTable:
    """Tables whose images all lie in one prefix code."""
    dom = random_code(rng, maxlen)
    img = list(random_code(rng, 3)) or [""]
    return RimTable({x: rng.choice(img) for x in dom}, 2)


def random_circuit(rng: random.Random, max_vertices: int = 40, partial: bool = True,
                   max_inputs: int = 6, zeta_rate: float = 0.15) -> Circuit:
    """A random valid circuit with at least one gate."""
    while True:
        m = rng.randint(1, max_inputs)
        budget = rng.randint(1, max(1, max_vertices - 2 * m))
        b = Builder()
        wires = [b.input() for _ in range(m)]
        for _ in range(budget):
            kinds = [Gate.NOT, Gate.FORK]
            if len(set(wires)) >= 2:
                kinds += [Gate.AND, Gate.OR]
                if partial and rng.random() < zeta_rate * 4:
                    kinds.append(Gate.ZETA1)
            g = rng.choice(kinds)
            if g in (Gate.NOT, Gate.FORK):
                i = rng.randrange(len(wires))
                v = wires.pop(i)
                new = b.add(g, v)
                wires[i:i] = [new, new] if g == Gate.FORK else [new]
            else:
                i = rng.randrange(len(wires))
                choices = [j for j in range(len(wires)) if wires[j] != wires[i]]
                j = rng.choice(choices)
                a, c = wires[i], wires[j]
                for t in sorted((i, j), reverse=True):
                    wires.pop(t)
                wires.insert(min(i, j), b.add(g, a, c))
            if len(b.vertices) + len(wires) >= max_vertices:
                break
        if len(b.vertices) == m or len(b.vertices) + len(wires) > max_vertices:
            continue
        rng.shuffle(wires)
        for w in wires:
            b.output(w)
        return b.build()


def random_gen_word(rng: random.Random, length: int, alpha: Alphabet, max_tau: int = 4,
                    tau_rate: float = 0.25) -> GenWord:
    names = sorted(alpha.gens)
    syms = []
    for _ in range(length):
        if max_tau >= 2 and rng.random() < tau_rate:
            j = rng.randint(2, max_tau)
            syms.append(Tau(rng.randint(1, j - 1), j))
        else:
            syms.append(rng.choice(names))
    return GenWord(syms, alpha)
