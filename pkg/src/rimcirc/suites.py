"""Seeded property suites shared by ``rimcirc check`` and the acceptance tests.

Every suite returns a list of ``Check`` records; a check fails when any
sample produced a witness or the suite ran past its time limit.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import analysis, completion, unambiguous
from .circuit import (
    decode_precedence,
    depths,
    encode_precedence,
    eval_circuit,
    is_isomorphic,
    validate,
)
from .convert import circuit_of_word, word_of_circuit
from .genword import (
    EXPANSIONS,
    FRAGMENT_TABLES,
    FRAGMENTS,
    M,
    PFL,
    GenWord,
    eval_word_on_input,
    eval_word_symbolic,
    input_length,
    length_bound,
    parse_word,
    word_delta_sum,
)
from .oracle import (
    DEFAULT_CAP,
    brute_force_table,
    random_circuit,
    random_gen_word,
    random_normal_table,
    random_pfl_table,
    random_table,
)
from .prefix_algebra import words_of_length
from .rim import (
    RimTable,
    apply,
    canonicalize,
    compose,
    compose_all,
    delta,
    delta_set,
    equiv_fin,
    identity,
    injective_normal_factorization,
    is_injective,
    is_normal,
    make_rim,
    normal_chain_decomposition,
    regular_inverse,
    unambiguous_union_tables,
)


@dataclass
class Check:
    name: str
    samples: int = 0
    witnesses: list = field(default_factory=list)
    seconds: float = 0.0
    limit: float | None = None

    @property
    def passed(self) -> bool:
        return not self.witnesses and (self.limit is None or self.seconds <= self.limit)

    def fail(self, witness) -> None:
        self.witnesses.append(witness)

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        note = ""
        if self.witnesses:
            note = f"\twitness={self.witnesses[0]!r}"
        elif not self.passed:
            note = f"\ttime={self.seconds:.2f}s>{self.limit}s"
        return f"{self.name}\t{self.samples}\t{status}{note}"


class _Timer:
    def __init__(self, check: Check):
        self.check = check

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.check

    def __exit__(self, *exc):
        self.check.seconds += time.perf_counter() - self.t0
        return False


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def _random_policy(rng: random.Random) -> Callable[[str, int | None], str]:
    cache: dict = {}

    def choose(x, n):
        key = (x, n)
        if key not in cache:
            cache[key] = "".join(rng.choice("01") for _ in range(len(x) if n is None else n))
        return cache[key]

    return choose


# Calibrated on random partial circuits with s <= 60 and at most 10 inputs.
COMPLETION_DEPTH_CONSTANT = 5


# 1 ---------------------------------------------------------------------------

def suite_codec(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "codec")
    chk = Check("codec_roundtrip", limit=10.0)
    with _Timer(chk):
        for i in range(500):
            c = random_circuit(rng, max_vertices=40, partial=bool(i % 2))
            try:
                d = decode_precedence(encode_precedence(c))
            except Exception as e:  # noqa: BLE001 - any failure is a witness
                chk.fail((c.to_netlist(), repr(e)))
                continue
            if not (validate(d)[0] and is_isomorphic(d, c)):
                chk.fail(c.to_netlist())
            chk.samples += 1
    return [chk]


# 2 ---------------------------------------------------------------------------

def suite_compiler(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "compiler")
    chk = Check("compiler_equivalence", limit=60.0)
    with _Timer(chk):
        for _ in range(300):
            c = random_circuit(rng, max_vertices=40, max_inputs=12)
            w = word_of_circuit(c)
            if any(eval_word_on_input(w, x) != eval_circuit(c, x) for x in words_of_length(len(c.inputs))):
                chk.fail(("W(C)", c.to_netlist()))
            if not is_isomorphic(circuit_of_word(w), c):
                chk.fail(("iso", c.to_netlist()))
            chk.samples += 1
        done = 0
        while done < 300:
            u = random_gen_word(rng, rng.randint(1, 20), PFL, max_tau=6)
            cu = circuit_of_word(u)
            if len(cu.inputs) > 12:
                continue
            if any(eval_circuit(cu, x) != eval_word_on_input(u, x) for x in words_of_length(len(cu.inputs))):
                chk.fail(("C(u)", str(u)))
            done += 1
            chk.samples += 1
    return [chk]


# 3 ---------------------------------------------------------------------------

def _all_words(n: int):
    for L in range(n + 1):
        yield from words_of_length(L)


def suite_monoid(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "monoid")
    assoc, ident, oracle = Check("associativity"), Check("identity_laws"), Check("apply_oracle")
    probes = list(_all_words(7))
    one = identity()
    for _ in range(1000):
        f, g, h = (random_table(rng, rng.randint(0, 4)) for _ in range(3))
        gf = compose(g, f)
        if not equiv_fin(compose(h, gf), compose(compose(h, g), f)):
            assoc.fail((f, g, h))
        if not (equiv_fin(compose(one, f), f) and equiv_fin(compose(f, one), f)):
            ident.fail(f)
        for x in probes:
            y = apply(f, x)
            if apply(gf, x) != (None if y is None else apply(g, y)):
                oracle.fail((f, g, x))
                break
        for c in (assoc, ident, oracle):
            c.samples += 1
    return [assoc, ident, oracle]


# 4, 5 -------------------------------------------------------------------------

def suite_factor(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "factor")
    fac, chain = Check("injective_normal_factorization"), Check("normal_chain")
    for _ in range(300):
        f = random_table(rng, rng.randint(0, 4))
        nu, j = injective_normal_factorization(f)
        if not (equiv_fin(compose(nu, j), f) and is_injective(j) and is_normal(nu)):
            fac.fail(f)
        fac.samples += 1
    for _ in range(100):
        f = random_normal_table(rng)
        pieces = normal_chain_decomposition(f)
        small = all(len(p) - len(set(p.rows.values())) <= 1 for p in pieces)
        if not (small and equiv_fin(compose_all(pieces), f)):
            chain.fail(f)
        chain.samples += 1
    return [fac, chain]


def suite_regular(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "regular")
    chk = Check("regular_inverse")
    for _ in range(300):
        f = random_table(rng, rng.randint(0, 4))
        if not equiv_fin(compose(f, compose(regular_inverse(f), f)), f):
            chk.fail(f)
        chk.samples += 1
    return [chk]


# 6 ---------------------------------------------------------------------------

def suite_completion(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "completion")
    back, hom, uniq, witness = (Check("rho_of_completion"), Check("rho_homomorphism"),
                                Check("unique_total_completion"), Check("tilde_non_homomorphy"))
    for i in range(300):
        if i % 2:
            g = random_pfl_table(rng, rng.randint(0, 3), rng.randint(0, 3))
            mode = "plep"
        else:
            g = random_table(rng, rng.randint(0, 4))
            mode = "M"
        gbar = completion.nondet_table_complete(g, mode, _random_policy(rng))
        f0, s0 = completion.sector_membership(gbar)
        if not ((f0 if mode == "M" else s0) and equiv_fin(completion.rho_project(gbar), g)):
            back.fail((mode, g))
        back.samples += 1
    for i in range(300):
        if i % 2:
            m, n, p = (rng.randint(0, 3) for _ in range(3))
            f, g = random_pfl_table(rng, m, n), random_pfl_table(rng, n, p)
            mode = "plep"
        else:
            f, g = random_table(rng, rng.randint(0, 4)), random_table(rng, rng.randint(0, 4))
            mode = "M"
        fb = completion.nondet_table_complete(f, mode, _random_policy(rng))
        gb = completion.nondet_table_complete(g, mode, _random_policy(rng))
        lhs = completion.rho_project(compose(gb, fb))
        rhs = compose(completion.rho_project(gb), completion.rho_project(fb))
        if not equiv_fin(lhs, rhs):
            hom.fail((mode, f, g))
        hom.samples += 1
    from .oracle import random_total_table
    for _ in range(100):
        g = random_total_table(rng)
        expected = make_rim({"0": "0", **{"1" + x: "1" + y for x, y in g.rows.items()}})
        got = [completion.nondet_table_complete(g, "M", _random_policy(rng)) for _ in range(3)]
        if not all(t == expected for t in got):
            uniq.fail(g)
        uniq.samples += 1
    f, g = make_rim({"1": "0"}), make_rim({"0": "1"})
    tg, tf = completion.tilde_complete(g), completion.tilde_complete(f)
    ok = (completion.tilde_complete(compose(g, f)) == make_rim({"0": "0", "1": "1"})
          and compose(tg, tf) == make_rim({"0": "1", "1": "1"}))
    if not ok:
        witness.fail((compose(tg, tf),))
    witness.samples = 1
    return [back, hom, uniq, witness]


# 7 ---------------------------------------------------------------------------

def completion_depth_excess(c) -> int:
    d = max(depths(c), default=0)
    s, n = c.n_gates, len(c.outputs)
    bound = max(d, (s - 1).bit_length() + 2 * n.bit_length())
    return max(depths(completion.complete_circuit(c)), default=0) - bound


def suite_circuit_completion(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "circuit_completion")
    sem, lens, dep = Check("completion_semantics"), Check("completion_lengths"), Check("completion_depth")
    for _ in range(200):
        c = random_circuit(rng, max_vertices=60, max_inputs=10, zeta_rate=0.3)
        cc = completion.complete_circuit(c)
        n = len(c.outputs)
        for x in words_of_length(len(c.inputs)):
            y = eval_circuit(c, x)
            want = "0" * (n + 1) if y is None else "1" + y
            if eval_circuit(cc, "1" + x) != want or eval_circuit(cc, "0" + x) != "0" * (n + 1):
                sem.fail((c.to_netlist(), x))
                break
        if (len(cc.inputs), len(cc.outputs)) != (len(c.inputs) + 1, n + 1):
            lens.fail(c.to_netlist())
        excess = completion_depth_excess(c)
        if excess > COMPLETION_DEPTH_CONSTANT:
            dep.fail((excess, c.to_netlist()))
        for chk in (sem, lens, dep):
            chk.samples += 1
    return [sem, lens, dep]


# 8 ---------------------------------------------------------------------------

def suite_decompose(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "decompose")
    names = ["union", "disjoint", "piece_delta", "seq_equals_par", "by_output_length"]
    checks = {n: Check(n, limit=120.0 if n == "union" else None) for n in names}
    with _Timer(checks["union"]):
        for _ in range(300):
            w = random_gen_word(rng, rng.randint(1, 10), M)
            seq = unambiguous.decompose_word_sequential(w)
            par = unambiguous.decompose_word_parallel(w)
            E = eval_word_symbolic(w)
            m = seq.m
            oracle = brute_force_table(w, m, cap)
            if not (equiv_fin(seq.union_table(), E) and equiv_fin(oracle, E)):
                checks["union"].fail(str(w))
            tables = seq.tables()
            for x in words_of_length(m):
                if sum(apply(t, x) is not None for t in tables.values()) > 1:
                    checks["disjoint"].fail((str(w), x))
                    break
            if any(delta(t) != d for d, t in tables.items()):
                checks["piece_delta"].fail(str(w))
            if not unambiguous.tagged_sets_agree(seq, par):
                checks["seq_equals_par"].fail(str(w))
            pieces = [] if E.is_empty else unambiguous.decompose_table_by_output_length(E)
            if [delta(p) for p in pieces] != seq.deltas() or not all(
                    equiv_fin(p, tables[delta(p)]) for p in pieces):
                checks["by_output_length"].fail(str(w))
            for chk in checks.values():
                chk.samples += 1
    return list(checks.values())


# 9 ---------------------------------------------------------------------------

def fragment_words(name: str) -> list[GenWord]:
    return [parse_word(EXPANSIONS[f], PFL) for f in FRAGMENTS[name]]


def suite_unions(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "unions")
    ident, same, recomb = Check("fragment_identities"), Check("merge_same_delta"), Check("recombination")
    for name in FRAGMENTS:
        target = canonicalize(M[name].table)
        frag_tables = [make_rim(FRAGMENT_TABLES[f]) for f in FRAGMENTS[name]]
        if canonicalize(unambiguous_union_tables(frag_tables)) != target:
            ident.fail((name, "tables"))
        word = unambiguous.merge_mixed_delta(fragment_words(name), cap)
        if canonicalize(eval_word_symbolic(word)) != target:
            ident.fail((name, "merge_mixed_delta"))
        ident.samples += 1
    # same δ: the 0-branch and 1-branch of two random pfl words with equal δ
    guard1 = parse_word("zeta1 not fork", PFL)
    guard0 = parse_word("zeta1 fork", PFL)
    tries = 0
    while same.samples < 20 and tries < 2000:
        tries += 1
        u = random_gen_word(rng, rng.randint(1, 5), PFL)
        v = random_gen_word(rng, rng.randint(1, 5), PFL)
        a, b = u + guard1, v + guard0
        ta, tb = eval_word_symbolic(a), eval_word_symbolic(b)
        if ta.is_empty or tb.is_empty or delta(ta) != delta(tb):
            continue
        _, w = unambiguous.merge_same_delta([a, b], cap)
        if not equiv_fin(eval_word_symbolic(w), unambiguous_union_tables([ta, tb])):
            same.fail((str(a), str(b)))
        same.samples += 1
    for _ in range(100):
        u = random_gen_word(rng, rng.randint(1, 4), M)
        v = random_gen_word(rng, rng.randint(1, 4), M)
        U = unambiguous.decompose_word_sequential(u)
        V = unambiguous.decompose_word_sequential(v)
        W = unambiguous.compose_tagged_sets(U, V)
        if not equiv_fin(W.union_table(), compose(V.union_table(), U.union_table())):
            recomb.fail((str(u), str(v)))
        recomb.samples += 1
    return [ident, same, recomb]


# 10 --------------------------------------------------------------------------

def nonsat_instances(rng: random.Random, want: int, cap: int = DEFAULT_CAP, tries: int = 50000) -> list[GenWord]:
    """Distinct reductions of small unsatisfiable circuits that fit the cap."""
    found: dict[str, GenWord] = {}
    for _ in range(tries):
        if len(found) >= want:
            break
        c = random_circuit(rng, max_vertices=10, partial=False, max_inputs=2)
        if len(c.outputs) != 1:
            continue
        if any(eval_circuit(c, x) == "1" for x in words_of_length(len(c.inputs))):
            continue
        w = analysis.nonsat_reduce(c)
        if length_bound(w) <= cap:
            found.setdefault(str(w), w)
    return list(found.values())


def suite_emptiness(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "emptiness")
    agree, empties, dsum = Check("emptiness_agrees"), Check("empty_instances"), Check("delta_compute")
    reduced = nonsat_instances(rng, 24, cap)
    for w in reduced:
        if not (analysis.emptiness_check(w, cap) and brute_force_table(w, input_length(w), cap).is_empty):
            empties.fail(str(w))
        empties.samples += 1
    if len(reduced) < 20:
        empties.fail(f"only {len(reduced)} empty instances")
    words = list(reduced)
    while len(words) < 200:
        w = random_gen_word(rng, rng.randint(0, 7), PFL, max_tau=4)
        if length_bound(w) <= cap:
            words.append(w)
    for w in words:
        empty = analysis.emptiness_check(w, cap)
        if empty != brute_force_table(w, input_length(w), cap).is_empty:
            agree.fail(str(w))
        agree.samples += 1
        if not empty:
            d = analysis.delta_compute(w, cap)
            if d != word_delta_sum(w) or d != delta(eval_word_symbolic(w)):
                dsum.fail(str(w))
            dsum.samples += 1
    return [agree, empties, dsum]


# 11 --------------------------------------------------------------------------

def random_plep_table(rng: random.Random, maxlen: int = 3) -> RimTable:
    from .oracle import random_code
    code = list(random_code(rng, maxlen))
    d = rng.randint(-min((len(x) for x in code), default=0), 2)
    return RimTable({x: "".join(rng.choice("01") for _ in range(len(x) + d)) for x in code}, 2)


def suite_delta(seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    rng = _rng(seed, "delta")
    add, contain, reg = Check("delta_additive"), Check("delta_M_containment"), Check("delta_M_a1")
    for _ in range(500):
        f, g = random_plep_table(rng), random_plep_table(rng)
        gf = compose(g, f)
        if not gf.is_empty and delta(gf) != delta(f) + delta(g):
            add.fail((f, g))
        add.samples += 1
        f, g = random_table(rng, rng.randint(0, 4)), random_table(rng, rng.randint(0, 4))
        sums = {a + b for a in delta_set(f) for b in delta_set(g)}
        if not delta_set(compose(g, f)) <= sums:
            contain.fail((f, g))
        contain.samples += 1
    if delta_set(M["a1"].table) != {-1, 0, 1}:
        reg.fail(sorted(delta_set(M["a1"].table)))
    reg.samples = 1
    return [add, contain, reg]


CRITERIA: dict[int, tuple[str, Callable[..., list[Check]]]] = {
    1: ("codec", suite_codec),
    2: ("compiler", suite_compiler),
    3: ("monoid", suite_monoid),
    4: ("factor", suite_factor),
    5: ("regular", suite_regular),
    6: ("completion", suite_completion),
    7: ("circuit-completion", suite_circuit_completion),
    8: ("decompose", suite_decompose),
    9: ("unions", suite_unions),
    10: ("emptiness", suite_emptiness),
    11: ("delta", suite_delta),
}
SUITES = {name: fn for name, fn in CRITERIA.values()}


def run_suite(name: str, seed: int = 0, cap: int = DEFAULT_CAP) -> list[Check]:
    if name == "all":
        return [c for _, fn in CRITERIA.values() for c in fn(seed, cap)]
    return SUITES[name](seed, cap)
