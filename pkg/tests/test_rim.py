import itertools
import random

import pytest
from hypothesis import given

from conftest import T, rngs
from rimcirc.errors import DomainError, InvalidTable
from rimcirc.genword import M_TABLES, FRAGMENT_TABLES
from rimcirc.oracle import random_normal_table, random_table, random_total_table
from rimcirc.prefix_algebra import PrefixCode, words_of_length
from rimcirc.rim import (
    RimTable,
    apply,
    apply_rational,
    canonicalize,
    classify,
    compose,
    compose_all,
    delta,
    delta_set,
    equiv_fin,
    equiv_fin_canonical,
    higman_transport,
    identity,
    image_code,
    injective_normal_factorization,
    is_normal,
    make_rim,
    normal_chain_decomposition,
    refine_to_level,
    regular_inverse,
    theta,
    unambiguous_union_tables,
)

A = {n: make_rim(t) for n, t in M_TABLES.items()}
ZETA1 = T({"00": "0", "01": "1"})
ETA = ["00", "01", "1"]
C3 = PrefixCode(ETA)


def agree_upto(f, g, n):
    return all(apply(f, x) == apply(g, x) for L in range(n + 1) for x in words_of_length(L))


class TestTables:
    def test_make_rim(self):
        assert len(A["a1"]) == 3
        assert make_rim({}).is_empty
        with pytest.raises(InvalidTable):
            make_rim({"0": "1", "01": "0"})

    def test_apply(self):
        assert apply(ZETA1, "01") == "1"
        assert apply(ZETA1, "10") is None
        assert apply(ZETA1, "0") is None
        assert apply(identity(), "0110") == "0110"

    def test_apply_rational(self):
        assert apply_rational(T({"0": "1"}), "") == "1"
        assert apply_rational(theta(), "01") is None
        assert apply_rational(A["a5"], "0") == ""
        # compare with padded applications
        for x in ["", "0", "1", "01"]:
            for d in range(4, 9):
                y = apply(A["a8"], x + "0" * d)
                r = apply_rational(A["a8"], x)
                assert y.rstrip("0") == r

    def test_compose(self):
        assert compose(T({"0": "1"}), T({"1": "0"})) == T({"1": "1"})
        f = A["a1"]
        assert equiv_fin(compose(f, identity()), f)
        assert compose(ZETA1, T({"eps": "1"})).is_empty

    def test_refine(self):
        assert refine_to_level(T({"0": "0"}), 2) == T({"00": "00", "01": "01"})
        assert refine_to_level(theta(), 3).is_empty
        assert refine_to_level(T({"eps": "1"}), 1) == T({"0": "10", "1": "11"})
        with pytest.raises(DomainError):
            refine_to_level(A["a1"], 1)

    def test_canonicalize(self):
        assert canonicalize(T({"00": "00", "01": "01"})) == T({"0": "0"})
        assert canonicalize(A["a1"]) == A["a1"]
        assert canonicalize(theta()).is_empty

    def test_equiv_fin(self):
        assert equiv_fin(T({"0": "0"}), T({"00": "00", "01": "01"}))
        assert equiv_fin(A["a1"], A["a1"])
        assert not equiv_fin(A["a7"], A["a8"])

    def test_classify(self):
        z = classify(ZETA1)
        assert not z.total and z.injective and z.pfl and z.normal
        assert not is_normal(T({"0": "0", "10": "00"}))
        i = classify(identity())
        assert all(getattr(i, k) for k in ("total", "injective", "surjective", "normal", "plep", "pfl", "tfl", "idempotent"))

    def test_image_code_drops_extensions(self):
        assert image_code(T({"0": "0", "10": "00"})) == PrefixCode({"0"})

    def test_delta(self):
        assert delta_set(A["a1"]) == {-1, 0, 1}
        assert delta(ZETA1) == -1
        assert delta(identity()) == 0
        assert delta(theta()) is None and delta_set(theta()) == frozenset()
        assert delta(A["a1"]) is None

    def test_regular_inverse(self):
        fi = regular_inverse(A["a7"])
        assert fi == T({"0": "0"})
        assert equiv_fin(compose_all([A["a7"], fi, A["a7"]]), A["a7"])
        assert agree_upto(compose_all([A["a7"], fi, A["a7"]]), A["a7"], 3)
        assert equiv_fin(regular_inverse(identity()), identity())
        assert regular_inverse(A["a0"]) == A["a0"]
        assert regular_inverse(theta()).is_empty

    def test_injective_normal_factorization(self):
        f = T({"00": "0", "01": "00"})
        nu, j = injective_normal_factorization(f)
        assert j == T({"00": "00", "01": "010"})
        assert nu == T({"00": "0", "01": "0"})
        assert agree_upto(compose(nu, j), f, 4)
        nu, j = injective_normal_factorization(identity())
        assert equiv_fin(nu, identity()) and equiv_fin(j, identity())

    def test_normal_chain(self):
        f = T({"00": "0", "01": "0", "1": "0"})
        chain = normal_chain_decomposition(f)
        assert len(chain) == 2
        assert all(is_normal(g) and len(g.domain()) - len(image_code(g)) <= 1 for g in chain)
        assert equiv_fin(compose_all(chain), f)
        assert normal_chain_decomposition(A["a7"]) == [A["a7"]]
        with pytest.raises(DomainError):
            normal_chain_decomposition(T({"0": "0", "10": "00"}))

    def test_unambiguous_union(self):
        frags = [make_rim(FRAGMENT_TABLES[n]) for n in ("a1_-1", "a1_0", "a1_1")]
        assert equiv_fin(unambiguous_union_tables(frags), A["a1"])
        for name in ("a2", "a8"):
            parts = [make_rim(t) for n, t in FRAGMENT_TABLES.items() if n.startswith(name)]
            assert equiv_fin(unambiguous_union_tables(parts), A[name])
        assert equiv_fin(unambiguous_union_tables([A["a2"]]), A["a2"])
        assert unambiguous_union_tables([A["a2"], A["a2"]]).is_empty

    def test_union_is_not_associative(self):
        # x lies in all three domains: the n-ary union drops it, folding keeps it
        f, g, h = T({"0": "0"}), T({"0": "1"}), T({"0": "00"})
        nary = unambiguous_union_tables([f, g, h])
        folded = unambiguous_union_tables([unambiguous_union_tables([f, g]), h])
        assert nary.is_empty
        assert equiv_fin(folded, h)
        assert not equiv_fin(nary, folded)
        # n-ary union does not depend on the order
        for perm in itertools.permutations([f, g, h, T({"1": "1"})]):
            assert equiv_fin(unambiguous_union_tables(perm), T({"1": "1"}))

    def test_higman_transport(self):
        idk = identity(3)
        tr = higman_transport(idk, C3, ETA)
        assert equiv_fin(tr, identity())
        assert higman_transport(T({"2": "0"}, k=3), C3, ETA) == T({"1": "00"})
        with pytest.raises(DomainError):
            higman_transport(idk, PrefixCode({"0", "1"}), ["0", "1"])

    def test_text_round_trip(self):
        for t in list(A.values()) + [theta(), identity(), T({"2": "0"}, k=3)]:
            assert RimTable.from_text(t.to_text()) == t


class TestProperties:
    @given(rngs)
    def test_associativity(self, rng):
        f, g, h = (random_table(rng, 4) for _ in range(3))
        assert equiv_fin(compose(compose(h, g), f), compose(h, compose(g, f)))

    @given(rngs)
    def test_compose_matches_pointwise(self, rng):
        f, g = random_table(rng, 4), random_table(rng, 4)
        gf = compose(g, f)
        for n in range(8):
            for x in words_of_length(n):
                y = apply(f, x)
                assert apply(gf, x) == (None if y is None else apply(g, y))

    @given(rngs)
    def test_congruence(self, rng):
        f, h = random_table(rng, 3), random_table(rng, 3)
        g = refine_to_level(f, f.maxlen + rng.randint(0, 2))
        assert equiv_fin(f, g)
        assert equiv_fin(compose(h, f), compose(h, g))
        assert equiv_fin(compose(f, h), compose(g, h))

    @given(rngs)
    def test_canonical_idempotent_and_both_routes_agree(self, rng):
        f, g = random_table(rng, 4), random_table(rng, 4)
        c = canonicalize(f)
        assert canonicalize(c) == c
        assert equiv_fin(f, c)
        assert equiv_fin(f, g) == equiv_fin_canonical(f, g)
        g2 = refine_to_level(f, f.maxlen + 1)
        assert equiv_fin(f, g2) and equiv_fin_canonical(f, g2)

    @given(rngs)
    def test_regular_inverse_law(self, rng):
        f = random_table(rng, 4)
        if f.is_empty:
            return
        fi = regular_inverse(f)
        assert classify(fi).injective
        assert equiv_fin(compose(f, compose(fi, f)), f)

    @given(rngs)
    def test_injective_normal(self, rng):
        f = random_table(rng, 4)
        if f.is_empty:
            return
        nu, j = injective_normal_factorization(f)
        assert classify(j).injective and is_normal(nu)
        assert equiv_fin(compose(nu, j), f)
        if classify(f).total:
            assert classify(nu).total and classify(j).total

    @given(rngs)
    def test_normal_chain_property(self, rng):
        f = random_normal_table(rng, 4)
        P, Q = len(f.domain()), len(image_code(f))
        if P <= Q:
            return
        chain = normal_chain_decomposition(f)
        assert len(chain) <= P - Q
        assert all(len(g.domain()) - len(image_code(g)) <= 1 for g in chain)
        assert equiv_fin(compose_all(chain), f)

    @given(rngs)
    def test_delta_additive_on_plep(self, rng):
        n1, n2 = rng.randint(0, 3), rng.randint(0, 3)
        f = random_table(rng, 3, img_len=n1)
        g = random_table(rng, 3, img_len=n2)
        gf = compose(g, f)
        if delta(f) is None or delta(g) is None or gf.is_empty:
            return
        assert delta(gf) == delta(g) + delta(f)

    @given(rngs)
    def test_delta_set_subadditive(self, rng):
        f, g = random_table(rng, 4), random_table(rng, 4)
        sums = {a + b for a in delta_set(g) for b in delta_set(f)}
        assert delta_set(compose(g, f)) <= sums

    @given(rngs)
    def test_higman_transport_is_morphism(self, rng):
        f = random_total_table(rng, 2, k=3)
        g = random_table(rng, 2, k=3)
        lhs = higman_transport(compose(g, f), C3, ETA)
        rhs = compose(higman_transport(g, C3, ETA), higman_transport(f, C3, ETA))
        assert equiv_fin(lhs, rhs)


def test_idempotent_surjective_is_identity():
    # every table with maxlen <= 2 whose images are words of length <= 2
    words = [w for n in range(3) for w in words_of_length(n)]
    codes = [c for c in (PrefixCode(s) for r in range(1, 4) for s in itertools.combinations(words, r)
                         if _pf(s))]
    seen = 0
    for dom in codes:
        for imgs in itertools.product(words, repeat=len(dom)):
            f = make_rim(dict(zip(sorted(dom.words), imgs)))
            fl = classify(f)
            if fl.surjective and fl.idempotent:
                seen += 1
                assert equiv_fin(f, identity())
    assert seen > 0


def _pf(ws):
    return not any(a != b and b.startswith(a) for a in ws for b in ws)


def test_seeded_monoid_laws():
    rng = random.Random(11)
    for _ in range(200):
        f = random_table(rng, 4)
        assert equiv_fin(compose(identity(), f), f) and equiv_fin(compose(f, identity()), f)
