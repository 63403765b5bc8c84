import random

from hypothesis import given

from conftest import rngs, single_gate
from rimcirc.circuit import Builder, Gate, circuit_metrics, circuit_table, eval_circuit, is_isomorphic
from rimcirc.convert import circuit_of_word, roundtrip_check, word_of_circuit
from rimcirc.genword import PFL, TFL, Tau, eval_word_on_input, gate_depth, input_length, parse_word, word_metrics
from rimcirc.oracle import random_circuit, random_gen_word
from rimcirc.prefix_algebra import words_of_length
from rimcirc.rim import make_rim


def same_function(c, w, n):
    return all(eval_circuit(c, x) == eval_word_on_input(w, x) for x in words_of_length(n))


def gate_sequence(c):
    return [v.gate for v in c.vertices if v.gate not in (Gate.INPUT, Gate.OUTPUT)]


def has_padding(c):
    vs = c.vertices
    return any(v.gate == Gate.NOT and vs[v.parents[0]].gate == Gate.NOT
               and vs[vs[v.parents[0]].parents[0]].gate == Gate.FORK for v in vs)


class TestExamples:
    def test_not_circuit(self, not_circuit):
        w = word_of_circuit(not_circuit)
        assert [s for s in w.syms if not isinstance(s, Tau)] == ["not"]
        assert same_function(not_circuit, w, 1)
        assert roundtrip_check(not_circuit)

    def test_not_word(self):
        c = circuit_of_word(parse_word("not"))
        assert is_isomorphic(c, single_gate("not"))

    def test_swap_is_gateless(self):
        c = circuit_of_word(parse_word("t(1,2)"))
        assert c.n_gates == 0
        assert circuit_table(c) == make_rim({"00": "00", "01": "10", "10": "01", "11": "11"})

    def test_and_tau_fork(self):
        w = parse_word("and t(2,3) fork")
        c = circuit_of_word(w)
        assert gate_sequence(c) == [Gate.FORK, Gate.AND]
        assert same_function(c, w, 2)

    def test_fork_into_one_gate_is_padded(self):
        w = parse_word("and fork")
        c = circuit_of_word(w)
        assert has_padding(c) and same_function(c, w, 1)
        assert gate_depth(w) == 2 and circuit_metrics(c).depth == 4


class TestProperties:
    @given(rngs)
    def test_word_of_circuit_semantics(self, rng):
        c = random_circuit(rng, 30, partial=rng.random() < 0.5, max_inputs=8)
        w = word_of_circuit(c)
        assert same_function(c, w, c.l_in)
        forks = sum(v.gate == Gate.FORK for v in c.vertices)
        assert word_metrics(w).maxindex <= max(c.l_in + forks, 1)
        assert input_length(w) <= c.l_in

    @given(rngs)
    def test_round_trip_isomorphism_and_gate_order(self, rng):
        c = random_circuit(rng, 40, partial=rng.random() < 0.5)
        d = circuit_of_word(word_of_circuit(c))
        assert is_isomorphic(d, c)
        assert gate_sequence(d) == gate_sequence(c)

    @given(rngs)
    def test_circuit_of_word_semantics(self, rng):
        w = random_gen_word(rng, rng.randint(0, 12), rng.choice([PFL, TFL]))
        c = circuit_of_word(w)
        n = max(c.l_in, input_length(w))
        assert same_function(c, w, n)
        assert c.n_gates <= 3 * len(w)

    @given(rngs)
    def test_gate_depth_tracks_circuit_depth(self, rng):
        w = random_gen_word(rng, rng.randint(0, 12), PFL)
        c = circuit_of_word(w)
        d = circuit_metrics(c).depth
        assert gate_depth(w) <= d
        if not has_padding(c):
            assert gate_depth(w) == d


def test_maxindex_can_exceed_size():
    # after the fork the b wire sits third, and gates only read the front
    b = Builder()
    a, y = b.input(), b.input()
    f = b.fork(a)
    b.output(b.and_(f, y))
    b.output(f)
    c = b.build()
    w = word_of_circuit(c)
    assert circuit_metrics(c).size == 2
    assert word_metrics(w).maxindex == 3
    assert same_function(c, w, 2)


def test_bare_wire_does_not_round_trip():
    # no gate and no tau, so the word is empty and the wire count is lost
    b = Builder()
    b.output(b.input())
    c = b.build()
    assert len(word_of_circuit(c)) == 0
    assert circuit_of_word(word_of_circuit(c)).l_in == 0
    assert not roundtrip_check(c)


def test_size_linearity_constant():
    rng = random.Random(9)
    worst = 0.0
    for _ in range(100):
        c = random_circuit(rng, 40)
        worst = max(worst, len(word_of_circuit(c)) / max(1, circuit_metrics(c).size))
    assert worst <= 16
