import random

import pytest
from hypothesis import given

from conftest import rngs, single_gate
from rimcirc.circuit import (
    CODE0,
    Builder,
    Circuit,
    Gate,
    Vertex,
    _table_from_fn,
    bits_to_hex,
    check,
    circuit_metrics,
    circuit_table,
    decode_precedence,
    encode_precedence,
    encode_records,
    eval_circuit,
    gate_table,
    hex_to_bits,
    is_isomorphic,
    kappa_table,
    tau_table,
    validate,
    zeta_m_table,
)
from rimcirc.errors import CircuitInvalid, InputTooShort
from rimcirc.oracle import random_circuit
from rimcirc.prefix_algebra import words_of_length
from rimcirc.rim import compose_all, equiv_fin, identity, make_rim

# Frozen output of the encoder for input -> not -> output.
NOT_GOLDEN = "10001100000010001100011101001010000100011000111010110000011010010100111"
NOT_RECORDS = "#01#000#01#01##10#100#01#01##11#001#10#10###"


def raw(records):
    """Bits for hand-written (gate code, left, right) records, numbered 1.."""
    w = len(records).bit_length()
    s = "".join(f"#{v:0{w}b}#{g:03b}#{l:0{w}b}#{r:0{w}b}#" for v, (g, l, r) in enumerate(records, 1))
    return "".join(CODE0[ch] for ch in s + "##")


def after(*ts):
    """Composite written left to right, rightmost applied first."""
    return compose_all(list(reversed(ts)))


def tau(i, j):
    return tau_table(i, j) if i < j else identity()


def kappa_inv(n):
    return _table_from_fn(n, lambda x: x[n - 1] + x[:n - 1] + x[n:])


class TestValidate:
    def test_minimal_not(self, not_circuit):
        assert validate(not_circuit) == (True, [])

    def test_and_with_equal_parents(self):
        c = Circuit([Vertex(Gate.INPUT, ()), Vertex(Gate.AND, (0, 0)), Vertex(Gate.OUTPUT, (1,))])
        ok, msgs = validate(c)
        assert not ok and any("step 3" in m for m in msgs)

    def test_output_feeding_vertex(self):
        c = Circuit([Vertex(Gate.INPUT, ()), Vertex(Gate.OUTPUT, (0,)), Vertex(Gate.NOT, (1,)),
                     Vertex(Gate.OUTPUT, (2,))])
        ok, msgs = validate(c)
        assert not ok and any("step 4" in m for m in msgs)
        with pytest.raises(CircuitInvalid) as e:
            check(c)
        assert e.value.vertex is not None


class TestEval:
    def test_gates(self, not_circuit):
        assert eval_circuit(not_circuit, "0") == "1"
        z = single_gate("zeta1")
        assert eval_circuit(z, "01") == "1"
        assert eval_circuit(z, "10") is None
        a = single_gate("and")
        assert eval_circuit(a, "11") == "1"
        assert eval_circuit(a, "10") == "0"

    def test_surplus_bits_pass_through(self, not_circuit):
        assert eval_circuit(not_circuit, "0101") == "1101"

    def test_too_short(self):
        with pytest.raises(InputTooShort):
            eval_circuit(single_gate("and"), "1")


class TestMetrics:
    def test_not(self, not_circuit):
        m = circuit_metrics(not_circuit)
        assert (m.l_in, m.l_out, m.size, m.depth) == (1, 1, 1, 1)

    def test_and_then_not(self):
        b = Builder()
        x, y = b.input(), b.input()
        b.output(b.not_(b.and_(x, y)))
        m = circuit_metrics(b.build())
        assert (m.l_in, m.l_out, m.size, m.depth) == (2, 1, 2, 2)

    @given(rngs)
    def test_lengths_bounded_by_size(self, rng):
        m = circuit_metrics(random_circuit(rng, 40))
        assert m.l_in <= m.size and m.l_out <= m.size


class TestCodec:
    def test_golden_not(self, not_circuit):
        assert encode_records(not_circuit) == NOT_RECORDS
        assert encode_precedence(not_circuit) == NOT_GOLDEN
        assert hex_to_bits(bits_to_hex(NOT_GOLDEN)) == NOT_GOLDEN

    def test_round_trip_not(self, not_circuit):
        assert is_isomorphic(decode_precedence(encode_precedence(not_circuit)), not_circuit)

    def test_empty_rejected_at_step1(self):
        with pytest.raises(CircuitInvalid) as e:
            decode_precedence("")
        assert e.value.step == 1

    def test_parent_after_vertex_rejected_at_step2(self):
        # v2 = not(v3) names a later vertex
        bits = raw([(0, 1, 1), (4, 3, 3), (1, 2, 2)])
        with pytest.raises(CircuitInvalid) as e:
            decode_precedence(bits)
        assert e.value.step == 2

    def test_equal_parents_rejected_at_step3(self):
        bits = raw([(0, 1, 1), (2, 1, 1), (1, 2, 2)])
        with pytest.raises(CircuitInvalid) as e:
            decode_precedence(bits)
        assert e.value.step == 3

    def test_unused_vertex_rejected_at_step4(self):
        bits = raw([(0, 1, 1), (0, 2, 2), (4, 1, 1), (1, 3, 3)])
        with pytest.raises(CircuitInvalid) as e:
            decode_precedence(bits)
        assert e.value.step == 4

    def test_hand_records_decode(self):
        c = decode_precedence(raw([(0, 1, 1), (4, 1, 1), (1, 2, 2)]))
        assert circuit_table(c) == make_rim({"0": "1", "1": "0"})

    @given(rngs)
    def test_round_trip(self, rng):
        c = random_circuit(rng, 40, partial=rng.random() < 0.5)
        d = decode_precedence(encode_precedence(c))
        assert validate(d)[0] and is_isomorphic(c, d)

    def test_encodings_form_prefix_code(self):
        rng = random.Random(3)
        codes = sorted({encode_precedence(random_circuit(rng, 20)) for _ in range(150)})
        for a, b in zip(codes, codes[1:]):
            assert not b.startswith(a)


class TestIsomorphism:
    def test_self(self, not_circuit):
        assert is_isomorphic(not_circuit, not_circuit)

    def test_different_gates(self, not_circuit):
        assert not is_isomorphic(not_circuit, single_gate("and"))
        assert not is_isomorphic(single_gate("and"), single_gate("or"))

    def test_port_order_matters(self):
        def zeta(swap):
            b = Builder()
            x, y = b.input(), b.input()
            b.output(b.zeta1(y, x) if swap else b.zeta1(x, y))
            return b.build()
        assert not is_isomorphic(zeta(False), zeta(True))


class TestGateTables:
    def test_examples(self):
        assert gate_table(Gate.NOT, 1) == make_rim({"0": "1", "1": "0"})
        assert gate_table(Gate.FORK, 1) == make_rim({"0": "00", "1": "11"})
        z2 = after(kappa_table(2), zeta_m_table(1), tau(2, 3), tau(1, 2), zeta_m_table(1))
        assert equiv_fin(z2, zeta_m_table(2))
        assert set(zeta_m_table(2).rows) == {"0000", "0001", "0100", "0101"}

    @pytest.mark.parametrize("j", range(1, 9))
    def test_not_identity(self, j):
        assert equiv_fin(gate_table(Gate.NOT, j), after(tau(1, j), gate_table(Gate.NOT), tau(1, j)))

    @pytest.mark.parametrize("n", range(2, 9))
    def test_kappa_as_adjacent_swaps(self, n):
        assert equiv_fin(kappa_table(n), after(*[tau(i, i + 1) for i in range(n - 1, 0, -1)]))

    @pytest.mark.parametrize("j", range(1, 9))
    def test_and_identity_with_cyclic_shifts(self, j):
        rhs = after(kappa_table(j), gate_table(Gate.AND), kappa_inv(j + 1), kappa_inv(j + 1))
        assert equiv_fin(gate_table(Gate.AND, j), rhs)

    @pytest.mark.parametrize("j", range(1, 9))
    def test_and_identity_with_transpositions_only_small_j(self, j):
        rhs = after(kappa_table(j), gate_table(Gate.AND), tau(2, j + 1), tau(1, j))
        assert equiv_fin(gate_table(Gate.AND, j), rhs) == (j <= 3)

    @pytest.mark.parametrize("j", range(1, 9))
    def test_fork_identity_with_cyclic_shift(self, j):
        rhs = after(kappa_table(j + 1), kappa_table(j + 1), gate_table(Gate.FORK), kappa_inv(j))
        assert equiv_fin(gate_table(Gate.FORK, j), rhs)

    @pytest.mark.parametrize("j", range(1, 9))
    def test_fork_identity_with_transposition_only_small_j(self, j):
        rhs = after(kappa_table(j + 1), kappa_table(j + 1), gate_table(Gate.FORK), tau(1, j))
        assert equiv_fin(gate_table(Gate.FORK, j), rhs) == (j <= 2)

    @pytest.mark.parametrize("m", range(2, 7))
    def test_zeta_recursion(self, m):
        fixed = after(kappa_table(m), zeta_m_table(1), kappa_inv(m + 1), kappa_inv(m + 1), zeta_m_table(m - 1))
        literal = after(kappa_table(m), zeta_m_table(1), tau(2, m + 1), tau(1, m), zeta_m_table(m - 1))
        assert equiv_fin(zeta_m_table(m), fixed)
        assert equiv_fin(zeta_m_table(m), literal) == (m <= 3)


@given(rngs)
def test_eval_matches_table(rng):
    c = random_circuit(rng, 30)
    t = circuit_table(c)
    for x in words_of_length(c.l_in):
        y = eval_circuit(c, x)
        assert (x in t.rows) == (y is not None)
        if y is not None:
            assert t.rows[x] == y


def test_netlist_round_trip():
    rng = random.Random(5)
    for _ in range(50):
        c = random_circuit(rng, 30)
        assert is_isomorphic(Circuit.from_netlist(c.to_netlist()), c)
