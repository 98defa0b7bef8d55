import pytest
from hypothesis import given, strategies as st

from collatz_automaton import binary_fsm as bf
from collatz_automaton.binary_fsm import Symbol
from collatz_automaton.oracle import return_time

P0, P1, P2, IND = Symbol.PLUS0, Symbol.PLUS1, Symbol.PLUS2, Symbol.INDUCED
odd = st.integers(min_value=0, max_value=10**30).map(lambda k: 2 * k + 1)


@pytest.mark.parametrize("n, q, b", [
    (31, [31, 15, 7, 3, 1], [94, 47, 23, 11, 5, 2, 1]),
    (1, [1], [4, 2, 1]),
    (27, [27, 13, 6, 3, 1], [82, 41, 20, 10, 5, 2, 1]),
])
def test_quotient_chains(n, q, b):
    assert bf.quotient_chains(n) == (q, b)


def test_quotient_chains_reject_even():
    with pytest.raises(ValueError):
        bf.quotient_chains(10)


def test_decode_31():
    dec = bf.quotient_decode(31)
    assert dec.symbols == [P1, P2, P2, P2, P2, IND, IND]
    assert [(r.parity_q, r.parity_b) for r in dec.rows[:5]] == [(1, 0), (1, 1), (1, 1), (1, 1), (1, 1)]


def test_decode_1_and_27():
    assert bf.quotient_decode(1).symbols == [P1, IND, IND]
    assert bf.quotient_decode(27).symbols[0] is P1


def test_decode_rules_on_handmade_chains():
    # rule 3 with b = 3q, rule 4 (dirty division), rule 2 (parity mismatch)
    rows = bf.decode_chains([5, 2, 1], [9, 6, 2])
    assert [r.symbol for r in rows] == [P1, P0, P1]
    rows = bf.decode_chains([9, 5, 1], [9, 17, 3])
    assert rows[1].clean is False and rows[1].symbol is P2


def test_decode_raises_when_no_rule_applies():
    with pytest.raises(ValueError):
        bf.decode_chains([5, 2, 1], [9, 4, 1])


@given(odd)
def test_decode_covers_every_index(n):
    dec = bf.quotient_decode(n)
    assert len(dec.rows) == len(dec.b_chain)
    assert dec.symbols[0] is P1
    assert all(s is IND for s in dec.symbols[len(dec.q_chain):])


@pytest.mark.parametrize("bits, out", [("10111", "1011"), ("11", "1"), ("10", "1"), ("01", "0")])
def test_bit_window_map(bits, out):
    assert bf.bit_window_map(bits) == out


@pytest.mark.parametrize("bits", ["1", "", "102"])
def test_bit_window_map_rejects(bits):
    with pytest.raises(ValueError):
        bf.bit_window_map(bits)


@pytest.mark.parametrize("n, g", [(161, 1), (31, 2), (1, 2)])
def test_growth_predict(n, g):
    assert bf.growth_predict(n) == g


@given(odd)
def test_growth_predict_matches_bit_lengths(n):
    assert bf.growth_predict(n) == (3 * n + 1).bit_length() - n.bit_length()


def test_bitfsm_trace_161():
    tr = bf.bit_fsm_trace(161)
    assert tr.input_bits == "10100001"
    assert tr.growth_symbol == 1
    assert tr.predicted_symbols == ("+1", "/2", "/2")      # 484 = 0b111100100


def test_leading_bit_label_is_only_a_heuristic():
    # the "10..." prefix rule and the exact prediction disagree for 161
    assert bf.leading_bit_label(161) == 2 != bf.growth_predict(161)


@pytest.mark.parametrize("n, l_sym, l_classical", [(15, 12, 17), (1, 2, 3)])
def test_symbolic_length_examples(n, l_sym, l_classical):
    length = bf.symbolic_length(n)
    assert (length.l_sym, length.l_classical, length.truncated) == (l_sym, l_classical, False)


def test_symbolic_length_matches_simulation():
    for n in range(1, 20_001, 2):
        assert bf.symbolic_length(n).l_classical == return_time(n)
