import random

import pytest
from hypothesis import given, settings, strategies as st

from hansec import commitment
from hansec.commitment import Opening
from hansec.group import count_exponentiations, make_group

from oracle import power, subgroup


def test_naive_oracle_pedersen_vector():
    assert power(2, 6, 23) * power(3, 4, 23) % 23 == 9
    # equivocation with log_g g2 = 8: r' = r + 8 (m - m') mod 11
    assert (6 + 8 * (4 - 5)) % 11 == 9
    assert power(2, 9, 23) * power(3, 5, 23) % 23 == 9


def test_toy_vector(toy):
    c, opening = commitment.commit(4, toy, r=6)
    assert c == 9
    assert commitment.reveal(c, opening, toy) == 4


def test_equivocation_with_known_trapdoor(toy):
    c, _ = commitment.commit(4, toy, r=6)
    assert commitment.reveal(c, Opening(5, 9), toy) == 5


def test_perfect_hiding_brute_force(toy):
    order_11 = set(subgroup(2, 23))
    for m in range(11):
        values = {commitment.commit(m, toy, r=r)[0] for r in range(11)}
        assert values == order_11


def test_binding_rejects_other_openings(real_group, rng):
    G = real_group
    c, opening = commitment.commit(42, G, rng)
    assert commitment.reveal(c, Opening(43, opening.r), G) is None
    assert commitment.reveal(c, Opening(42, opening.r + 1), G) is None


def test_two_exponentiations(real_group, rng):
    with count_exponentiations() as c:
        commitment.commit(7, real_group, rng)
    assert c.count == 2


@settings(max_examples=30, deadline=None)
@given(st.binary(max_size=64), st.integers(min_value=0, max_value=2**32))
def test_bytes_commit_roundtrip(data, seed):
    G = make_group("prime192v1")
    c, opening = commitment.commit_bytes(data, G, random.Random(seed))
    assert commitment.reveal(c, opening, G) == commitment.message_scalar(G, data)


def test_wire_roundtrip(any_group, rng):
    G = any_group
    c, opening = commitment.commit(3, G, rng)
    assert commitment.decode_commit(G, commitment.encode_commit(G, c)) == c
    assert commitment.decode_reveal(G, commitment.encode_reveal(G, opening)) == opening
