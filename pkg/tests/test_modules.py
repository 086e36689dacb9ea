"""Module constructors, hom spaces, duality, and structural submodules."""

from __future__ import annotations

import random

import pytest

from deloop.errors import ValidationError
from deloop.fields import QQ
from deloop import linalg
from deloop.modules import (Module, base_change, cokernel, direct_sum, dual, hom_space,
                            hom_from_projective_basis, identity_hom, injective, kernel,
                            projective, ProjSum, radical, simple, socle, top, zero_module,
                            zero_hom)


def test_simple_basics(mono5):
    s5 = simple(mono5, "5")
    assert s5.total_dim == 1
    t, _ = top(s5)
    assert t.dim_vector() == s5.dim_vector()


def test_projective_dims(mono5):
    assert projective(mono5, "4").dim_vector() == (0, 0, 0, 1, 1)
    assert projective(mono5, "2").total_dim == 7
    assert projective(mono5, "1").dim_vector() == (1, 1, 1, 0, 0)


def test_projective_local3ext(local3ext):
    p2 = projective(local3ext, "2")
    assert p2.dims == {"1": 3, "2": 1}
    p1 = projective(local3ext, "1")
    assert p1.dims == {"1": 6, "2": 0}


def test_module_relation_validation(mono5):
    # vertex-2 loop must square to zero; a nonzero 1x1 b-map with b*b != 0 fails
    with pytest.raises(ValidationError):
        Module(mono5, {"2": 1}, {"b": linalg.from_rows(QQ, [[QQ.one()]])})


def test_hom_simples(mono5):
    s1, s2 = simple(mono5, "1"), simple(mono5, "2")
    assert len(hom_space(s1, s1)) == 1
    assert len(hom_space(s1, s2)) == 0


def test_hom_projective_to_simple(mono5):
    # top of P1 is S1, so there is exactly one map up to scalar (hand-solved).
    assert len(hom_space(projective(mono5, "1"), simple(mono5, "1"))) == 1


def test_yoneda_dimension(mono5):
    # dim Hom(P_v, M) = dim M at v, for the generic solver and every vertex
    m = projective(mono5, "2")
    for v in mono5.vertices():
        assert len(hom_space(projective(mono5, v), m)) == m.dims[v]
        ps = ProjSum(mono5, (v,))
        assert len(hom_from_projective_basis(ps, m)) == m.dims[v]


def test_dual_involution(mono5):
    for v in mono5.vertices():
        m = projective(mono5, v)
        dd = dual(dual(m))
        assert dd.algebra is mono5
        assert dd.same_content(m)


def test_dual_of_simple(mono5):
    s = simple(mono5, "3")
    d = dual(s)
    assert d.algebra is mono5.opposite()
    assert d.total_dim == 1


def test_injective_dims(mono5):
    # I1 is the dual of the opposite projective at 1, which has dimension 2.
    i1 = injective(mono5, "1")
    assert i1.total_dim == 2
    s, _ = socle(i1)
    assert s.dim_vector() == simple(mono5, "1").dim_vector()


def test_socle_of_projectives(mono5):
    s, _ = socle(projective(mono5, "1"))
    assert s.dims == {"1": 0, "2": 0, "3": 1, "4": 0, "5": 0}
    s2, _ = socle(projective(mono5, "2"))
    assert s2.dims == {"1": 0, "2": 2, "3": 0, "4": 0, "5": 1}


def test_top_of_projective(mono5):
    for v in mono5.vertices():
        t, _ = top(projective(mono5, v))
        assert t.dims[v] == 1 and t.total_dim == 1


def test_radical_semisimple(mono5):
    s = simple(mono5, "2")
    r, _ = radical(s)
    assert r.is_zero()


def test_kernel_cokernel_trivial(mono5):
    m = projective(mono5, "3")
    k, _ = kernel(identity_hom(m))
    assert k.is_zero()
    n = projective(mono5, "4")
    c, _ = cokernel(zero_hom(m, n))
    assert c.dim_vector() == n.dim_vector()


def test_direct_sum_homs(mono5):
    a, b = simple(mono5, "1"), projective(mono5, "4")
    s, incls, projs = direct_sum([a, b])
    assert s.total_dim == a.total_dim + b.total_dim
    assert incls[0].then(projs[0]).blocks["1"] == linalg.identity(QQ, 1)
    assert incls[0].then(projs[1]).is_zero()


def test_base_change_preserves_relations(mono5):
    rng = random.Random(3)
    m = projective(mono5, "2")
    changed, iso = base_change(m, rng)
    assert iso.is_iso()
    assert changed.total_dim == m.total_dim


def test_zero_module(mono5):
    z = zero_module(mono5)
    assert z.is_zero()
    assert len(hom_space(z, simple(mono5, "1"))) == 0
