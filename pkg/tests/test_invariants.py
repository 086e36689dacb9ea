"""Delooping levels, syzygy closure, rank stabilization, monomial findim."""

from __future__ import annotations

import pytest

from deloop.decomp import is_isomorphic
from deloop.errors import ConditionsFail, GraphTruncated, MethodUnavailable, NotMonomial
from deloop.homological import CapExceeded, syzygy
from deloop.invariants import (DellContext, K0Lattice, UNKNOWN, dell, infinitely_deloopable,
                               k_dell, k_dell_algebra, k_dell_le, monomial_findim,
                               path_pd_table, phi, phi_T_dim, syzygy_closure)
from deloop.modules import Module, projective, simple
from deloop import linalg
from deloop.fields import QQ


def uniserial_12(mono5):
    return Module(mono5, {"1": 1, "2": 1}, {"a1": linalg.from_rows(QQ, [[1]])}, name="[1;2]")


def uniserial_23(mono5):
    return Module(mono5, {"2": 1, "3": 1}, {"c": linalg.from_rows(QQ, [[1]])}, name="[2;3]")


# -- syzygy closure ---------------------------------------------------------


def test_mono5_closure_is_finite(mono5):
    g = syzygy_closure(mono5)
    assert g.closed
    assert len(g.nodes) == 6  # S1..S4, [2;3], [1;2]
    for m in (simple(mono5, "2"), uniserial_12(mono5), uniserial_23(mono5)):
        assert g.find(m) is not None


def test_cycle3_closure(cycle3):
    g = syzygy_closure(cycle3)
    assert g.closed
    assert len(g.nodes) == 4  # S1, S2, S3, [1;2]


def test_semisimple_closure_empty():
    from deloop.formats import parse_algebra
    alg = parse_algebra("algebra ss\nfield Q\nvertices 1 2\n")
    g = syzygy_closure(alg)
    assert g.closed and len(g.nodes) == 0


def test_cyl9_closure_truncates(cyl9):
    g = syzygy_closure(cyl9, seeds=[("S2", simple(cyl9, "2"))], dim_cap=12)
    assert not g.closed
    assert any("dim cap" in fl for fl in g.flags)
    dims = sorted(n.module.total_dim for n in g.nodes)
    assert dims[:4] == [1, 3, 5, 7]  # widths grow by two each step


def test_infinitely_deloopable_mono5(mono5):
    g = syzygy_closure(mono5)
    assert infinitely_deloopable(simple(mono5, "2"), g)
    assert infinitely_deloopable(uniserial_12(mono5), g)  # fed by the S2 self-loop
    assert not infinitely_deloopable(uniserial_23(mono5), g)
    assert not infinitely_deloopable(simple(mono5, "1"), g)


def test_infinitely_deloopable_cycle3(cycle3):
    g = syzygy_closure(cycle3)
    assert infinitely_deloopable(simple(cycle3, "3"), g)
    assert not infinitely_deloopable(simple(cycle3, "1"), g)


def test_truncated_graph_raises(cyl9):
    g = syzygy_closure(cyl9, seeds=[("S2", simple(cyl9, "2"))], dim_cap=12)
    node = g.nodes[g.find(simple(cyl9, "2"))]
    with pytest.raises(GraphTruncated):
        infinitely_deloopable(node.idx, g)


# -- delooping levels ---------------------------------------------------------


def test_mono5_dell_values(mono5):
    ctx = DellContext(mono5)
    values = {v: dell(simple(mono5, v), ctx=ctx).value for v in mono5.vertices()}
    assert values == {"1": 2, "2": 0, "3": 0, "4": 1, "5": 0}
    total, per = k_dell_algebra(mono5, 1, ctx=ctx)
    assert total.value == 2 and total.tag == "exact"


def test_mono5_dell_s1_via_pool(mono5):
    ctx = DellContext(mono5)
    assert k_dell_le(simple(mono5, "1"), 1, 2, method="pool", ctx=ctx) is True
    assert k_dell_le(simple(mono5, "1"), 1, 1, method="pool", ctx=ctx) == UNKNOWN


def test_pool_and_adjoint_agree(mono5, cycle3):
    # whenever pool says yes, the adjoint method must also say yes
    for alg in (mono5, cycle3):
        ctx = DellContext(alg)
        for v in alg.vertices():
            s = simple(alg, v)
            for n in range(0, 3):
                if k_dell_le(s, 1, n, method="pool", ctx=ctx) is True:
                    assert k_dell_le(s, 1, n, method="adjoint", ctx=ctx) is True


def test_adjoint_rejects_k2(mono5):
    with pytest.raises(MethodUnavailable):
        k_dell_le(simple(mono5, "1"), 2, 0, method="adjoint")


def test_cycle3_kdell_all_k(cycle3):
    ctx = DellContext(cycle3)
    for k in range(1, 6):
        total, per = k_dell_algebra(cycle3, k, ctx=ctx)
        assert total.value == 1, k
    # dell S3 = 0 detected through the graph cycle
    assert k_dell_le(simple(cycle3, "3"), 1, 0, method="pool", ctx=ctx) is True
    for k in range(2, 6):
        assert k_dell(simple(cycle3, "2"), k, ctx=ctx).value == 1


def test_local3ext_dell_s2_exceeds_cap(local3ext):
    ctx = DellContext(local3ext)
    r = dell(simple(local3ext, "2"), cap=6, ctx=ctx)
    assert isinstance(r.value, CapExceeded)
    assert r.tag == "exceeds-cap"


def test_local3_dell_s1_zero(local3):
    ctx = DellContext(local3)
    assert dell(simple(local3, "1"), ctx=ctx).value == 0


# -- rank stabilization -------------------------------------------------------


def test_k0_columns_match_decomposition(mono5):
    from deloop.decomp import decompose
    g = syzygy_closure(mono5)
    lat = K0Lattice(g)
    for node in g.nodes:
        om = syzygy(node.module, 1)
        dec = decompose(om)
        row = lat.matrix[node.idx]
        for other in g.nodes:
            assert row[other.idx] == dec.multiplicity_of(other.module)


def test_phi_t_dim_values(mono5, cycle3):
    # frozen from the committed rank-sequence oracle (tools/phi_rank_oracle.py):
    # mono5 ranks 6,3,2,1,1 -> 3; cycle3 ranks 4,2,2 -> 1
    g_mono = syzygy_closure(mono5)
    assert phi_T_dim(g_mono) == 3
    g_cyc = syzygy_closure(cycle3)
    assert phi_T_dim(g_cyc) == 1


def test_dell_bounded_by_phi_t(mono5, cycle3):
    for alg in (mono5, cycle3):
        ctx = DellContext(alg)
        total, _ = k_dell_algebra(alg, 1, ctx=ctx)
        assert total.value <= phi_T_dim(ctx.graph())


def test_phi_values(mono5):
    ctx = DellContext(mono5)
    assert phi([projective(mono5, "2")], ctx) == 0
    assert phi([simple(mono5, "4")], ctx) == 1  # rank drops 1 -> 0 at the first step
    all_simples = [simple(mono5, v) for v in mono5.vertices()]
    assert phi(all_simples, ctx) <= phi_T_dim(ctx.graph())


def test_phi_t_requires_closed_graph(cyl9):
    g = syzygy_closure(cyl9, seeds=[("S2", simple(cyl9, "2"))], dim_cap=12)
    with pytest.raises(GraphTruncated):
        phi_T_dim(g)


# -- monomial findim ------------------------------------------------------------


def test_path_pd_table_mono5_op(mono5):
    opp = mono5.opposite()
    table = path_pd_table(opp)
    finite = {q: d for q, d in table.items() if d is not None}
    # exactly the arrows a1 and e generate projective right ideals (pd 0)
    assert sorted((q[1] for q in finite)) == [("a1",), ("e",)]
    assert all(d == 0 for d in finite.values())


def test_monomial_findim_mono5_op(mono5):
    s, fd = monomial_findim(mono5.opposite())
    assert (s, fd) == (0, 1)


def test_monomial_findim_hereditary():
    from deloop.formats import parse_algebra
    a2 = parse_algebra("algebra a2\nfield Q\nvertices 1 2\narrow a : 1 -> 2\n")
    s, fd = monomial_findim(a2)
    assert fd == 1


def test_monomial_findim_rejects_nonmonomial(local3):
    with pytest.raises(NotMonomial):
        monomial_findim(local3)


def test_huisgen_second_syzygy_structure(mono5):
    # every indecomposable summand of a second syzygy of a simple is a path ideal
    from deloop.decomp import decompose
    from deloop.invariants import _monomial_right_ideal, _nonzero_paths
    from deloop.modules import ProjSum
    regular = ProjSum(mono5, mono5.vertices())
    path_ideals = []
    for q in _nonzero_paths(mono5):
        sub = _monomial_right_ideal(mono5, regular, {q})
        path_ideals.append(sub)
    for v in mono5.vertices():
        om2 = syzygy(simple(mono5, v), 2)
        if om2.is_zero():
            continue
        for rep, _ in decompose(om2).summands:
            assert any(is_isomorphic(rep, pi) for pi in path_ideals), (v, rep)
