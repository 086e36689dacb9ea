"""Projective covers, syzygies, Ext dimensions, transpose, and the syzygy
left adjoint on the stable category.

Syzygy and everything built on it work modulo projectives: projective direct
summands are stripped from kernels.  Minimal resolutions used for Ext keep
honest kernels and are never stripped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import PathAlgebra, Word
from .decomp import strip_projectives
from .errors import NotExact, ValidationError
from . import linalg
from .linalg import Mat
from .modules import (Module, ModuleHom, ProjSum, direct_sum, dual, hom_space,
                      hom_from_projective_basis, hom_in_span, identity_hom, image,
                      kernel, projective_cover, quotient, radical_rows, socle, top,
                      zero_hom, zero_module)


@dataclass(frozen=True)
class CapExceeded:
    """Honest 'not decided below this cap' outcome; never conflated with infinity."""

    cap: int

    def __repr__(self):
        return f"CapExceeded({self.cap})"


@dataclass
class ShortExact:
    """0 -> A -f-> B -g-> C -> 0, validated on construction."""

    f: ModuleHom
    g: ModuleHom

    def __post_init__(self):
        check_exact_sequence([self.f, self.g])

    @property
    def sub(self) -> Module:
        return self.f.source

    @property
    def mid(self) -> Module:
        return self.f.target

    @property
    def quot(self) -> Module:
        return self.g.target


def check_exact_sequence(maps: list[ModuleHom]):
    """Exactness of 0 -> M_n -> ... -> M_0 -> 0 given the n maps in order.

    Vertexwise rank conditions: first map injective, last surjective, and
    rank(f_i) + rank(f_{i+1}) = dim(middle) at each joint with zero composites.
    """
    if not maps:
        return
    if not maps[0].is_injective():
        raise NotExact(0, "first map not injective")
    if not maps[-1].is_surjective():
        raise NotExact(len(maps), "last map not surjective")
    for i in range(len(maps) - 1):
        f, g = maps[i], maps[i + 1]
        if f.target is not g.source and not f.target.same_content(g.source):
            raise ValidationError("maps do not compose")
        if not f.then(g).is_zero():
            raise NotExact(i + 1, "composite nonzero")
        mid = f.target
        for v in mid.algebra.vertices():
            if linalg.rank(f.blocks[v]) + linalg.rank(g.blocks[v]) != mid.dims[v]:
                raise NotExact(i + 1, f"rank defect at vertex {v}")


def syzygy_step(m: Module) -> tuple[Module, ModuleHom, ProjSum, ModuleHom]:
    """(ker eps, inclusion, cover, eps) for the minimal cover of m."""
    ps, eps = projective_cover(m)
    k, incl = kernel(eps)
    return k, incl, ps, eps


def syzygy(m: Module, n: int = 1, *, seed: int | None = None) -> Module:
    """n-th minimal syzygy with projective direct summands dropped.

    Iterated kernels of minimal covers never accumulate projective summands
    (a projective summand of a kernel contributes nothing to the next
    kernel), so only the final module is stripped.
    """
    if n < 0:
        raise ValidationError("syzygy order must be >= 0")
    kw = {} if seed is None else {"seed": seed}
    cur = m
    for _ in range(n):
        if cur.is_zero():
            break
        cur = _raw_syzygy(cur)
    out, _ = strip_projectives(cur, **kw)
    return out


def _raw_syzygy(m: Module) -> Module:
    """Kernel of the minimal cover, cached, projective summands kept."""
    cache = m.algebra.cache("raw_syzygy")
    ck = m.key()
    if ck in cache:
        return cache[ck]
    k, _, _, _ = syzygy_step(m)
    cache[ck] = k
    return k


def cosyzygy(m: Module, n: int = 1) -> Module:
    """n-th cosyzygy via duality: D(syzygy(D m, n)) with injectives dropped."""
    return dual(syzygy(dual(m), n))


def injective_envelope(m: Module) -> tuple[Module, ModuleHom]:
    """Envelope m -> I(soc m), built as the dual of the cover of D(m)."""
    from .modules import dual_hom
    dm = dual(m)
    _, eps = projective_cover(dm)
    emb = dual_hom(eps)
    env = emb.target
    if emb.source.algebra is not m.algebra:
        raise ValidationError("double-dual identification failed")
    # dual_hom lands on D(D(m)), which has the same underlying data as m
    emb = ModuleHom(m, env, emb.blocks, check=False)
    return env, emb


def pd(m: Module, cap: int = 20) -> int | CapExceeded:
    """Projective dimension, decided up to cap."""
    cur, _ = strip_projectives(m)
    for n in range(cap + 1):
        if cur.is_zero():
            return n
        cur = syzygy(cur, 1)
    return CapExceeded(cap)


def injective_dim(m: Module, cap: int = 20) -> int | CapExceeded:
    """Injective dimension = projective dimension of the dual over the opposite."""
    return pd(dual(m), cap)


def minimal_resolution(m: Module, length: int) -> tuple[list[ProjSum], list[ModuleHom]]:
    """Covers P_0..P_length and maps d_0 = eps: P_0 -> m, d_i: P_i -> P_{i-1}.

    Kernels are honest submodules; nothing is stripped.
    """
    cache = m.algebra.cache("resolution")
    ck = m.key()
    covers, maps, kernels = cache.get(ck, ([], [], []))
    while len(covers) <= length:
        if not covers:
            ps, eps = projective_cover(m)
            covers, maps = [ps], [eps]
            k, incl = kernel(eps)
            kernels = [(k, incl)]
        else:
            k, incl = kernels[-1]
            ps, eps = projective_cover(k)
            covers.append(ps)
            maps.append(eps.then(incl))
            k2, incl2 = kernel(eps)
            kernels.append((k2, incl2))
        cache[ck] = (covers, maps, kernels)
    return covers[:length + 1], maps[:length + 1]


def ext_dim(m: Module, x: Module, n: int) -> int:
    """dim Ext^n(m, x) from a minimal projective resolution of m."""
    if n < 0:
        raise ValidationError("ext degree must be >= 0")
    covers, maps = minimal_resolution(m, n + 1)
    hom_bases = [hom_from_projective_basis(ps, x) for ps in covers]

    def delta_rank(i: int) -> int:
        # rank of Hom(P_i, x) -> Hom(P_{i+1}, x), phi -> d_{i+1};phi
        src = hom_bases[i]
        tgt = hom_bases[i + 1]
        if not src or not tgt:
            return 0
        rows = []
        for phi in src:
            composed = maps[i + 1].then(phi)
            rows.append(list(composed.flat()))
        return linalg.rank(linalg.from_rows(x.algebra.field, rows))

    dim_cn = len(hom_bases[n])
    rank_out = delta_rank(n)
    rank_in = delta_rank(n - 1) if n >= 1 else 0
    return dim_cn - rank_out - rank_in


def stable_hom_dim(m: Module, x: Module) -> int:
    """dim Hom(m, x) minus the maps factoring through the cover of x.

    A map factors through some projective iff it factors through the cover
    of x, so the factoring maps are the image of Hom(m, P_x) -> Hom(m, x).
    """
    homs = hom_space(m, x)
    if not homs:
        return 0
    ps, eps = projective_cover(x)
    through = hom_space(m, ps.module)
    if not through:
        return len(homs)
    f = m.algebra.field
    proj_rows = [list(h.then(eps).flat()) for h in through]
    return len(homs) - linalg.rank(linalg.from_rows(f, proj_rows))


# -- transpose and the left adjoint ------------------------------------------


def _hom_to_alg_matrix(h: ModuleHom, src: ProjSum, tgt: ProjSum) -> list[list[dict]]:
    """Matrix over the algebra for a map between canonical projective sums.

    Entry [i][j] is an element of e_{w_i} A e_{v_j} (written as word->scalar)
    with v_j = src generator j, w_i = tgt generator i; h acts as left
    multiplication by this matrix on column vectors of the generators.
    """
    alg = src.algebra
    f = alg.field
    out = []
    for i in range(len(tgt.gen_vertices)):
        out.append([dict() for _ in range(len(src.gen_vertices))])
    for j, v in enumerate(src.gen_vertices):
        _, c = src.gen_coord(j)
        row = h.blocks[v].entries[c]
        for (i, word), coeff in zip(tgt.basis_at[v], row):
            if not f.is_zero(coeff):
                out[i][j][word] = coeff
    return out


def _reverse_word(alg_op: PathAlgebra, w: Word) -> Word:
    """A word u -> v over A becomes a word v -> u over A^op."""
    src, arrows = w
    if not arrows:
        return (src, ())
    quiver = alg_op.quiver
    rev = tuple(reversed(arrows))
    return (quiver.arrow(rev[0]).source, rev)


def transpose(m: Module, *, seed: int | None = None) -> Module:
    """Auslander-Bridger transpose over the opposite algebra.

    Projective summands of m are stripped first (the minimal presentation
    requirement); the result is the cokernel of the dualized presentation.
    """
    alg = m.algebra
    cache = alg.cache("transpose")
    kw = {} if seed is None else {"seed": seed}
    mm, _ = strip_projectives(m, **kw)
    ck = mm.key()
    if ck in cache:
        return cache[ck]
    opp = alg.opposite()
    if mm.is_zero():
        result = zero_module(opp)
        cache[ck] = result
        return result
    k, incl, p0, eps = syzygy_step(mm)
    p1, eps1 = projective_cover(k)
    d1 = eps1.then(incl)  # P_1 -> P_0
    amat = _hom_to_alg_matrix(d1, p1, p0)
    # dual map over A^op: Q_0 = sum e_{w_i} A^op -> Q_1 = sum e_{v_j} A^op,
    # left multiplication by the transposed matrix with reversed words.
    q0 = ProjSum(opp, p0.gen_vertices)
    q1 = ProjSum(opp, p1.gen_vertices)
    f = alg.field
    images = []
    for i in range(len(p0.gen_vertices)):
        w_i = p0.gen_vertices[i]
        img = linalg.zeros(f, 1, q1.module.dims[w_i])
        rows = [list(img.entries[0])]
        for j in range(len(p1.gen_vertices)):
            elem = amat[i][j]
            for word, coeff in elem.items():
                rw = _reverse_word(opp, word)
                for w2, c2 in opp.reduce_word(rw).items():
                    idx = q1.coord[w_i][(j, w2)]
                    rows[0][idx] = f.add(rows[0][idx], f.mul(coeff, c2))
        images.append(Mat(f, 1, q1.module.dims[w_i], rows))
    dstar = q0.hom_from_element(q1.module, images)
    tr, _ = cokernel_of(dstar)
    cache[ck] = tr
    return tr


def cokernel_of(h: ModuleHom) -> tuple[Module, ModuleHom]:
    from .modules import cokernel
    return cokernel(h)


def mho(m: Module, *, seed: int | None = None) -> Module:
    """Left adjoint of the syzygy functor on the stable category: Tr Omega Tr."""
    kw = {"seed": seed} if seed is not None else {}
    t = transpose(m, **kw)
    ts = syzygy(t, 1, **kw)
    back = transpose(ts, **kw)
    if back.algebra is not m.algebra:
        raise ValidationError("double-opposite identification failed in mho")
    out, _ = strip_projectives(back, **kw)
    return out


def mho_iter(m: Module, n: int, **kw) -> Module:
    cur = m
    for _ in range(n):
        cur = mho(cur, **kw)
    return cur


# -- exact sequence surgery ----------------------------------------------------


def lift_through_epi(f: ModuleHom, g: ModuleHom) -> ModuleHom | None:
    """h with h;g = f, for g epi and f from a projective (or any liftable f)."""
    if f.target is not g.target and not f.target.same_content(g.target):
        raise ValidationError("lift targets differ")
    basis = hom_space(f.source, g.source)
    if not basis:
        return zero_hom(f.source, g.source) if f.is_zero() else None
    composed = [h.then(g) for h in basis]
    coeffs = hom_in_span(f, composed)
    if coeffs is None:
        return None
    out = None
    fld = f.source.algebra.field
    for h, c in zip(basis, coeffs):
        if fld.is_zero(c):
            continue
        term = h.scaled(c)
        out = term if out is None else out.plus(term)
    return out if out is not None else zero_hom(f.source, g.source)


def factor_through_mono(f: ModuleHom, i: ModuleHom) -> ModuleHom:
    """Unique h with h;i = f when im(f) lies inside im(i) and i is mono."""
    blocks = {}
    for v in f.source.algebra.vertices():
        sol = linalg.solve(i.blocks[v], f.blocks[v])
        if sol is None:
            raise ValidationError(f"image not contained in mono image at vertex {v}")
        blocks[v] = sol
    return ModuleHom(f.source, i.source, blocks, check=True)


def rotate_ses(s: ShortExact) -> ShortExact:
    """Rotate 0 -> A -> B -> C -> 0 into 0 -> Omega C -> A + P_C -> B -> 0.

    The maps are f'(x) = (f^{-1}(gbar(i(x))), i(x)) and g'(a, p) = f(a) - gbar(p),
    where gbar lifts the cover of C through g.
    """
    a, b, c = s.sub, s.mid, s.quot
    ps, eps = projective_cover(c)
    gbar = lift_through_epi(eps, s.g)
    if gbar is None:
        raise ValidationError("cover did not lift through an epi")
    omega_c, i_incl = kernel(eps)
    # fbar = f^{-1} . (i;gbar): lands in ker g = im f, and f is mono
    ig = i_incl.then(gbar)
    fbar = factor_through_mono(ig, s.f)
    total, incls, projs = direct_sum([a, ps.module])
    f_prime = _pair_into_sum(fbar, i_incl, incls)
    g_prime = _sum_out(
        [s.f, gbar.negated()], projs, b)
    out = ShortExact(f_prime, g_prime)
    return out


def _pair_into_sum(h1: ModuleHom, h2: ModuleHom, incls: list[ModuleHom]) -> ModuleHom:
    return h1.then(incls[0]).plus(h2.then(incls[1]))


def _sum_out(maps: list[ModuleHom], projs: list[ModuleHom], target: Module) -> ModuleHom:
    out = None
    for pr, h in zip(projs, maps):
        term = pr.then(h)
        out = term if out is None else out.plus(term)
    return out


def horseshoe(s: ShortExact) -> ShortExact:
    """0 -> Omega A -> X -> Omega C -> 0 with X iso to Omega B plus projectives.

    Built from the covers of A and C: P_A + P_C covers B via (eps_A;f, lift of
    eps_C through g), and the kernels form the rotated sequence.
    """
    a, b, c = s.sub, s.mid, s.quot
    pa, eps_a = projective_cover(a)
    pc, eps_c = projective_cover(c)
    lift_c = lift_through_epi(eps_c, s.g)
    if lift_c is None:
        raise ValidationError("horseshoe lift failed")
    total, incls, projs = direct_sum([pa.module, pc.module])
    phi = _sum_out([eps_a.then(s.f), lift_c], projs, b)
    if not phi.is_surjective():
        raise ValidationError("horseshoe cover not surjective")
    x, x_incl = kernel(phi)
    ka, ka_incl = kernel(eps_a)
    kc, kc_incl = kernel(eps_c)
    # Omega A -> X: (omega_a -> P_A -> total) lands in ker phi
    into_total = ka_incl.then(incls[0])
    left = factor_through_mono(into_total, x_incl)
    # X -> Omega C: restrict the projection to P_C; lands in ker eps_C
    to_pc = x_incl.then(projs[1])
    right = factor_through_mono(to_pc, kc_incl)
    return ShortExact(left, right)
