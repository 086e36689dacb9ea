"""Krull-Schmidt decomposition, isomorphism testing, summand peeling.

Splitting follows the classical route: compute End(M), take the radical via
the trace form (valid over Q, or GF(p) with p > dim End), hunt for an
idempotent in the semisimple quotient by factoring minimal polynomials of
sampled elements, lift it through the radical with e -> 3e^2 - 2e^3, and
recurse on image and kernel.

Isomorphism tests and summand peeling use random elements of the hom space:
the invertible (resp. split) locus is Zariski-open, so integer samples from a
growing grid hit it with overwhelming probability when it is nonempty.
Negative answers are therefore Monte Carlo and callers should report them as
such; positive answers are certified by the found map.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy

from .errors import CharTooSmall, NoSplitFound, ValidationError
from .fields import QQ, PrimeField
from . import linalg
from .linalg import Mat
from .modules import (Module, ModuleHom, hom_from_projective_basis, hom_in_span,
                      hom_space, identity_hom, image, kernel, projective,
                      radical_series_dims, socle, top, ProjSum)

DEFAULT_SEED = 11
DEFAULT_TRIALS = 48
IDEMPOTENT_BUDGET = 64


def _stable_rng(seed: int, tag: int, *mods: Module) -> random.Random:
    # str hashing is salted per process, so key material stays numeric.
    material: list[int] = [seed, tag]
    for m in mods:
        material.extend(m.dim_vector())
        for mat in m.maps.values():
            for row in mat.entries:
                for x in row:
                    material.append(hash(x))
    return random.Random(hash(tuple(material)))


def fingerprint(m: Module) -> tuple:
    """Cheap iso-invariants: dim vector, top/socle dims, radical series."""
    cache = m.algebra.cache("fingerprint")
    k = m.key()
    if k not in cache:
        t, _ = top(m)
        s, _ = socle(m)
        cache[k] = (m.dim_vector(), t.dim_vector(), s.dim_vector(), radical_series_dims(m))
    return cache[k]


def _coeff_streams(dim: int, rng: random.Random, trials: int):
    """Coefficient vectors to try: unit vectors, pair sums/differences, then random."""
    for i in range(dim):
        v = [0] * dim
        v[i] = 1
        yield v
    for i in range(dim):
        for j in range(i + 1, dim):
            for sj in (1, -1):
                v = [0] * dim
                v[i], v[j] = 1, sj
                yield v
    bound = 1
    for t in range(trials):
        if t and t % 8 == 0:
            bound = min(bound * 2, 64)
        yield [rng.randint(-bound, bound) for _ in range(dim)]


def _combine(homs: list[ModuleHom], coeffs) -> ModuleHom:
    f = homs[0].source.algebra.field
    out = None
    for h, c in zip(homs, coeffs):
        if c == 0:
            continue
        term = h.scaled(f.from_int(c))
        out = term if out is None else out.plus(term)
    if out is None:
        out = homs[0].scaled(f.zero())
    return out


def is_isomorphic(m: Module, n: Module, *, seed: int = DEFAULT_SEED,
                  trials: int = DEFAULT_TRIALS) -> bool:
    """True iff an invertible hom is found; False answers are Monte Carlo."""
    if m.algebra is not n.algebra:
        raise ValidationError("modules over different algebras")
    if m.same_content(n):
        return True
    if fingerprint(m) != fingerprint(n):
        return False
    if m.is_zero():
        return True
    homs = hom_space(m, n)
    if not homs:
        return False
    rng = _stable_rng(seed, 1, m, n)
    for coeffs in _coeff_streams(len(homs), rng, trials):
        h = _combine(homs, coeffs)
        if all(linalg.invertible(b) for b in h.blocks.values()):
            return True
    return False


def find_retraction(f: ModuleHom) -> ModuleHom | None:
    """g with f;g = id on f.source, i.e. f is a split mono."""
    from .modules import zero_hom
    if f.source.total_dim == 0:
        return zero_hom(f.target, f.source)
    back = hom_space(f.target, f.source)
    if not back:
        return None
    composed = [f.then(g) for g in back]
    coeffs = hom_in_span(identity_hom(f.source), composed)
    if coeffs is None:
        return None
    return _combine_scalars(back, coeffs)


def split_off(x: Module, y: Module, *, seed: int = DEFAULT_SEED,
              trials: int = DEFAULT_TRIALS) -> tuple[ModuleHom, ModuleHom] | None:
    """Split pair (f: x -> y, g: y -> x) with f;g = id, if one exists.

    Exact and deterministic when x is indecomposable: End(x) is then local,
    and id = sum of composites forces one basis composite f_i;g_j to be a
    unit.  For decomposable x it falls back to seeded random combinations.
    """
    if x.is_zero():
        from .modules import zero_hom
        return zero_hom(x, y), zero_hom(y, x)
    if any(x.dims[v] > y.dims[v] for v in x.algebra.vertices()):
        return None
    fwd = hom_space(x, y)
    bwd = hom_space(y, x)
    if not fwd or not bwd:
        return None
    for g in bwd:
        for f in fwd:
            u = f.then(g)
            if all(linalg.invertible(b) for b in u.blocks.values()):
                u_inv = _invert_iso(u)
                return f, g.then(u_inv)
    # decomposable x: the unit may only appear for a combination
    rng = _stable_rng(seed, 2, x, y)
    for coeffs in _coeff_streams(len(fwd), rng, trials):
        f = _combine(fwd, coeffs)
        if not f.is_injective():
            continue
        g = find_retraction(f)
        if g is not None:
            return f, g
    return None


def _invert_iso(u: ModuleHom) -> ModuleHom:
    f = u.source.algebra.field
    blocks = {}
    for v in u.source.algebra.vertices():
        inv = linalg.solve(u.blocks[v], linalg.identity(f, u.blocks[v].rows))
        if inv is None:
            raise ValidationError("not invertible")
        blocks[v] = inv
    return ModuleHom(u.target, u.source, blocks, check=False)


def peel(x: Module, y: Module, *, exact: bool = True, **kw) -> Module | None:
    """Complement of one split copy of x inside y, or None.

    Complete (not Monte Carlo) whenever x is indecomposable.
    """
    if x.is_zero():
        return y
    if any(x.dims[v] > y.dims[v] for v in x.algebra.vertices()):
        return None
    fwd = hom_space(x, y)
    bwd = hom_space(y, x)
    if not fwd or not bwd:
        return None
    for g in bwd:
        for f in fwd:
            u = f.then(g)
            if all(linalg.invertible(b) for b in u.blocks.values()):
                retraction = g.then(_invert_iso(u))
                comp, _ = kernel(retraction)
                return comp
    if exact:
        return None
    pair = split_off(x, y, **kw)
    if pair is None:
        return None
    _, g = pair
    comp, _ = kernel(g)
    return comp


def _peel_projective(v: str, y: Module) -> Module | None:
    """Complement of one split copy of the projective at v inside y.

    With the Yoneda basis of Hom(P_v, y), a composite f_i;g is invertible in
    the local ring End(P_v) iff its top coefficient is nonzero, and that
    coefficient is just an entry of g: no composites are formed at all.
    """
    from .modules import ProjSum
    alg = y.algebra
    cache = alg.cache("projsum_single")
    if v not in cache:
        cache[v] = ProjSum(alg, (v,))
    ps = cache[v]
    pv = ps.module
    if any(pv.dims[w] > y.dims[w] for w in alg.vertices()):
        return None
    _, c = ps.gen_coord(0)
    f = alg.field
    for g in hom_space(y, pv):
        block = g.blocks[v]
        for i in range(y.dims[v]):
            if not f.is_zero(block.entries[i][c]):
                images = [_std_row(f, y.dims[v], i)]
                fi = ps.hom_from_element(y, images)
                u = fi.then(g)
                u_inv = _invert_iso(u)
                retraction = g.then(u_inv)
                comp, _ = kernel(retraction)
                return comp
    return None


def _std_row(field, n: int, i: int):
    row = [field.zero()] * n
    row[i] = field.one()
    return linalg.Mat(field, 1, n, [row])


def strip_projectives(m: Module, **kw) -> tuple[Module, list[str]]:
    """Remove projective direct summands; returns (stripped, dropped vertex list)."""
    alg = m.algebra
    cache = alg.cache("strip")
    ck = m.key()
    if ck in cache:
        return cache[ck]
    dropped: list[str] = []
    cur = m
    progress = True
    while progress and not cur.is_zero():
        progress = False
        for v in alg.vertices():
            while True:
                comp = _peel_projective(v, cur)
                if comp is None:
                    break
                cur = comp
                dropped.append(v)
                progress = True
    result = (cur, dropped)
    cache[ck] = result
    return result


def is_projective(m: Module, **kw) -> bool:
    stripped, _ = strip_projectives(m, **kw)
    return stripped.is_zero()


# -- endomorphism rings -------------------------------------------------------


class EndRing:
    """End(M) with structure constants, identity, and trace-form radical."""

    def __init__(self, module: Module, basis: list[ModuleHom], mult: list[list[list]],
                 identity_coords: list, radical_coords: Mat):
        self.module = module
        self.basis = basis
        self.mult = mult  # mult[i][j] = coords of basis[i];basis[j]
        self.identity_coords = identity_coords
        self.radical_coords = radical_coords  # rows span rad(End) in coords

    @property
    def dim(self) -> int:
        return len(self.basis)

    def multiply_coords(self, a: list, b: list) -> list:
        f = self.module.algebra.field
        n = self.dim
        out = [f.zero()] * n
        for i, ca in enumerate(a):
            if f.is_zero(ca):
                continue
            for j, cb in enumerate(b):
                if f.is_zero(cb):
                    continue
                c = f.mul(ca, cb)
                row = self.mult[i][j]
                for k in range(n):
                    out[k] = f.add(out[k], f.mul(c, row[k]))
        return out

    def hom_from_coords(self, coords) -> ModuleHom:
        return _combine_scalars(self.basis, coords)


def _combine_scalars(homs: list[ModuleHom], coeffs) -> ModuleHom:
    f = homs[0].source.algebra.field
    out = None
    for h, c in zip(homs, coeffs):
        if f.is_zero(c):
            continue
        term = h.scaled(c)
        out = term if out is None else out.plus(term)
    return out if out is not None else homs[0].scaled(f.zero())


def end_ring(m: Module) -> EndRing:
    """End(M); raises CharTooSmall over GF(p) with p <= dim End (Dickson)."""
    alg = m.algebra
    cache = alg.cache("end_ring")
    ck = m.key()
    if ck in cache:
        return cache[ck]
    f = alg.field
    basis = hom_space(m, m)
    dim = len(basis)
    if isinstance(f, PrimeField) and f.p <= dim:
        raise CharTooSmall(f"GF({f.p}) with dim End = {dim}; need p > dim End")
    flat = linalg.from_rows(f, [list(h.flat()) for h in basis]) if dim else None

    composites = []
    traces = []
    for hi in basis:
        row_tr = []
        for hj in basis:
            comp = hi.then(hj)
            composites.append(list(comp.flat()))
            tr = f.zero()
            for v in alg.vertices():
                b = comp.blocks[v]
                for d in range(b.rows):
                    tr = f.add(tr, b.entries[d][d])
            row_tr.append(tr)
        traces.append(row_tr)
    if dim:
        sol = linalg.solve(flat, linalg.from_rows(f, composites))
        if sol is None:
            raise ValidationError("hom space not closed under composition")
        mult = [[list(sol.entries[i * dim + j]) for j in range(dim)] for i in range(dim)]
        idc = hom_in_span(identity_hom(m), basis)
        gram = linalg.from_rows(f, traces)
        rad = linalg.kernel_basis(gram)
    else:
        mult, idc, rad = [], [], linalg.Mat(f, 0, 0, [])
    ring = EndRing(m, basis, mult, idc, rad)
    cache[ck] = ring
    return ring


# -- idempotent search in End/rad ----------------------------------------------


def _quotient_setup(ring: EndRing):
    """Coordinates for S = End/rad: reduction against the radical row space."""
    f = ring.module.algebra.field
    n = ring.dim
    red, pivots, rk = linalg.rref(ring.radical_coords)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]

    def project(coords):
        vec = list(coords)
        for i, pc in enumerate(pivots):
            c = vec[pc]
            if not f.is_zero(c):
                vec = [f.sub(x, f.mul(c, y)) for x, y in zip(vec, red.entries[i])]
        return [vec[j] for j in free]

    def lift(scoords):
        vec = [f.zero()] * n
        for val, j in zip(scoords, free):
            vec[j] = val
        return vec

    return free, project, lift


def _minimal_polynomial(smul, s_coords, one_coords, field):
    """Monic minimal polynomial of s acting in a finite-dimensional algebra."""
    rows = [list(one_coords)]
    power = list(one_coords)
    while True:
        power = smul(power, s_coords)
        a = linalg.from_rows(field, rows)
        b = linalg.from_rows(field, [power])
        sol = linalg.solve(a, b)
        if sol is not None:
            lower = list(sol.entries[0])
            # t^k - sum_i c_i t^i
            return [field.one()] + [field.neg(c) for c in reversed(lower)]
        rows.append(list(power))


def _to_sympy_poly(coeffs, field):
    t = sympy.Symbol("t")
    if isinstance(field, PrimeField):
        return sympy.Poly([int(c) for c in coeffs], t, modulus=field.p), t
    return sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator))
                       for c in coeffs], t, domain="QQ"), t


def _from_sympy_coeffs(poly, field):
    out = []
    for c in poly.all_coeffs():
        if isinstance(field, PrimeField):
            out.append(field.from_int(int(c)))
        else:
            r = sympy.Rational(c)
            out.append(field.from_fraction(Fraction(int(r.p), int(r.q))))
    return out


def _idempotent_from_factorization(coeffs, field):
    """Split mu into coprime g, h and return the CRT idempotent poly, or None."""
    poly, t = _to_sympy_poly(coeffs, field)
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None, len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree() == poly.degree()
    g = factors[0][0] ** factors[0][1]
    h = poly.exquo(g)
    s, tt, d = g.gcdex(h)
    # s g + tt h = 1; epsilon = tt h is 1 mod g and 0 mod h
    eps = (tt * h) % poly
    return _from_sympy_coeffs(eps, field), False


def _poly_eval_coords(poly_coeffs, ring_mul, x_coords, one_coords, field):
    """Evaluate a polynomial (highest degree first) at x in coordinate algebra."""
    acc = [field.mul(poly_coeffs[0], c) for c in one_coords]
    for c in poly_coeffs[1:]:
        acc = ring_mul(acc, x_coords)
        acc = [field.add(a, field.mul(c, o)) for a, o in zip(acc, one_coords)]
    return acc


def find_idempotent(ring: EndRing, *, seed: int = DEFAULT_SEED,
                    budget: int = IDEMPOTENT_BUDGET) -> list | None:
    """Nontrivial idempotent of End(M) (lifted through the radical), or None
    when End/rad is certified to be a division algebra (M indecomposable)."""
    f = ring.module.algebra.field
    if ring.dim == 1:
        return None
    free, project, lift = _quotient_setup(ring)
    sdim = len(free)
    if sdim == 1:
        return None  # local endomorphism ring

    def smul(a, b):
        return project(ring.multiply_coords(lift(a), lift(b)))

    one_s = project(ring.identity_coords)
    # commutativity of S, from products of its basis classes
    sbasis = []
    for idx in range(sdim):
        v = [f.zero()] * sdim
        v[idx] = f.one()
        sbasis.append(v)
    commutative = all(
        smul(a, b) == smul(b, a) for i, a in enumerate(sbasis) for b in sbasis[i + 1:])

    rng = _stable_rng(seed, 3, ring.module)
    for coeffs in _coeff_streams(sdim, rng, budget):
        s = [f.zero()] * sdim
        for v, c in zip(sbasis, coeffs):
            if c:
                s = [f.add(a, f.mul(f.from_int(c), b)) for a, b in zip(s, v)]
        if all(f.is_zero(c) for c in s):
            continue
        mu = _minimal_polynomial(smul, s, one_s, f)
        eps_poly, irreducible_full = _idempotent_from_factorization(mu, f)
        if eps_poly is not None:
            eps = _poly_eval_coords(eps_poly, smul, s, one_s, f)
            if any(not f.is_zero(c) for c in eps) and eps != one_s:
                return _lift_idempotent(ring, lift(eps), project)
        elif commutative and irreducible_full and len(mu) - 1 == sdim:
            return None  # S = field: certified indecomposable
    raise NoSplitFound(
        f"no idempotent found in End/rad of dim {sdim} within budget {budget}")


def _lift_idempotent(ring: EndRing, e_coords: list, project) -> list:
    """Newton iteration e <- 3e^2 - 2e^3 until idempotent in End(M)."""
    f = ring.module.algebra.field
    e = list(e_coords)
    for _ in range(ring.dim + 6):
        e2 = ring.multiply_coords(e, e)
        if e2 == e:
            return e
        e3 = ring.multiply_coords(e2, e)
        three, two = f.from_int(3), f.from_int(2)
        e = [f.sub(f.mul(three, a), f.mul(two, b)) for a, b in zip(e2, e3)]
    raise NoSplitFound("idempotent lifting did not converge")


# -- decomposition -------------------------------------------------------------


class Decomposition:
    """Pieces with inclusions/projections; summands grouped up to isomorphism."""

    def __init__(self, module: Module, pieces: list[tuple[Module, ModuleHom, ModuleHom]],
                 seed: int):
        self.module = module
        self.pieces = pieces
        self.seed = seed
        groups: list[tuple[Module, int]] = []
        for piece, _, _ in pieces:
            for i, (rep, mult) in enumerate(groups):
                if is_isomorphic(rep, piece, seed=seed):
                    groups[i] = (rep, mult + 1)
                    break
            else:
                groups.append((piece, 1))
        self.summands = groups

    @property
    def idempotents(self) -> list[ModuleHom]:
        return [proj.then(incl) for _, incl, proj in self.pieces]

    def multiplicity_of(self, x: Module, *, seed: int | None = None) -> int:
        s = self.seed if seed is None else seed
        for rep, mult in self.summands:
            if is_isomorphic(rep, x, seed=s):
                return mult
        return 0


def decompose(m: Module, *, seed: int = DEFAULT_SEED) -> Decomposition:
    """Full Krull-Schmidt decomposition into indecomposables."""
    cache = m.algebra.cache("decompose")
    ck = (m.key(), seed)
    if ck in cache:
        return cache[ck]
    pieces = _decompose_rec(m, identity_hom(m), identity_hom(m), seed)
    result = Decomposition(m, pieces, seed)
    cache[ck] = result
    return result


def _decompose_rec(x: Module, incl: ModuleHom, proj: ModuleHom, seed: int):
    if x.is_zero():
        return []
    ring = end_ring(x)
    e_coords = find_idempotent(ring, seed=seed)
    if e_coords is None:
        return [(x, incl, proj)]
    e = ring.hom_from_coords(e_coords)
    img, img_incl = image(e)
    ker, ker_incl = kernel(e)
    if img.is_zero() or ker.is_zero():
        raise NoSplitFound("lifted idempotent was trivial")
    img_proj = _corestriction(e, img_incl)
    ker_proj = _complement_projection(e, ker_incl)
    out = []
    out.extend(_decompose_rec(img, img_incl.then(incl), proj.then(img_proj), seed))
    out.extend(_decompose_rec(ker, ker_incl.then(incl), proj.then(ker_proj), seed))
    return out


def _corestriction(e: ModuleHom, incl: ModuleHom) -> ModuleHom:
    """m -> im(e) with incl;out = id (uses that e restricted to im(e) is id)."""
    blocks = {}
    for v in e.source.algebra.vertices():
        sol = linalg.solve(incl.blocks[v], e.blocks[v])
        if sol is None:
            raise ValidationError("idempotent image rows left their own span")
        blocks[v] = sol
    return ModuleHom(e.source, incl.source, blocks, check=False)


def _complement_projection(e: ModuleHom, ker_incl: ModuleHom) -> ModuleHom:
    """m -> ker(e) along im(e): project with 1 - e then corestrict."""
    one_minus = identity_hom(e.source).plus(e.negated())
    blocks = {}
    for v in e.source.algebra.vertices():
        sol = linalg.solve(ker_incl.blocks[v], one_minus.blocks[v])
        if sol is None:
            raise ValidationError("complement projection failed")
        blocks[v] = sol
    return ModuleHom(e.source, ker_incl.source, blocks, check=False)


def is_summand(x: Module, y: Module, *, seed: int = DEFAULT_SEED) -> bool:
    """True iff every indecomposable of x occurs in y with enough multiplicity.

    Implemented by peeling split copies off y, so y is never fully decomposed;
    negative answers are Monte Carlo like is_isomorphic.
    """
    if x.is_zero():
        return True
    if x.algebra is not y.algebra:
        raise ValidationError("modules over different algebras")
    dec = decompose(x, seed=seed)
    remaining = y
    for piece, _, _ in dec.pieces:
        comp = peel(piece, remaining, seed=seed)
        if comp is None:
            return False
        remaining = comp
    return True
