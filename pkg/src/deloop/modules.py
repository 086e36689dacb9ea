"""Finitely generated right modules over a bound quiver algebra.

A module assigns a vector space to each vertex and a matrix to each arrow;
row vectors act on the right, so an arrow a: i -> j gives a dims(i) x dims(j)
matrix.  Every constructed module is checked against the algebra's relations.
"""

from __future__ import annotations

from .algebra import PathAlgebra, Word
from .errors import ValidationError
from . import linalg
from .linalg import Mat


class Module:
    """Quiver representation of a PathAlgebra; immutable after construction."""

    def __init__(self, algebra: PathAlgebra, dims: dict[str, int],
                 maps: dict[str, Mat] | None = None, *, check: bool = True, name: str = ""):
        self.algebra = algebra
        self.dims = {v: int(dims.get(v, 0)) for v in algebra.vertices()}
        self.name = name
        f = algebra.field
        self.maps: dict[str, Mat] = {}
        maps = maps or {}
        for a in algebra.quiver.arrows:
            m = maps.get(a.name)
            want = (self.dims[a.source], self.dims[a.target])
            if m is None:
                m = linalg.zeros(f, *want)
            if m.shape != want:
                raise ValidationError(
                    f"map for arrow {a.name} has shape {m.shape}, expected {want}")
            self.maps[a.name] = m
        if check:
            self._check_relations()
        self._key = None

    # -- basics -------------------------------------------------------------

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.algebra.vertices())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def key(self):
        if self._key is None:
            self._key = (self.dim_vector(),
                         tuple(self.maps[a.name].entries for a in self.algebra.quiver.arrows))
        return self._key

    def same_content(self, other: Module) -> bool:
        return self.algebra is other.algebra and self.key() == other.key()

    def path_matrix(self, word: Word) -> Mat:
        """Action of a path (source, arrow names) as a matrix M_src -> M_tgt."""
        v, arrows = word
        m = linalg.identity(self.algebra.field, self.dims[v])
        for name in arrows:
            m = linalg.mul(m, self.maps[name])
        return m

    def element_matrix(self, x: dict[Word, object], source: str, target: str) -> Mat:
        """Action of an algebra element restricted to basis words source->target."""
        f = self.algebra.field
        out = linalg.zeros(f, self.dims[source], self.dims[target])
        for w, c in x.items():
            if w[0] != source or self.algebra.word_target(w) != target:
                continue
            out = linalg.add(out, linalg.scale(c, self.path_matrix(w)))
        return out

    def _check_relations(self):
        f = self.algebra.field
        for r in self.algebra.relations:
            _, p0 = r.terms[0]
            s, t = _endpoints(self.algebra, p0)
            acc = linalg.zeros(f, self.dims[s], self.dims[t])
            for c, p in r.terms:
                acc = linalg.add(acc, linalg.scale(f.from_fraction(c), self.path_matrix((s, tuple(p)))))
            if not acc.is_zero():
                pretty = " + ".join(f"{c} {'*'.join(p)}" for c, p in r.terms)
                raise ValidationError(f"module violates relation {pretty}")

    def __repr__(self):
        dims = " ".join(f"{v}:{self.dims[v]}" for v in self.algebra.vertices() if self.dims[v])
        return f"Module({self.name or 'anon'}; {dims or '0'})"


def _endpoints(algebra: PathAlgebra, path) -> tuple[str, str]:
    a0 = algebra.quiver.arrow(path[0])
    v, at = a0.source, a0.target
    for name in path[1:]:
        at = algebra.quiver.arrow(name).target
    return v, at


class ModuleHom:
    """Vertex-indexed family of matrices intertwining the arrow actions."""

    def __init__(self, source: Module, target: Module, blocks: dict[str, Mat],
                 *, check: bool = True):
        self.source = source
        self.target = target
        alg = source.algebra
        f = alg.field
        self.blocks: dict[str, Mat] = {}
        for v in alg.vertices():
            b = blocks.get(v)
            want = (source.dims[v], target.dims[v])
            if b is None:
                b = linalg.zeros(f, *want)
            if b.shape != want:
                raise ValidationError(f"hom block at {v} has shape {b.shape}, expected {want}")
            self.blocks[v] = b
        if check:
            self._check_intertwining()

    def _check_intertwining(self):
        for a in self.source.algebra.quiver.arrows:
            lhs = linalg.mul(self.source.maps[a.name], self.blocks[a.target])
            rhs = linalg.mul(self.blocks[a.source], self.target.maps[a.name])
            if lhs != rhs:
                raise ValidationError(f"hom fails to intertwine arrow {a.name}")

    def then(self, other: ModuleHom) -> ModuleHom:
        """Composite: apply self, then other."""
        if other.source is not self.target and not other.source.same_content(self.target):
            raise ValidationError("composition mismatch")
        return ModuleHom(self.source, other.target,
                         {v: linalg.mul(self.blocks[v], other.blocks[v])
                          for v in self.source.algebra.vertices()}, check=False)

    def plus(self, other: ModuleHom) -> ModuleHom:
        return ModuleHom(self.source, self.target,
                         {v: linalg.add(self.blocks[v], other.blocks[v])
                          for v in self.source.algebra.vertices()}, check=False)

    def scaled(self, c) -> ModuleHom:
        return ModuleHom(self.source, self.target,
                         {v: linalg.scale(c, self.blocks[v])
                          for v in self.source.algebra.vertices()}, check=False)

    def negated(self) -> ModuleHom:
        return self.scaled(self.source.algebra.field.neg(self.source.algebra.field.one()))

    def rank(self) -> int:
        return sum(linalg.rank(b) for b in self.blocks.values())

    def is_injective(self) -> bool:
        return self.rank() == self.source.total_dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.total_dim

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def flat(self) -> tuple:
        return tuple(x for v in self.source.algebra.vertices()
                     for r in self.blocks[v].entries for x in r)

    def __repr__(self):
        return f"ModuleHom({self.source!r} -> {self.target!r})"


def identity_hom(m: Module) -> ModuleHom:
    f = m.algebra.field
    return ModuleHom(m, m, {v: linalg.identity(f, m.dims[v]) for v in m.algebra.vertices()},
                     check=False)


def zero_hom(m: Module, n: Module) -> ModuleHom:
    return ModuleHom(m, n, {}, check=False)


def zero_module(algebra: PathAlgebra) -> Module:
    return Module(algebra, {}, check=False, name="0")


def simple(algebra: PathAlgebra, v: str) -> Module:
    """One-dimensional module at v, all arrows acting by zero."""
    if v not in algebra.vertices():
        raise ValidationError(f"unknown vertex {v!r}")
    return Module(algebra, {v: 1}, check=False, name=f"S{v}")


class ProjSum:
    """Direct sum of indecomposable projectives with its canonical path basis.

    Coordinates at vertex w are indexed by pairs (summand j, basis word
    from gen_vertices[j] to w), in a fixed order.
    """

    def __init__(self, algebra: PathAlgebra, gen_vertices: tuple[str, ...]):
        self.algebra = algebra
        self.gen_vertices = tuple(gen_vertices)
        index: dict[str, list[tuple[int, Word]]] = {w: [] for w in algebra.vertices()}
        for j, v in enumerate(self.gen_vertices):
            for word in algebra.basis_from(v):
                index[algebra.word_target(word)].append((j, word))
        self.basis_at = {w: tuple(lst) for w, lst in index.items()}
        self.coord = {w: {jw: i for i, jw in enumerate(lst)} for w, lst in self.basis_at.items()}
        f = algebra.field
        dims = {w: len(self.basis_at[w]) for w in algebra.vertices()}
        maps: dict[str, Mat] = {}
        for a in algebra.quiver.arrows:
            rows = []
            for (j, word) in self.basis_at[a.source]:
                row = [f.zero()] * dims[a.target]
                prod = algebra.multiply_words(word, (a.source, (a.name,)))
                for w2, c in prod.items():
                    row[self.coord[a.target][(j, w2)]] = c
                rows.append(row)
            maps[a.name] = Mat(f, dims[a.source], dims[a.target], rows)
        self.module = Module(algebra, dims, maps, check=False,
                             name="P(" + "+".join(self.gen_vertices) + ")")

    def gen_coord(self, j: int) -> tuple[str, int]:
        """Vertex and coordinate of the j-th generator (its trivial path)."""
        v = self.gen_vertices[j]
        return v, self.coord[v][(j, self.algebra.unit_word(v))]

    def hom_from_element(self, target: Module, images: list[Mat]) -> ModuleHom:
        """Hom determined by generator images; images[j] is a 1 x dims(target, v_j) row.

        This is the projective universal property, so no solving is needed.
        The generator rows are pushed through the arrows word by word, with
        shared prefixes computed once.
        """
        alg = self.algebra
        f = alg.field
        # pushed[(j, word)] = images[j] pushed along word; shorter words first
        # so shared prefixes are folded once (fall back when a prefix is not
        # itself a basis word).
        pairs = [(j, word) for w in alg.vertices() for (j, word) in self.basis_at[w]]
        pairs.sort(key=lambda jw: len(jw[1][1]))
        pushed: dict[tuple[int, Word], Mat] = {}
        for (j, word) in pairs:
            src, arrows = word
            if not arrows:
                pushed[(j, word)] = images[j]
                continue
            prefix = (src, arrows[:-1])
            if (j, prefix) in pushed:
                pushed[(j, word)] = linalg.mul(pushed[(j, prefix)],
                                               target.maps[arrows[-1]])
            else:
                row = images[j]
                for name in arrows:
                    row = linalg.mul(row, target.maps[name])
                pushed[(j, word)] = row
        blocks = {}
        for w in alg.vertices():
            rows = [pushed[(j, word)].entries[0] for (j, word) in self.basis_at[w]]
            blocks[w] = Mat(f, len(rows), target.dims[w], rows)
        return ModuleHom(self.module, target, blocks, check=False)


def projective(algebra: PathAlgebra, v: str) -> Module:
    if v not in algebra.vertices():
        raise ValidationError(f"unknown vertex {v!r}")
    mod = ProjSum(algebra, (v,)).module
    mod.name = f"P{v}"
    return mod


def dual(m: Module) -> Module:
    """Standard K-dual as a module over the opposite algebra."""
    opp = m.algebra.opposite()
    maps = {a.name: linalg.transpose(m.maps[a.name]) for a in m.algebra.quiver.arrows}
    return Module(opp, dict(m.dims), maps, check=False,
                  name=f"D({m.name})" if m.name else "")


def dual_hom(h: ModuleHom) -> ModuleHom:
    """Contravariant dual: D(target) -> D(source) over the opposite algebra."""
    return ModuleHom(dual(h.target), dual(h.source),
                     {v: linalg.transpose(b) for v, b in h.blocks.items()}, check=False)


def injective(algebra: PathAlgebra, v: str) -> Module:
    """Indecomposable injective at v: the dual of the opposite projective."""
    mod = dual(projective(algebra.opposite(), v))
    if mod.algebra is not algebra:
        raise ValidationError("opposite-of-opposite identification failed")
    mod.name = f"I{v}"
    return mod


def direct_sum(mods: list[Module]) -> tuple[Module, list[ModuleHom], list[ModuleHom]]:
    """Direct sum with canonical inclusions and projections."""
    if not mods:
        raise ValidationError("empty direct sum needs an algebra; use zero_module")
    alg = mods[0].algebra
    f = alg.field
    dims = {v: sum(m.dims[v] for m in mods) for v in alg.vertices()}
    maps = {}
    for a in alg.quiver.arrows:
        rows = []
        for mi, m in enumerate(mods):
            for r in m.maps[a.name].entries:
                row = []
                for mj, n in enumerate(mods):
                    if mi == mj:
                        row.extend(r)
                    else:
                        row.extend([f.zero()] * n.dims[a.target])
                rows.append(row)
        maps[a.name] = Mat(f, dims[a.source], dims[a.target], rows)
    total = Module(alg, dims, maps, check=False, name="+".join(m.name or "?" for m in mods))
    incls, projs = [], []
    for mi, m in enumerate(mods):
        inc_blocks, prj_blocks = {}, {}
        for v in alg.vertices():
            before = sum(n.dims[v] for n in mods[:mi])
            inc = linalg.zeros(f, m.dims[v], dims[v])
            rows = [list(r) for r in inc.entries]
            for i in range(m.dims[v]):
                rows[i][before + i] = f.one()
            inc_blocks[v] = Mat(f, m.dims[v], dims[v], rows)
            prj_blocks[v] = linalg.transpose(inc_blocks[v])
        incls.append(ModuleHom(m, total, inc_blocks, check=False))
        projs.append(ModuleHom(total, m, prj_blocks, check=False))
    return total, incls, projs


def submodule(m: Module, rows: dict[str, Mat]) -> tuple[Module, ModuleHom]:
    """Submodule spanned by the given rows per vertex (must be arrow-closed)."""
    alg = m.algebra
    f = alg.field
    basis = {v: linalg.row_space_basis(rows.get(v, linalg.zeros(f, 0, m.dims[v])))
             for v in alg.vertices()}
    dims = {v: basis[v].rows for v in alg.vertices()}
    maps = {}
    for a in alg.quiver.arrows:
        moved = linalg.mul(basis[a.source], m.maps[a.name])
        sol = linalg.solve(basis[a.target], moved)
        if sol is None:
            raise ValidationError(f"rows are not closed under arrow {a.name}")
        maps[a.name] = sol
    sub = Module(alg, dims, maps, check=False)
    incl = ModuleHom(sub, m, basis, check=False)
    return sub, incl


def quotient(m: Module, rows: dict[str, Mat]) -> tuple[Module, ModuleHom]:
    """Quotient of m by the submodule spanned by rows; returns (quot, projection)."""
    alg = m.algebra
    f = alg.field
    reduced: dict[str, Mat] = {}
    pivots: dict[str, tuple[int, ...]] = {}
    for v in alg.vertices():
        r = rows.get(v, linalg.zeros(f, 0, m.dims[v]))
        red, piv, rk = linalg.rref(r)
        reduced[v] = Mat(f, rk, m.dims[v], red.entries[:rk])
        pivots[v] = piv
    free = {v: [j for j in range(m.dims[v]) if j not in pivots[v]] for v in alg.vertices()}
    dims = {v: len(free[v]) for v in alg.vertices()}

    proj_blocks: dict[str, Mat] = {}
    for v in alg.vertices():
        cols = dims[v]
        out = []
        for i in range(m.dims[v]):
            vec = [f.zero()] * m.dims[v]
            vec[i] = f.one()
            for k, pc in enumerate(pivots[v]):
                c = vec[pc]
                if not f.is_zero(c):
                    vec = [f.sub(x, f.mul(c, y)) for x, y in zip(vec, reduced[v].entries[k])]
            out.append([vec[j] for j in free[v]])
        proj_blocks[v] = Mat(f, m.dims[v], cols, out)

    maps = {}
    for a in alg.quiver.arrows:
        rows_out = []
        for idx in free[a.source]:
            vec = m.maps[a.name].entries[idx]
            moved = Mat(f, 1, m.dims[a.target], [vec])
            rows_out.append(linalg.mul(moved, proj_blocks[a.target]).entries[0])
        maps[a.name] = Mat(f, dims[a.source], dims[a.target], rows_out)
    quot = Module(alg, dims, maps, check=False)
    proj = ModuleHom(m, quot, proj_blocks, check=False)
    return quot, proj


def kernel(h: ModuleHom) -> tuple[Module, ModuleHom]:
    rows = {v: linalg.kernel_basis(h.blocks[v]) for v in h.source.algebra.vertices()}
    return submodule(h.source, rows)


def image(h: ModuleHom) -> tuple[Module, ModuleHom]:
    rows = {v: linalg.row_space_basis(h.blocks[v]) for v in h.source.algebra.vertices()}
    return submodule(h.target, rows)


def cokernel(h: ModuleHom) -> tuple[Module, ModuleHom]:
    rows = {v: linalg.row_space_basis(h.blocks[v]) for v in h.source.algebra.vertices()}
    return quotient(h.target, rows)


def generated_submodule(m: Module, seeds: dict[str, Mat]) -> tuple[Module, ModuleHom]:
    """Smallest submodule containing the given rows: close under all arrows."""
    alg = m.algebra
    f = alg.field
    spans = {v: linalg.row_space_basis(seeds.get(v, linalg.zeros(f, 0, m.dims[v])))
             for v in alg.vertices()}
    changed = True
    while changed:
        changed = False
        for a in alg.quiver.arrows:
            moved = linalg.mul(spans[a.source], m.maps[a.name])
            combined = linalg.sum_row_spaces(f, m.dims[a.target], [spans[a.target], moved])
            if combined.rows != spans[a.target].rows:
                spans[a.target] = combined
                changed = True
    return submodule(m, spans)


def radical_rows(m: Module) -> dict[str, Mat]:
    alg = m.algebra
    f = alg.field
    return {v: linalg.sum_row_spaces(
        f, m.dims[v], [linalg.mul(linalg.identity(f, m.dims[a.source]), m.maps[a.name])
                       for a in alg.quiver.arrows_into(v)])
        for v in alg.vertices()}


def radical(m: Module) -> tuple[Module, ModuleHom]:
    return submodule(m, radical_rows(m))


def top(m: Module) -> tuple[Module, ModuleHom]:
    """Semisimple quotient m / rad(m), with the canonical projection."""
    return quotient(m, radical_rows(m))


def socle(m: Module) -> tuple[Module, ModuleHom]:
    """Largest semisimple submodule: the annihilator of all arrows."""
    alg = m.algebra
    f = alg.field
    rows = {}
    for v in alg.vertices():
        outs = alg.quiver.arrows_from(v)
        if not outs:
            rows[v] = linalg.identity(f, m.dims[v])
            continue
        stacked = m.maps[outs[0].name]
        for a in outs[1:]:
            stacked = linalg.hstack(stacked, m.maps[a.name])
        rows[v] = linalg.kernel_basis(stacked)
    return submodule(m, rows)


def radical_series_dims(m: Module) -> tuple[int, ...]:
    dims = [m.total_dim]
    cur = m
    while cur.total_dim:
        cur, _ = radical(cur)
        dims.append(cur.total_dim)
        if len(dims) > m.total_dim + 2:
            raise ValidationError("radical series does not terminate")
    return tuple(dims)


def projective_cover(m: Module) -> tuple[ProjSum, ModuleHom]:
    """Cover P(top m) -> m; the kernel sits inside rad P by construction."""
    alg = m.algebra
    cache = alg.cache("cover")
    ck = m.key()
    if ck in cache:
        return cache[ck]
    f = alg.field
    t, proj = top(m)
    gen_vertices = []
    images = []
    for v in alg.vertices():
        for i in range(t.dims[v]):
            unit = [f.zero()] * t.dims[v]
            unit[i] = f.one()
            lift = linalg.solve(proj.blocks[v], Mat(f, 1, t.dims[v], [unit]))
            if lift is None:
                raise ValidationError("top projection is not surjective")
            gen_vertices.append(v)
            images.append(lift)
    ps = ProjSum(alg, tuple(gen_vertices))
    eps = ps.hom_from_element(m, images)
    if not eps.is_surjective():
        raise ValidationError("projective cover map not surjective")
    cache[ck] = (ps, eps)
    return ps, eps


def _cover_section(m: Module) -> dict[str, Mat]:
    """Per-vertex linear (not module) section of the cover map eps."""
    cache = m.algebra.cache("cover_section")
    ck = m.key()
    if ck in cache:
        return cache[ck]
    ps, eps = projective_cover(m)
    f = m.algebra.field
    section = {}
    for v in m.algebra.vertices():
        sol = linalg.solve(eps.blocks[v], linalg.identity(f, m.dims[v]))
        if sol is None:
            raise ValidationError("cover not surjective at a vertex")
        section[v] = sol
    cache[ck] = section
    return section


def _presentation(m: Module) -> tuple[ProjSum, ModuleHom, ProjSum, ModuleHom]:
    """Minimal presentation P1 -d1-> P0 -eps-> m -> 0."""
    cache = m.algebra.cache("presentation")
    ck = m.key()
    if ck in cache:
        return cache[ck]
    p0, eps = projective_cover(m)
    k, incl = kernel(eps)
    p1, eps1 = projective_cover(k)
    d1 = eps1.then(incl)
    out = (p1, d1, p0, eps)
    cache[ck] = out
    return out


def hom_space(m: Module, n: Module) -> list[ModuleHom]:
    """Basis of Hom(m, n).

    Computed as the kernel of Hom(P0, n) -> Hom(P1, n) along a minimal
    presentation of m, where both hom spaces have free Yoneda coordinates;
    this avoids solving the full intertwining system.
    """
    alg = m.algebra
    if n.algebra is not alg:
        raise ValidationError("hom between modules over different algebras")
    cache = alg.cache("hom")
    ck = (m.key(), n.key())
    if ck in cache:
        basis = cache[ck]
    else:
        basis = _hom_space_fast(m, n)
        cache[ck] = basis
    return [ModuleHom(m, n, blocks, check=False) for blocks in basis]


def _yoneda_coords(ps: ProjSum, n: Module, h: ModuleHom) -> list:
    """Coordinates of h: P -> n in the Yoneda basis: generator image entries."""
    out = []
    for j, v in enumerate(ps.gen_vertices):
        _, c = ps.gen_coord(j)
        out.extend(h.blocks[v].entries[c])
    return out


def _hom_space_fast(m: Module, n: Module) -> list[dict[str, Mat]]:
    alg = m.algebra
    f = alg.field
    if m.total_dim == 0 or n.total_dim == 0:
        return []
    p1, d1, p0, eps = _presentation(m)
    basis0 = hom_from_projective_basis(p0, n)
    if not basis0:
        return []
    rows = []
    width = sum(n.dims[v] for v in p1.gen_vertices)
    for h in basis0:
        if width:
            rows.append(_yoneda_coords(p1, n, d1.then(h)))
        else:
            rows.append([])
    system = Mat(f, len(rows), width, rows)
    null = linalg.kernel_basis(system)
    section = _cover_section(m)
    out = []
    for coeffs in null.entries:
        psi = None
        for c, h in zip(coeffs, basis0):
            if f.is_zero(c):
                continue
            term = h.scaled(c)
            psi = term if psi is None else psi.plus(term)
        if psi is None:
            continue
        blocks = {v: linalg.mul(section[v], psi.blocks[v]) for v in alg.vertices()}
        out.append(blocks)
    return out


def hom_space_by_intertwining(m: Module, n: Module) -> list[ModuleHom]:
    """Independent route: solve the raw intertwining system (test oracle)."""
    return [ModuleHom(m, n, blocks, check=True) for blocks in _hom_space_raw(m, n)]


def _hom_space_raw(m: Module, n: Module) -> list[dict[str, Mat]]:
    alg = m.algebra
    f = alg.field
    verts = alg.vertices()
    offs = {}
    total = 0
    for v in verts:
        offs[v] = total
        total += m.dims[v] * n.dims[v]
    if total == 0:
        return []
    eq_cols: list[list] = []

    def unknown(v, i, j):
        return offs[v] + i * n.dims[v] + j

    cols = []
    for a in alg.quiver.arrows:
        M = m.maps[a.name]
        N = n.maps[a.name]
        i_dim, j_dim = m.dims[a.source], n.dims[a.target]
        for r in range(i_dim):
            for c in range(j_dim):
                col = {}
                # sum_k M[r,k] * B_tgt[k,c] - sum_l B_src[r,l] * N[l,c] = 0
                for k in range(m.dims[a.target]):
                    x = M.entries[r][k]
                    if not f.is_zero(x):
                        u = unknown(a.target, k, c)
                        col[u] = f.add(col.get(u, f.zero()), x)
                for l in range(n.dims[a.source]):
                    y = N.entries[l][c]
                    if not f.is_zero(y):
                        u = unknown(a.source, r, l)
                        col[u] = f.sub(col.get(u, f.zero()), y)
                if col:
                    cols.append(col)
    z = f.zero()
    system = Mat(f, total, len(cols),
                 [[cols[e].get(u, z) for e in range(len(cols))] for u in range(total)])
    null = linalg.kernel_basis(system)
    out = []
    for row in null.entries:
        blocks = {}
        for v in verts:
            o = offs[v]
            blocks[v] = Mat(f, m.dims[v], n.dims[v],
                            [[row[o + i * n.dims[v] + j] for j in range(n.dims[v])]
                             for i in range(m.dims[v])])
        out.append(blocks)
    return out


def hom_from_projective_basis(ps: ProjSum, n: Module) -> list[ModuleHom]:
    """Basis of Hom(P, n) by the projective universal property (no solving)."""
    alg = ps.algebra
    f = alg.field
    out = []
    for j, v in enumerate(ps.gen_vertices):
        for c in range(n.dims[v]):
            images = []
            for k, w in enumerate(ps.gen_vertices):
                row = linalg.zeros(f, 1, n.dims[w])
                if k == j:
                    rows = [list(row.entries[0])]
                    rows[0][c] = f.one()
                    row = Mat(f, 1, n.dims[w], rows)
                images.append(row)
            out.append(ps.hom_from_element(n, images))
    return out


def hom_in_span(target: ModuleHom, basis: list[ModuleHom]):
    """Coefficients expressing target in the span of basis homs, or None."""
    f = target.source.algebra.field
    if not basis:
        return None if any(not f.is_zero(x) for x in target.flat()) else []
    a = linalg.from_rows(f, [list(h.flat()) for h in basis])
    b = linalg.from_rows(f, [list(target.flat())])
    sol = linalg.solve(a, b)
    if sol is None:
        return None
    return list(sol.entries[0])


def random_invertible(field, n: int, rng) -> Mat:
    """Random invertible matrix: unit upper triangular times unit lower triangular."""
    u = [[field.from_int(rng.randint(-2, 2)) if j > i else
          (field.one() if i == j else field.zero()) for j in range(n)] for i in range(n)]
    l = [[field.from_int(rng.randint(-2, 2)) if j < i else
          (field.one() if i == j else field.zero()) for j in range(n)] for i in range(n)]
    return linalg.mul(Mat(field, n, n, u), Mat(field, n, n, l))


def base_change(m: Module, rng) -> tuple[Module, ModuleHom]:
    """Conjugate m by random invertible block matrices; returns (m', iso m' -> m)."""
    alg = m.algebra
    g = {v: random_invertible(alg.field, m.dims[v], rng) for v in alg.vertices()}
    ginv = {}
    for v in alg.vertices():
        _, t, _ = linalg._rref_with_transform(g[v])
        ginv[v] = t  # g is invertible, so rref(g) = I and the transform is g^{-1}
    maps = {a.name: linalg.mul(linalg.mul(g[a.source], m.maps[a.name]), ginv[a.target])
            for a in alg.quiver.arrows}
    changed = Module(alg, dict(m.dims), maps, check=True, name=m.name + "~")
    iso = ModuleHom(changed, m, g, check=True)
    return changed, iso
