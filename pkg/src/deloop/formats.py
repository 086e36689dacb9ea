"""Line-oriented ASCII formats for algebras, modules, and certificates.

All formats use '#' comments, are diff-friendly, and round-trip: parsing the
printed form of an object reproduces it exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .algebra import Arrow, PathAlgebra, Quiver, Relation, build_algebra
from .errors import ParseError, ValidationError
from .fields import parse_field
from .linalg import Mat
from .modules import Module, injective, projective, simple

_NUM_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
_NAME_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


def fixture_path(name: str) -> Path:
    return Path(__file__).parent / "fixtures" / name


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def _parse_relation_tokens(tokens: list[str], lineno: int) -> Relation:
    terms: list[tuple[Fraction, tuple[str, ...]]] = []
    sign = Fraction(1)
    coeff: Fraction | None = None
    for tok in tokens:
        if tok == "+":
            if coeff is not None:
                raise ParseError("dangling coefficient", lineno)
            sign = Fraction(1)
        elif tok == "-":
            if coeff is not None:
                raise ParseError("dangling coefficient", lineno)
            sign = Fraction(-1)
        elif _NUM_RE.match(tok):
            if coeff is not None:
                raise ParseError("two coefficients in a row", lineno)
            coeff = Fraction(tok)
        else:
            path = tuple(tok.split("*"))
            if not all(p for p in path):
                raise ParseError(f"bad path {tok!r}", lineno)
            c = sign * (coeff if coeff is not None else Fraction(1))
            terms.append((c, path))
            sign, coeff = Fraction(1), None
    if coeff is not None:
        raise ParseError("coefficient without a path", lineno)
    if not terms:
        raise ParseError("empty relation", lineno)
    return Relation(tuple(terms))


def parse_algebra(text: str, *, name_hint: str = "algebra") -> PathAlgebra:
    name = name_hint
    field = None
    vertices: list[str] = []
    arrows: list[Arrow] = []
    relations: list[Relation] = []
    degree_cap = 32
    external: list[dict] = []
    for lineno, line in _lines(text):
        parts = line.split()
        head = parts[0]
        if head == "algebra" and len(parts) == 2:
            name = parts[1]
        elif head == "field":
            field = parse_field(" ".join(parts[1:]))
        elif head == "vertices":
            vertices.extend(parts[1:])
        elif head == "arrow":
            m = re.match(r"^arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", line)
            if not m:
                raise ParseError("expected 'arrow name : src -> tgt'", lineno)
            arrows.append(Arrow(m.group(1), m.group(2), m.group(3)))
        elif head == "relation":
            relations.append(_parse_relation_tokens(parts[1:], lineno))
        elif head == "degree-cap" and len(parts) == 2:
            degree_cap = int(parts[1])
        elif head == "external" and len(parts) >= 3:
            external.append({"quantity": parts[1], "value": parts[2],
                             "source": " ".join(parts[3:]) or "literature",
                             "computed": False})
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if field is None:
        raise ParseError("missing 'field' line")
    if not vertices:
        raise ParseError("missing 'vertices' line")
    quiver = Quiver(tuple(vertices), tuple(arrows))
    alg = build_algebra(quiver, relations, field, degree_cap=degree_cap, name=name)
    alg.external_citations = external
    alg.degree_cap = degree_cap
    return alg


def print_relation(r: Relation) -> str:
    out = []
    for i, (c, path) in enumerate(r.terms):
        mag = abs(c)
        body = ("" if mag == 1 else f"{mag} ") + "*".join(path)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def print_algebra(alg: PathAlgebra) -> str:
    lines = [f"algebra {alg.name}", f"field {alg.field.name}",
             "vertices " + " ".join(alg.quiver.vertices)]
    for a in alg.quiver.arrows:
        lines.append(f"arrow {a.name} : {a.source} -> {a.target}")
    for r in alg.relations:
        lines.append("relation " + print_relation(r))
    lines.append(f"degree-cap {getattr(alg, 'degree_cap', 32)}")
    for c in getattr(alg, "external_citations", []):
        lines.append(f"external {c['quantity']} {c['value']} {c['source']}")
    return "\n".join(lines) + "\n"


def load_algebra(path) -> PathAlgebra:
    path = Path(path)
    alg = parse_algebra(path.read_text(), name_hint=path.stem)
    alg.source_path = path
    return alg


# -- matrices -----------------------------------------------------------------


def parse_matrix(field, text: str, lineno: int | None = None) -> list[list]:
    s = text.replace(" ", "")
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"expected bracketed matrix, got {text!r}", lineno)
    body = s[1:-1]
    if not body:
        return []
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError("expected rows like [[1,2],[3,4]]", lineno)
    rows = []
    for chunk in body[1:-1].split("],["):
        if chunk == "":
            rows.append([])
        else:
            rows.append([field.parse(tok) for tok in chunk.split(",")])
    return rows


def print_matrix(field, m: Mat) -> str:
    return "[" + ",".join("[" + ",".join(field.fmt(x) for x in r) + "]" for r in m.entries) + "]"


def parse_module(text: str, algebra: PathAlgebra, *, name_hint: str = "module") -> Module:
    name = name_hint
    dims: dict[str, int] = {}
    raw_maps: dict[str, list[list]] = {}
    for lineno, line in _lines(text):
        parts = line.split()
        head = parts[0]
        if head == "module" and len(parts) == 2:
            name = parts[1]
        elif head == "algebra" and len(parts) == 2:
            pass  # informational; structural validation below is the real check
        elif head == "dim" and len(parts) == 3:
            v = parts[1]
            if v not in algebra.vertices():
                raise ParseError(f"unknown vertex {v!r}", lineno)
            dims[v] = int(parts[2])
        elif head == "map":
            m = re.match(r"^map\s+(\S+)\s*=\s*(.+)$", line)
            if not m:
                raise ParseError("expected 'map arrow = [[...]]'", lineno)
            arrow = m.group(1)
            if all(a.name != arrow for a in algebra.quiver.arrows):
                raise ParseError(f"unknown arrow {arrow!r}", lineno)
            raw_maps[arrow] = parse_matrix(algebra.field, m.group(2), lineno)
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    maps = {}
    for arrow_name, rows in raw_maps.items():
        a = algebra.quiver.arrow(arrow_name)
        r, c = dims.get(a.source, 0), dims.get(a.target, 0)
        if len(rows) != r or any(len(x) != c for x in rows):
            raise ParseError(f"map {arrow_name} should be {r}x{c}")
        maps[arrow_name] = Mat(algebra.field, r, c, rows)
    mod = Module(algebra, dims, maps, check=True, name=name)
    return mod


def print_module(m: Module, *, header: bool = True) -> str:
    lines = []
    if header:
        lines.append(f"module {m.name or 'module'}")
        lines.append(f"algebra {m.algebra.name}")
    for v in m.algebra.vertices():
        if m.dims[v]:
            lines.append(f"dim {v} {m.dims[v]}")
    for a in m.algebra.quiver.arrows:
        mat = m.maps[a.name]
        if mat.rows and mat.cols and not mat.is_zero():
            lines.append(f"map {a.name} = {print_matrix(m.algebra.field, mat)}")
    return "\n".join(lines) + "\n"


def load_module(path, algebra: PathAlgebra) -> Module:
    path = Path(path)
    return parse_module(path.read_text(), algebra, name_hint=path.stem)


def resolve_module_ref(ref: str, algebra: PathAlgebra, *, base: Path | None = None) -> Module:
    """Resolve S<v>, P<v>, I<v>, or a module file path."""
    for prefix, ctor in (("S", simple), ("P", projective), ("I", injective)):
        if ref.startswith(prefix) and ref[len(prefix):] in algebra.vertices():
            return ctor(algebra, ref[len(prefix):])
    p = Path(ref)
    if base is not None and not p.is_absolute() and not p.exists():
        p = base / ref
    if p.exists():
        return load_module(p, algebra)
    raise ParseError(f"cannot resolve module reference {ref!r}")
