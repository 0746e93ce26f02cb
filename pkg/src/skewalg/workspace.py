"""Line-oriented fixture files: ``[kind name]`` headers followed by ``key: value`` lines.

Kinds and their keys::

    [field]            p, root
    [algebra A]        vertices, arrows (a:1->2 ...), relation (repeatable), bound
    [group G]          orders
    [action act]       algebra, group, vertices / arrows (one pair per generator)
    [module M]         algebra, dims (1:1 2:0), arrow <id> (matrix per arrow)
    [morphism f]       source, target, map
    [functor T]        presentation (a morphism name)
    [universe U]       algebra, modules
    [brauer B]         half_edges, iota, sigma, m, d

Matrices are JSON-style bracketed integer rows. Permutations use cycle
notation, e.g. ``(1 2)(3)``; ``()`` is the identity. ``#`` starts a comment.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .brauer import Grading, SkewBrauerGraph
from .errors import ParseError, SkewAlgError, ValidationError
from .exactfield import DEFAULT_FIELD, FieldSpec
from .functcat import FPFunctor
from .groupact import FiniteAbelianGroup, QuiverAction, skew_algebra
from .morphcat import MorphismObject
from .quivalg import Quiver, RelationSet, path_basis
from .repcat import FDModule

KINDS = ("field", "algebra", "group", "action", "module", "morphism", "functor", "universe", "brauer")
KEYS = {
    "field": {"p", "root"},
    "algebra": {"vertices", "arrows", "relation", "bound"},
    "group": {"orders"},
    "action": {"algebra", "group", "vertices", "arrows"},
    "module": {"algebra", "dims"},
    "morphism": {"source", "target", "map"},
    "functor": {"presentation"},
    "universe": {"algebra", "modules"},
    "brauer": {"half_edges", "iota", "sigma", "m", "d"},
}
REPEATABLE = {("algebra", "relation"), ("action", "vertices"), ("action", "arrows")}
HEADER = re.compile(r"^\[\s*([A-Za-z_]+)(?:\s+([^\s\]]+))?\s*\]$")
ENTRY = re.compile(r"^([A-Za-z_][\w]*(?:\s+[^\s:]+)?)\s*:\s*(.*)$")


@dataclass
class Entry:
    key: str
    value: str
    line: int
    col: int


@dataclass
class Stanza:
    kind: str
    name: str
    line: int
    entries: list = field(default_factory=list)

    def get(self, key, required=True) -> Entry | None:
        hits = [e for e in self.entries if e.key == key]
        if not hits:
            if required:
                raise ParseError(f"[{self.kind} {self.name}] is missing key '{key}'", self.line, 1)
            return None
        return hits[0]

    def all(self, key) -> list:
        return [e for e in self.entries if e.key == key]


@dataclass
class Workspace:
    fs: FieldSpec = DEFAULT_FIELD
    algebras: dict = field(default_factory=dict)
    groups: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)      # name -> (algebra name, group name, QuiverAction)
    bundles: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    universes: dict = field(default_factory=dict)
    brauer: dict = field(default_factory=dict)       # name -> (SkewBrauerGraph, Grading)
    records: list = field(default_factory=list)      # (kind, name, normalized data) in file order

    def modules_over(self, alg_name: str) -> list:
        alg = self.algebras[alg_name]
        return [m for m in self.modules.values() if m.algebra is alg]

    def morphisms_over(self, alg_name: str) -> list:
        alg = self.algebras[alg_name]
        return [f for f in self.morphisms.values() if f.algebra is alg]

    def functors_over(self, alg_name: str) -> list:
        alg = self.algebras[alg_name]
        return [t for t in self.functors.values() if t.algebra is alg]

    def universes_over(self, alg_name: str) -> list:
        return [(n, u) for n, (a, u) in self.universes.items() if a == alg_name]


# -- lexing ------------------------------------------------------------------

def split_stanzas(text: str) -> list[Stanza]:
    out: list[Stanza] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if body.startswith("["):
            m = HEADER.match(body)
            if not m:
                raise ParseError(f"malformed stanza header {body!r}", ln, indent + 1)
            kind, name = m.group(1), m.group(2) or ""
            if kind not in KINDS:
                raise ParseError(f"unknown stanza kind '{kind}'", ln, indent + 2)
            if kind != "field" and not name:
                raise ParseError(f"stanza [{kind}] needs a name", ln, indent + 1)
            out.append(Stanza(kind, name, ln))
            continue
        m = ENTRY.match(body)
        if not m:
            raise ParseError("expected 'key: value'", ln, indent + 1)
        if not out:
            raise ParseError("entry outside of any stanza", ln, indent + 1)
        st = out[-1]
        key = m.group(1)
        base = key.split()[0]
        allowed = KEYS[st.kind] | ({"arrow"} if st.kind == "module" else set())
        if base not in allowed or (base == "arrow") != (len(key.split()) == 2):
            raise ParseError(f"unknown key '{key}' in [{st.kind}]", ln, indent + 1)
        if base != "arrow" and st.get(key, required=False) and (st.kind, key) not in REPEATABLE:
            raise ParseError(f"duplicate key '{key}'", ln, indent + 1)
        if base == "arrow" and st.get(key, required=False):
            raise ParseError(f"duplicate key '{key}'", ln, indent + 1)
        vcol = line.index(":") + 1
        while vcol < len(line) and line[vcol] == " ":
            vcol += 1
        vcol += 1
        st.entries.append(Entry(key, m.group(2).strip(), ln, vcol))
    return out


def _words(e: Entry) -> list[str]:
    return e.value.split()


def _int(e: Entry, s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ParseError(f"expected an integer, got {s!r}", e.line, e.col) from None


def parse_matrix(e: Entry) -> list:
    try:
        m = json.loads(e.value)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad matrix: {exc.msg}", e.line, e.col + exc.pos) from None
    if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
        raise ParseError("a matrix is a list of bracketed rows", e.line, e.col)
    if m and len({len(r) for r in m}) != 1:
        raise ParseError("matrix rows differ in length", e.line, e.col)
    if not all(isinstance(x, int) for r in m for x in r):
        raise ParseError("matrix entries must be integers", e.line, e.col)
    return m


def parse_cycles(e: Entry, support) -> dict:
    """Cycle notation to a permutation dict on ``support``."""
    perm = {x: x for x in support}
    s = e.value.replace(" ", "")
    if not re.fullmatch(r"(\([^()]*\))*", s):
        raise ParseError("bad cycle notation", e.line, e.col)
    seen = set()
    for cyc in re.findall(r"\(([^()]*)\)", e.value):
        items = cyc.split()
        for x in items:
            if x not in perm:
                raise ParseError(f"unknown element {x!r} in cycle", e.line, e.col)
            if x in seen:
                raise ParseError(f"element {x!r} repeated in cycles", e.line, e.col)
            seen.add(x)
        for a, b in zip(items, items[1:] + items[:1]):
            perm[a] = b
    return perm


def format_cycles(perm: dict, order) -> str:
    seen, out = set(), []
    for x in order:
        if x in seen or perm[x] == x:
            seen.add(x)
            continue
        cyc, y = [], x
        while y not in seen:
            seen.add(y)
            cyc.append(y)
            y = perm[y]
        out.append("(" + " ".join(cyc) + ")")
    return "".join(out) or "()"


def parse_relation(e: Entry, arrows) -> tuple:
    s = e.value.replace(" ", "")
    if not s:
        raise ParseError("empty relation", e.line, e.col)
    terms = []
    for m in re.finditer(r"([+-]?)([^+-]+)", s):
        sign = -1 if m.group(1) == "-" else 1
        parts = m.group(2).split("*")
        coef = 1
        if parts and re.fullmatch(r"\d+", parts[0]):
            coef = int(parts[0])
            parts = parts[1:]
        for a in parts:
            if a not in arrows:
                raise ParseError(f"unknown arrow {a!r} in relation", e.line, e.col + m.start())
        terms.append((sign * coef, tuple(parts)))
    if "".join(m.group(0) for m in re.finditer(r"([+-]?)([^+-]+)", s)) != s:
        raise ParseError("bad relation syntax", e.line, e.col)
    return tuple(terms)


def format_relation(rel) -> str:
    out = []
    for k, (c, pth) in enumerate(rel):
        sign = "-" if c < 0 else ("+" if k else "")
        mag = abs(c)
        body = "*".join(pth)
        txt = body if mag == 1 else f"{mag}*{body}"
        out.append(f"{sign} {txt}" if k else f"{sign}{txt}")
    return " ".join(out)


def format_matrix(m) -> str:
    return "[" + ",".join("[" + ",".join(str(int(x)) for x in row) + "]" for row in m) + "]"


# -- building ----------------------------------------------------------------

def _wrap(st: Stanza, exc: Exception) -> ValidationError:
    return ValidationError(f"[{st.kind} {st.name}] (line {st.line}): {exc}")


def _lookup(st: Stanza, table: dict, e: Entry, what: str):
    if e.value not in table:
        raise ValidationError(f"[{st.kind} {st.name}] (line {e.line}): unknown {what} '{e.value}'")
    return table[e.value]


def parse_text(text: str, p: int | None = None) -> Workspace:
    stanzas = split_stanzas(text)
    seen = set()
    for st in stanzas:
        if (st.kind, st.name) in seen:
            raise ValidationError(f"[{st.kind} {st.name}] (line {st.line}): name is not unique")
        seen.add((st.kind, st.name))
    ws = Workspace()
    fields = [s for s in stanzas if s.kind == "field"]
    if len(fields) > 1:
        raise ValidationError(f"[field] (line {fields[1].line}): only one field stanza allowed")
    prime, root = DEFAULT_FIELD.p, 0
    if fields:
        st = fields[0]
        prime = _int(st.get("p"), st.get("p").value)
        r = st.get("root", required=False)
        root = _int(r, r.value) if r else 0
        ws.records.append(("field", "", {"p": prime, "root": root}))
    if p is not None:
        prime, root = p, 0
    try:
        ws.fs = FieldSpec(prime, root)
    except SkewAlgError as exc:
        raise ValidationError(f"[field]: {exc}") from None
    order = {k: i for i, k in enumerate(KINDS)}
    for st in sorted((s for s in stanzas if s.kind != "field"), key=lambda s: order[s.kind]):
        try:
            BUILDERS[st.kind](ws, st)
        except (ParseError, ValidationError):
            raise
        except SkewAlgError as exc:
            raise _wrap(st, exc) from None
    rank = {(s.kind, s.name): i for i, s in enumerate(stanzas)}
    ws.records.sort(key=lambda r: rank.get((r[0], r[1]), -1))
    return ws


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture file, e.g. ``fixture_path("kron")``."""
    return Path(__file__).parent / "fixtures" / f"{name}.txt"


def parse_workspace(path, p: int | None = None) -> Workspace:
    return parse_text(Path(path).read_text(), p=p)


def _build_algebra(ws: Workspace, st: Stanza):
    verts = _words(st.get("vertices"))
    arrows = []
    ae = st.get("arrows", required=False)
    for item in _words(ae) if ae else []:
        m = re.fullmatch(r"([^:]+):([^-]+)->(.+)", item)
        if not m:
            raise ParseError(f"arrow must read id:source->target, got {item!r}", ae.line, ae.col)
        if re.fullmatch(r"\d+", m.group(1)):
            raise ParseError(f"arrow ids may not be integers ({item!r})", ae.line, ae.col)
        arrows.append((m.group(1), m.group(2), m.group(3)))
    ids = {a for a, _, _ in arrows}
    rels = tuple(parse_relation(e, ids) for e in st.all("relation"))
    be = st.get("bound", required=False)
    bound = _int(be, be.value) if be else None
    q = Quiver(tuple(verts), tuple(arrows))
    alg = path_basis(q, RelationSet(rels, nilpotency_bound=bound), ws.fs, name=st.name)
    ws.algebras[st.name] = alg
    ws.records.append(("algebra", st.name, {"vertices": verts, "arrows": arrows, "relations": rels,
                                            "bound": bound}))


def _build_group(ws: Workspace, st: Stanza):
    e = st.get("orders")
    orders = [_int(e, w) for w in _words(e)]
    if any(o < 1 for o in orders):
        raise ValidationError(f"[group {st.name}] (line {e.line}): cyclic orders must be positive")
    grp = FiniteAbelianGroup(orders, name=st.name)
    grp.check_field(ws.fs)
    ws.groups[st.name] = grp
    ws.records.append(("group", st.name, {"orders": orders}))


def _parse_arrow_images(e: Entry, ids) -> dict:
    out = {a: (1, a) for a in ids}
    for item in _words(e):
        m = re.fullmatch(r"([^-]+)->(-?\d+\*)?(.+)", item)
        if not m or m.group(1) not in ids or m.group(3) not in ids:
            raise ParseError(f"bad arrow image {item!r}", e.line, e.col)
        c = int(m.group(2)[:-1]) if m.group(2) else 1
        out[m.group(1)] = (c, m.group(3))
    return out


def _build_action(ws: Workspace, st: Stanza):
    ae, ge = st.get("algebra"), st.get("group")
    alg = _lookup(st, ws.algebras, ae, "algebra")
    grp = _lookup(st, ws.groups, ge, "group")
    vs, ars = st.all("vertices"), st.all("arrows")
    ngen = len(grp.orders)
    if len(vs) != ngen or len(ars) not in (0, ngen):
        raise ValidationError(f"[action {st.name}] (line {st.line}): need one vertices line "
                              f"(and optionally one arrows line) per group generator ({ngen})")
    verts = list(alg.quiver.vertices)
    ids = [a for a, _, _ in alg.quiver.arrows]
    vperm = [parse_cycles(e, verts) for e in vs]
    amap = [_parse_arrow_images(e, ids) for e in ars] or [{a: (1, a) for a in ids} for _ in range(ngen)]
    qa = QuiverAction(vperm, amap, name=st.name)
    ws.actions[st.name] = (ae.value, ge.value, qa)
    ws.bundles[st.name] = skew_algebra(alg, qa, grp, name=alg.name)
    ws.records.append(("action", st.name, {"algebra": ae.value, "group": ge.value,
                                           "vertices": vperm, "arrows": amap, "order": (verts, ids)}))


def _build_module(ws: Workspace, st: Stanza):
    ae = st.get("algebra")
    alg = _lookup(st, ws.algebras, ae, "algebra")
    de = st.get("dims")
    dims = {v: 0 for v in alg.quiver.vertices}
    for item in _words(de):
        if ":" not in item or item.split(":")[0] not in dims:
            raise ParseError(f"dims entries read vertex:dim, got {item!r}", de.line, de.col)
        v, n = item.split(":", 1)
        dims[v] = _int(de, n)
    arrows = {}
    ids = {a: (s, t) for a, s, t in alg.quiver.arrows}
    for e in st.entries:
        if e.key.startswith("arrow "):
            a = e.key.split()[1]
            if a not in ids:
                raise ParseError(f"unknown arrow '{a}'", e.line, 1)
            s, t = ids[a]
            mat = np.array(parse_matrix(e), dtype=np.int64)
            want = (dims[t], dims[s])
            if mat.size == 0:
                mat = np.zeros(want, dtype=np.int64)
            if mat.shape != want:
                raise ValidationError(f"[module {st.name}] (line {e.line}): arrow {a} has shape "
                                      f"{mat.shape}, expected {want}")
            arrows[a] = mat
    mod = FDModule.from_representation(alg, dims, arrows, name=st.name)
    mod.rep_data = (dims, arrows)
    ws.modules[st.name] = mod
    ws.records.append(("module", st.name, {"algebra": ae.value, "dims": dims,
                                           "arrows": {a: m.tolist() for a, m in arrows.items()}}))


def _build_morphism(ws: Workspace, st: Stanza):
    se, te, me = st.get("source"), st.get("target"), st.get("map", required=False)
    src = _lookup(st, ws.modules, se, "module")
    tgt = _lookup(st, ws.modules, te, "module")
    mat = np.array(parse_matrix(me), dtype=np.int64) if me else np.zeros((0, 0), dtype=np.int64)
    if mat.size == 0:
        mat = np.zeros((tgt.dim, src.dim), dtype=np.int64)
    if mat.shape != (tgt.dim, src.dim):
        raise ValidationError(f"[morphism {st.name}] (line {st.line}): map has shape {mat.shape}, "
                              f"expected {(tgt.dim, src.dim)}")
    try:
        f = MorphismObject(src, tgt, mat, name=st.name)
    except SkewAlgError as exc:
        raise ValidationError(f"[morphism {st.name}] (line {st.line}): invariant 'map is a module "
                              f"homomorphism' violated ({exc})") from None
    ws.morphisms[st.name] = f
    ws.records.append(("morphism", st.name, {"source": se.value, "target": te.value, "map": mat.tolist()}))


def _build_functor(ws: Workspace, st: Stanza):
    pe = st.get("presentation")
    f = _lookup(st, ws.morphisms, pe, "morphism")
    ws.functors[st.name] = FPFunctor(f, name=st.name)
    ws.records.append(("functor", st.name, {"presentation": pe.value}))


def _build_universe(ws: Workspace, st: Stanza):
    ae, me = st.get("algebra"), st.get("modules")
    alg = _lookup(st, ws.algebras, ae, "algebra")
    mods = []
    for w in _words(me):
        m = _lookup(st, ws.modules, Entry("modules", w, me.line, me.col), "module")
        if m.algebra is not alg:
            raise ValidationError(f"[universe {st.name}] (line {me.line}): {w} lives over another algebra")
        mods.append(m)
    ws.universes[st.name] = (ae.value, mods)
    ws.records.append(("universe", st.name, {"algebra": ae.value, "modules": _words(me)}))


def _build_brauer(ws: Workspace, st: Stanza):
    he = st.get("half_edges")
    H = _words(he)
    iota = parse_cycles(st.get("iota"), H)
    sigma = parse_cycles(st.get("sigma"), H)
    me = st.get("m")
    ms = [_int(me, w) for w in _words(me)]
    de = st.get("d", required=False)
    ds = [_int(de, w) % 2 for w in _words(de)] if de else [0] * len(H)
    if len(ms) != len(H) or len(ds) != len(H):
        raise ValidationError(f"[brauer {st.name}] (line {st.line}): multiplicity and grading lists "
                              "need one entry per half-edge")
    g = SkewBrauerGraph(tuple(H), iota, sigma, dict(zip(H, ms)), name=st.name)
    d = Grading(dict(zip(H, ds)))
    ws.brauer[st.name] = (g, d)
    ws.records.append(("brauer", st.name, {"H": H, "iota": iota, "sigma": sigma, "m": ms, "d": ds}))


BUILDERS = {
    "algebra": _build_algebra, "group": _build_group, "action": _build_action,
    "module": _build_module, "morphism": _build_morphism, "functor": _build_functor,
    "universe": _build_universe, "brauer": _build_brauer,
}


# -- serializing ------------------------------------------------------------

def serialize(ws: Workspace) -> str:
    blocks = []
    for kind, name, d in ws.records:
        lines = [f"[{kind} {name}]" if name else f"[{kind}]"]
        if kind == "field":
            lines.append(f"p: {d['p']}")
            if d["root"]:
                lines.append(f"root: {d['root']}")
        elif kind == "algebra":
            lines.append("vertices: " + " ".join(d["vertices"]))
            if d["arrows"]:
                lines.append("arrows: " + " ".join(f"{a}:{s}->{t}" for a, s, t in d["arrows"]))
            for r in d["relations"]:
                lines.append("relation: " + format_relation(r))
            if d["bound"] is not None:
                lines.append(f"bound: {d['bound']}")
        elif kind == "group":
            lines.append("orders: " + " ".join(map(str, d["orders"])))
        elif kind == "action":
            verts, ids = d["order"]
            lines += [f"algebra: {d['algebra']}", f"group: {d['group']}"]
            for vp, am in zip(d["vertices"], d["arrows"]):
                lines.append("vertices: " + format_cycles(vp, verts))
                moved = [f"{a}->{'' if am[a][0] == 1 else str(am[a][0]) + '*'}{am[a][1]}"
                         for a in ids if am[a] != (1, a)]
                if moved:
                    lines.append("arrows: " + " ".join(moved))
        elif kind == "module":
            lines.append(f"algebra: {d['algebra']}")
            lines.append("dims: " + " ".join(f"{v}:{n}" for v, n in d["dims"].items()))
            for a, m in d["arrows"].items():
                if np.asarray(m).size:
                    lines.append(f"arrow {a}: {format_matrix(m)}")
        elif kind == "morphism":
            lines += [f"source: {d['source']}", f"target: {d['target']}"]
            if np.asarray(d["map"]).size:
                lines.append(f"map: {format_matrix(d['map'])}")
        elif kind == "functor":
            lines.append(f"presentation: {d['presentation']}")
        elif kind == "universe":
            lines += [f"algebra: {d['algebra']}", "modules: " + " ".join(d["modules"])]
        elif kind == "brauer":
            lines += ["half_edges: " + " ".join(d["H"]), "iota: " + format_cycles(d["iota"], d["H"]),
                      "sigma: " + format_cycles(d["sigma"], d["H"]), "m: " + " ".join(map(str, d["m"])),
                      "d: " + " ".join(map(str, d["d"]))]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
