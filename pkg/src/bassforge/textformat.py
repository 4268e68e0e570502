"""The ``.gog`` text format.

A document is a sequence of statements, one per line (``;`` also separates
statements and ``#`` starts a comment)::

    class = finite
    group C = cyclic(2)
    group D4 = dihedral(4)
    vertex a : D4
    vertex b : D4 {kind = rigid, center = trivial}
    vertex Y : composite {
      vertex p : D4
      vertex q : D4
      edge f : C, p -> q, left = [r2], right = [r2]
    }
    edge e : C, a -> Y, left = [r2], right = [r2] at p
    parabolic {
      P : a = [r, s], edge_free = true
    }

Inclusions list the images of the edge group's generators (for finite groups
the greedy generating set, for abelian groups the unit vectors).  ``none``
marks an inclusion into an opaque group.  Names that are not plain
identifiers are written in double quotes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .abelian import FgAbelianGroup
from .finite import FiniteGroup, GroupError, GroupHom, cyclic, dihedral, dihedral_of_order, from_table
from .gog import (AbelianHom, Composite, Edge, FamilyMember, GogError, GraphOfGroups, Inclusion, JsjAnnotation,
                  Opaque, OrbifoldDescriptor, Vertex, validate)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(GogError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(map(str, self.diagnostics)))


# -- lexer ------------------------------------------------------------------------------

_IDENT = r"[A-Za-z_](?:[A-Za-z0-9_.+~']|-(?=[A-Za-z0-9]))*"
_TOKEN = re.compile(rf"""
    (?P<ws>[ \t\r]+) | (?P<comment>\#[^\n]*) | (?P<nl>\n) |
    (?P<string>"(?:[^"\\\n]|\\.)*") | (?P<arrow>->) | (?P<number>-?\d+) |
    (?P<ident>{_IDENT}) | (?P<punct>[=:,\[\](){{}}/*;]) | (?P<bad>.)
""", re.VERBOSE)
_PLAIN = re.compile(rf"^{_IDENT}$")


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int

    @property
    def value(self):
        if self.kind == "string":
            return bytes(self.text[1:-1], "utf-8").decode("unicode_escape")
        if self.kind == "number":
            return int(self.text)
        return self.text


def tokenize(text):
    toks = []
    line, start = 1, 0
    depth = 0
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        col = m.start() - start + 1
        if kind == "nl":
            if depth == 0:
                toks.append(Tok("nl", "\n", line, col))
            line += 1
            start = m.end()
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "bad":
            raise ParseError([Diagnostic(line, col, f"unexpected character {m.group()!r}")])
        t = m.group()
        if kind == "punct" and t in "([":
            depth += 1
        elif kind == "punct" and t in ")]":
            depth = max(depth - 1, 0)
        if kind == "punct" and t == ";":
            toks.append(Tok("nl", ";", line, col))
            continue
        toks.append(Tok(kind, t, line, col))
    toks.append(Tok("eof", "", line, 1))
    return toks


# -- parser -----------------------------------------------------------------------------

class _Fail(Exception):
    def __init__(self, tok, message):
        self.diag = Diagnostic(tok.line, tok.col, message)


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.diags = []
        self.groups = {}  # name -> group
        self.group_order = []

    # token helpers
    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.peek()
        self.i += 1
        return t

    def at(self, text):
        t = self.peek()
        return t.kind in ("punct", "arrow", "ident") and t.text == text

    def expect(self, text):
        t = self.next()
        if t.text != text or t.kind in ("string",):
            raise _Fail(t, f"expected {text!r}, found {t.text or 'end of input'!r}")
        return t

    def name(self):
        t = self.next()
        if t.kind not in ("ident", "string"):
            raise _Fail(t, f"expected a name, found {t.text or 'end of input'!r}")
        return t.value

    def number(self):
        t = self.next()
        if t.kind != "number":
            raise _Fail(t, f"expected a number, found {t.text or 'end of input'!r}")
        return t.value

    def skip_nl(self):
        while self.peek().kind == "nl":
            self.next()

    def end_statement(self):
        t = self.peek()
        if t.kind == "nl":
            self.next()
        elif not (t.kind == "eof" or (t.kind == "punct" and t.text == "}")):
            raise _Fail(t, f"unexpected {t.text!r} at end of statement")

    def recover(self):
        depth = 0
        while True:
            t = self.peek()
            if t.kind == "eof":
                return
            if t.kind == "punct" and t.text == "{":
                depth += 1
            elif t.kind == "punct" and t.text == "}":
                if depth == 0:
                    return
                depth -= 1
            elif t.kind == "nl" and depth == 0:
                self.next()
                return
            self.next()

    # generic values used in annotations
    def value(self):
        t = self.peek()
        if t.kind == "number":
            return self.next().value
        if t.kind == "string":
            return self.next().value
        if self.at("["):
            self.next()
            out = []
            while not self.at("]"):
                out.append(self.value())
                if not self.at("]"):
                    self.expect(",")
            self.next()
            return out
        if self.at("("):
            return self.vector()
        if t.kind == "ident":
            name = self.next().value
            if self.at("("):
                self.next()
                kw = {}
                while not self.at(")"):
                    k = self.name()
                    self.expect("=")
                    kw[k] = self.value()
                    if not self.at(")"):
                        self.expect(",")
                self.next()
                return ("call", name, kw)
            return {"true": True, "false": False}.get(name, name)
        raise _Fail(t, f"expected a value, found {t.text or 'end of input'!r}")

    def vector(self):
        self.expect("(")
        out = []
        while not self.at(")"):
            out.append(self.number())
            if not self.at(")"):
                self.expect(",")
        self.next()
        return tuple(out)

    # statements
    def document(self):
        directives, families = [], []
        vertices, edges = self.body(top=True, directives=directives, families=families)
        if self.peek().kind != "eof":
            self.diags.append(Diagnostic(self.peek().line, self.peek().col, "unbalanced '}'"))
        return vertices, edges, directives, families

    def body(self, top, directives=None, families=None):
        vertices, raw_edges = [], []
        while True:
            self.skip_nl()
            t = self.peek()
            if t.kind == "eof" or (t.kind == "punct" and t.text == "}"):
                break
            try:
                self.statement(top, t, vertices, raw_edges, directives, families)
            except _Fail as f:
                self.diags.append(f.diag)
                self.recover()
        edges = []
        for raw in raw_edges:
            try:
                edges.append(self.resolve_edge(raw, vertices))
            except _Fail as f:
                self.diags.append(f.diag)
        return vertices, edges

    def statement(self, top, t, vertices, raw_edges, directives, families):
        word = t.value if t.kind == "ident" else None
        if word == "vertex":
            self.next()
            vertices.append(self.vertex_stmt())
        elif word == "edge":
            self.next()
            raw_edges.append(self.edge_stmt())
        elif not top:
            raise _Fail(t, "only vertex and edge statements are allowed inside a composite block")
        elif word == "group":
            self.next()
            nt = self.peek()
            name = self.name()
            self.expect("=")
            if name in self.groups:
                raise _Fail(nt, f"group {name} is declared twice")
            self.groups[name] = self.group_expr(name)
            self.group_order.append(name)
        elif word == "assume":
            self.next()
            directives.append(("assume", self.name()))
        elif t.kind in ("ident", "string") and self.peek(1).text == "{":
            kind = self.name()
            self.next()
            families.append((kind, tuple(self.members())))
            self.expect("}")
        elif t.kind in ("ident", "string") and self.peek(1).text == "=":
            key = self.name()
            self.next()
            val = self.value()
            directives.append((key, val))
        else:
            raise _Fail(t, f"unknown statement starting with {t.text!r}")
        self.end_statement()

    def group_expr(self, name):
        t = self.peek()
        ctor = self.name()
        try:
            if ctor in ("cyclic", "dihedral", "dihedral_of_order", "free_abelian"):
                self.expect("(")
                n = self.number()
                self.expect(")")
                if ctor == "free_abelian":
                    return FgAbelianGroup(n)
                return {"cyclic": cyclic, "dihedral": dihedral, "dihedral_of_order": dihedral_of_order}[ctor](n, name)
            if ctor == "trivial":
                return cyclic(1, name)
            if ctor == "abelian":
                self.expect("(")
                fs = []
                while not self.at(")"):
                    fs.append(self.number())
                    if not self.at(")"):
                        self.expect(",")
                self.next()
                return FgAbelianGroup.from_factors(fs)
            if ctor == "table":
                rows = self.value()
                names = None
                if self.peek().kind == "ident" and self.peek().text == "names":
                    self.next()
                    names = [str(x) for x in self.value()]
                if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                    raise _Fail(t, "table needs a list of rows")
                return from_table(rows, name, names)
            if ctor == "opaque":
                self.expect("(")
                label = self.name()
                self.expect(")")
                return Opaque(label)
            if ctor == "composite":
                return self.composite()
        except (GroupError, ValueError) as exc:
            raise _Fail(t, str(exc))
        raise _Fail(t, f"unknown group constructor {ctor!r}")

    def composite(self):
        self.expect("{")
        verts, edges = self.body(top=False)
        self.expect("}")
        return Composite(GraphOfGroups(tuple(verts), tuple(edges)))

    def group_ref(self):
        t = self.peek()
        if t.kind == "ident" and t.text in ("composite", "opaque") and self.peek(1).text in ("{", "("):
            return self.group_expr(None)
        name = self.name()
        if name not in self.groups:
            raise _Fail(t, f"undeclared group {name!r}")
        return self.groups[name]

    def vertex_stmt(self):
        name = self.name()
        self.expect(":")
        grp = self.group_ref()
        ann = None
        if self.at("{"):
            ann = self.annotation()
        return Vertex(name, grp, ann)

    def annotation(self):
        t = self.expect("{")
        kv = {}
        while True:
            self.skip_nl()
            if self.at("}"):
                break
            k = self.name()
            self.expect("=")
            kv[k] = self.value()
            self.skip_nl()
            if not self.at("}"):
                self.expect(",")
        self.next()
        kind = kv.pop("kind", "rigid")
        orb = kv.pop("orbifold", None)
        if orb is not None:
            if not (isinstance(orb, tuple) and orb[0] == "call" and orb[1] == "orbifold"):
                raise _Fail(t, "orbifold must be written orbifold(orientable = ..., genus = ..., boundary = ...)")
            a = orb[2]
            orb = OrbifoldDescriptor(bool(a.get("orientable", True)), int(a.get("genus", 0)),
                                     int(a.get("boundary", 1)), tuple(int(x) for x in a.get("cones", [])))
        fiber = int(kv.pop("fiber", 1))
        usage = tuple(kv.pop("usage", ()))
        flags = tuple(sorted((k, v) for k, v in kv.items()))
        return JsjAnnotation(str(kind), orb, fiber, usage, flags)

    def edge_stmt(self):
        t = self.peek()
        name = self.name()
        self.expect(":")
        grp = self.group_ref()
        self.expect(",")
        o = self.name()
        self.expect("->")
        tt = self.name()
        self.expect(",")
        ends = {}
        for side in ("left", "right"):
            st = self.peek()
            if self.name() != side:
                raise _Fail(st, f"expected {side!r}")
            self.expect("=")
            ends[side] = (st, self.inclusion())
            if side == "left":
                self.expect(",")
        return (t, name, grp, o, tt, ends["left"], ends["right"])

    def inclusion(self):
        t = self.peek()
        if t.kind == "ident" and t.text == "none":
            self.next()
            images = None
        else:
            self.expect("[")
            images = []
            while not self.at("]"):
                if self.at("("):
                    images.append(self.vector())
                else:
                    parts = [self.name()]
                    while self.at("*"):
                        self.next()
                        parts.append(self.name())
                    images.append("*".join(parts))
                if not self.at("]"):
                    self.expect(",")
            self.next()
        path = ()
        if self.peek().kind == "ident" and self.peek().text == "at":
            self.next()
            path = [self.name()]
            while self.at("/"):
                self.next()
                path.append(self.name())
            path = tuple(path)
        return images, path

    def resolve_edge(self, raw, vertices):
        t, name, grp, o, tt, left, right = raw
        index = {v.name: v for v in vertices}
        incs = []
        for v, (st, (images, path)) in ((o, left), (tt, right)):
            if v not in index:
                raise _Fail(t, f"edge {name}: undeclared vertex {v!r}")
            target = index[v].group
            for p in path:
                if not isinstance(target, Composite) or not target.graph.has_vertex(p):
                    raise _Fail(st, f"edge {name}: no sub-vertex {p!r} under {v}")
                target = target.graph.vertex(p).group
            incs.append(Inclusion(self.hom(st, name, grp, target, images), path))
        return Edge(name, grp, o, tt, incs[0], incs[1])

    def hom(self, st, name, source, target, images):
        if images is None:
            return None
        try:
            if isinstance(source, FiniteGroup) and isinstance(target, FiniteGroup):
                elems = [target.element(x) if isinstance(x, str) else None for x in images]
                if None in elems:
                    raise _Fail(st, f"edge {name}: finite groups take element names")
                hom = GroupHom.from_generators(source, target, elems)
                if not hom.is_injective():
                    raise _Fail(st, f"edge {name}: inclusion is not injective")
                return hom
            if isinstance(source, FgAbelianGroup) and isinstance(target, FgAbelianGroup):
                if len(images) != source.ngens or not all(isinstance(x, tuple) for x in images):
                    raise _Fail(st, f"edge {name}: expected {source.ngens} vectors")
                if any(len(x) != target.ngens for x in images):
                    raise _Fail(st, f"edge {name}: vectors must have {target.ngens} coordinates")
                hom = AbelianHom(source, target, tuple(target.normalize(x) for x in images))
                if not hom.is_injective():
                    raise _Fail(st, f"edge {name}: inclusion is not injective")
                return hom
        except GroupError as exc:
            raise _Fail(st, f"edge {name}: {exc}")
        raise _Fail(st, f"edge {name}: cannot map {type(source).__name__} into {type(target).__name__}")

    def members(self):
        out = []
        while True:
            self.skip_nl()
            if self.at("}"):
                return out
            name = self.name()
            self.expect(":")
            vertex = self.name()
            elements, vectors, edge_free = "all", (), None
            if self.at("="):
                self.next()
                val = self.value()
                if val == "all":
                    pass
                elif isinstance(val, list) and all(isinstance(x, tuple) for x in val):
                    elements, vectors = (), tuple(val)
                elif isinstance(val, list):
                    elements = tuple(str(x) for x in val)
                else:
                    raise _Fail(self.peek(), "member elements must be 'all' or a list")
            while self.at(","):
                self.next()
                k = self.name()
                self.expect("=")
                v = self.value()
                if k == "edge_free":
                    edge_free = bool(v)
            out.append(FamilyMember(name, vertex, elements, edge_free, vectors))
            self.end_statement()


def parse_diagnostics(text):
    """``(graph or None, diagnostics)``."""
    try:
        p = _Parser(text)
        vertices, edges, directives, families = p.document()
    except ParseError as exc:
        return None, exc.diagnostics
    except _Fail as f:
        return None, [f.diag]
    if p.diags:
        return None, p.diags
    if not vertices:
        return None, [Diagnostic(1, 1, "document declares no vertices")]
    gamma = GraphOfGroups(tuple(vertices), tuple(edges), tuple(families), tuple(directives),
                          tuple((n, p.groups[n]) for n in p.group_order))
    problems = validate(gamma)
    if problems:
        return None, [Diagnostic(0, 0, x) for x in problems]
    return gamma, []


def parse(text) -> GraphOfGroups:
    gamma, diags = parse_diagnostics(text)
    if gamma is None:
        raise ParseError(diags)
    return gamma


def load(path) -> GraphOfGroups:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- serializer -------------------------------------------------------------------------

def _q(name):
    name = str(name)
    if _PLAIN.match(name) and name not in ("none", "at", "all", "composite", "opaque", "true", "false"):
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _group_key(G):
    if isinstance(G, FiniteGroup):
        return ("finite", G.constructor, G.table, G.names)
    if isinstance(G, FgAbelianGroup):
        return ("abelian", G.free_rank, G.torsion)
    return ("other", id(G))


def _group_expr(G):
    if isinstance(G, FiniteGroup):
        if G.constructor:
            return G.constructor
        rows = "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in G.table) + "]"
        names = ""
        if G.names != tuple(f"e{i}" for i in range(G.order)):
            names = " names [" + ", ".join(_q(n) for n in G.names) + "]"
        return f"table {rows}{names}"
    if isinstance(G, FgAbelianGroup):
        if not G.torsion:
            return f"free_abelian({G.free_rank})"
        return "abelian(" + ", ".join(map(str, list(G.torsion) + [0] * G.free_rank)) + ")"
    raise GogError(f"cannot declare {G!r}")


def _default_group_name(G):
    if isinstance(G, FgAbelianGroup):
        if not G.torsion:
            return f"Z{G.free_rank}" if G.free_rank != 1 else "Z"
        return "A"
    name = G.name or "G"
    return re.sub(r"[^A-Za-z0-9_]", "_", name) if name else "G"


class _Namer:
    def __init__(self, gamma):
        self.names = {}  # key -> name
        self.taken = set()
        self.order = []
        for name, G in gamma.groups:
            if isinstance(G, (FiniteGroup, FgAbelianGroup)):
                self.add(G, name)

    def add(self, G, name=None):
        key = _group_key(G)
        if key in self.names:
            return self.names[key]
        base = name or _default_group_name(G)
        if not base[0].isalpha():
            base = "G" + base
        cand, k = base, 2
        while cand in self.taken:
            cand = f"{base}_{k}"
            k += 1
        self.taken.add(cand)
        self.names[key] = cand
        self.order.append((cand, G))
        return cand

    def visit(self, gamma):
        for v in gamma.vertices:
            self.visit_group(v.group)
        for e in gamma.edges:
            self.visit_group(e.group)

    def visit_group(self, G):
        if isinstance(G, Composite):
            self.visit(G.graph)
        elif isinstance(G, (FiniteGroup, FgAbelianGroup)):
            self.add(G)


def _value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_value(x) for x in v) + "]"
    return _q(v)


def _annotation(ann):
    parts = [f"kind = {_q(ann.kind)}"]
    if ann.orbifold is not None:
        o = ann.orbifold
        cones = "[" + ", ".join(map(str, o.cone_points)) + "]"
        parts.append(f"orbifold = orbifold(orientable = {_value(o.orientable)}, genus = {o.genus}, "
                     f"boundary = {o.boundary_components}, cones = {cones})")
    if ann.fiber_order != 1:
        parts.append(f"fiber = {ann.fiber_order}")
    if ann.boundary_usage:
        parts.append(f"usage = {_value(list(ann.boundary_usage))}")
    parts += [f"{_q(k)} = {_value(v)}" for k, v in ann.flags]
    return " {" + ", ".join(parts) + "}"


def _images(hom):
    if hom is None:
        return "none"
    if isinstance(hom, GroupHom):
        return "[" + ", ".join(_q(hom.target.names[hom(g)]) for g in hom.source.generators) + "]"
    return "[" + ", ".join("(" + ", ".join(map(str, c)) + ")" for c in hom.columns) + "]"


def _incl(inc):
    out = _images(inc.hom)
    if inc.at:
        out += " at " + "/".join(_q(x) for x in inc.at)
    return out


def _group_ref(G, namer, indent):
    if isinstance(G, Composite):
        return "composite {\n" + _body(G.graph, namer, indent + "  ") + indent + "}"
    if isinstance(G, Opaque):
        return f"opaque({_q(G.label)})"
    return namer.names[_group_key(G)]


def _body(gamma, namer, indent):
    lines = []
    for v in gamma.vertices:
        ann = _annotation(v.annotation) if v.annotation is not None else ""
        lines.append(f"{indent}vertex {_q(v.name)} : {_group_ref(v.group, namer, indent)}{ann}\n")
    for e in gamma.edges:
        lines.append(f"{indent}edge {_q(e.name)} : {_group_ref(e.group, namer, indent)}, {_q(e.origin)} -> "
                     f"{_q(e.terminus)}, left = {_incl(e.left)}, right = {_incl(e.right)}\n")
    return "".join(lines)


def serialize(gamma: GraphOfGroups) -> str:
    """Canonical text of ``gamma``; ``parse(serialize(g))`` serializes identically."""
    if not gamma.vertices:
        raise GogError("cannot serialize a graph with no vertices")
    namer = _Namer(gamma)
    namer.visit(gamma)
    out = []
    for k, v in gamma.directives:
        out.append(f"assume {_q(v)}\n" if k == "assume" else f"{_q(k)} = {_value(v)}\n")
    for name, G in namer.order:
        out.append(f"group {name} = {_group_expr(G)}\n")
    out.append(_body(gamma, namer, ""))
    for kind, members in gamma.families:
        out.append(f"{_q(kind)} {{\n")
        for m in members:
            line = f"  {_q(m.name)} : {_q(m.vertex)}"
            if m.vectors:
                line += " = [" + ", ".join("(" + ", ".join(map(str, x)) + ")" for x in m.vectors) + "]"
            elif m.elements != "all":
                line += " = [" + ", ".join(_q(x) for x in m.elements) + "]"
            if m.edge_free is not None:
                line += f", edge_free = {_value(m.edge_free)}"
            out.append(line + "\n")
        out.append("}\n")
    return "".join(out)


def dump(gamma, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(gamma))
