"""Graphs of groups: the data model and structural operations.

A graph of groups stores each geometric edge once, with an origin and a
terminus; the two orientations are exposed as :class:`OrientedEdge` values
(``e`` and ``~e``).  Vertex groups are finite groups, finitely generated
abelian groups, composites (the fundamental group of a nested graph of
groups, used after collapsing) or opaque annotated groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .abelian import FgAbelianGroup, lattice_rank
from .finite import FiniteGroup, GroupHom, Subgroup, conjugate_subgroups


class GogError(ValueError):
    pass


# -- annotations --------------------------------------------------------------

@dataclass(frozen=True)
class OrbifoldDescriptor:
    orientable: bool = True
    genus: int = 0
    boundary_components: int = 1
    cone_points: tuple = ()

    def euler_characteristic(self) -> Fraction:
        chi = (2 - 2 * self.genus) if self.orientable else (2 - self.genus)
        chi = Fraction(chi - self.boundary_components)
        for m in self.cone_points:
            chi -= Fraction(m - 1, m)
        return chi

    def is_hyperbolic(self):
        return self.euler_characteristic() < 0

    def is_surface(self):
        return not self.cone_points

    def describe(self):
        kind = "orientable" if self.orientable else "non-orientable"
        cones = f", cone points {list(self.cone_points)}" if self.cone_points else ""
        return f"{kind} genus {self.genus}, {self.boundary_components} boundary{cones}"


@dataclass(frozen=True)
class JsjAnnotation:
    """User-supplied JSJ data for a vertex.

    ``kind`` is one of ``rigid``, ``qh``, ``abelian``, ``parabolic``.
    ``flags`` holds the remaining key/value facts (``center``, ``label`` ...).
    """

    kind: str
    orbifold: Optional[OrbifoldDescriptor] = None
    fiber_order: int = 1
    boundary_usage: tuple = ()
    flags: tuple = ()

    def flag(self, key, default=None):
        return dict(self.flags).get(key, default)


@dataclass(frozen=True)
class Opaque:
    """A vertex group known only through its annotation."""

    label: str = "opaque"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Composite:
    """The fundamental group of a nested graph of groups."""

    graph: "GraphOfGroups"


@dataclass(frozen=True)
class AbelianHom:
    """Homomorphism between f.g. abelian groups given by images of generators."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    columns: tuple  # columns[i] = image (target vector) of source generator i

    def __call__(self, v):
        out = [0] * self.target.ngens
        for coeff, col in zip(v, self.columns):
            for k, x in enumerate(col):
                out[k] += coeff * x
        return self.target.normalize(out)

    def is_injective(self):
        if self.source.torsion or self.target.torsion:
            return True  # only torsion-free inclusions are audited
        return lattice_rank(list(self.columns), self.target.ngens) == self.source.free_rank

    def image_vectors(self):
        return [tuple(c) for c in self.columns]


@dataclass(frozen=True)
class Inclusion:
    """Inclusion of an edge group into a vertex group.

    ``at`` is the path of sub-vertex names when the vertex group is composite;
    ``hom`` maps the edge group into that (innermost) vertex group.  ``hom`` is
    None for opaque targets.  ``conjugator`` records a path-conjugation element
    (identity unless set by an operation that moved the edge).
    """

    hom: object = None
    at: tuple = ()


@dataclass(frozen=True)
class Vertex:
    name: str
    group: object
    annotation: Optional[JsjAnnotation] = None


@dataclass(frozen=True)
class Edge:
    name: str
    group: object
    origin: str
    terminus: str
    left: Inclusion
    right: Inclusion


@dataclass(frozen=True)
class OrientedEdge:
    edge: Edge
    reverse: bool = False

    @property
    def name(self):
        return ("~" if self.reverse else "") + self.edge.name

    @property
    def origin(self):
        return self.edge.terminus if self.reverse else self.edge.origin

    @property
    def terminus(self):
        return self.edge.origin if self.reverse else self.edge.terminus

    @property
    def inclusion(self) -> Inclusion:
        return self.edge.right if self.reverse else self.edge.left

    @property
    def far_inclusion(self) -> Inclusion:
        return self.edge.left if self.reverse else self.edge.right

    @property
    def group(self):
        return self.edge.group

    @property
    def bar(self) -> "OrientedEdge":
        return OrientedEdge(self.edge, not self.reverse)

    def __repr__(self):
        return f"<{self.name}: {self.origin} -> {self.terminus}>"


@dataclass(frozen=True)
class FamilyMember:
    """A subgroup of ``G`` recorded as elliptic at ``vertex``.

    ``elements`` is a tuple of element names of the vertex group, or ``"all"``;
    ``edge_free`` is True when the subgroup fixes no edge of the tree, False
    when it fixes one, None when unknown.
    """

    name: str
    vertex: Optional[str]
    elements: object = "all"
    edge_free: Optional[bool] = None
    vectors: tuple = ()


@dataclass(frozen=True)
class GraphOfGroups:
    vertices: tuple
    edges: tuple = ()
    families: tuple = ()  # (kind, tuple of FamilyMember)
    directives: tuple = ()  # (key, value) pairs, e.g. ("class", "finite")
    groups: tuple = ()  # (name, group) declarations kept for serialization

    def __post_init__(self):
        object.__setattr__(self, "_vindex", {v.name: v for v in self.vertices})
        object.__setattr__(self, "_eindex", {e.name: e for e in self.edges})

    # -- access ------------------------------------------------------------
    def vertex(self, name) -> Vertex:
        try:
            return self._vindex[name]
        except KeyError:
            raise GogError(f"no vertex named {name!r}") from None

    def edge(self, name) -> Edge:
        try:
            return self._eindex[name]
        except KeyError:
            raise GogError(f"no edge named {name!r}") from None

    def has_vertex(self, name):
        return name in self._vindex

    def oriented(self, name: str) -> OrientedEdge:
        """``"e"`` or ``"~e"``."""
        if name.startswith("~"):
            return OrientedEdge(self.edge(name[1:]), True)
        return OrientedEdge(self.edge(name), False)

    @property
    def vertex_names(self):
        return [v.name for v in self.vertices]

    def oriented_edges(self):
        out = []
        for e in self.edges:
            out.append(OrientedEdge(e, False))
            out.append(OrientedEdge(e, True))
        return out

    def incident(self, v: str):
        """Oriented edges with origin ``v`` (a loop contributes both orientations)."""
        return [oe for oe in self.oriented_edges() if oe.origin == v]

    def family(self, kind):
        for k, members in self.families:
            if k == kind:
                return members
        return ()

    def directive(self, key, default=None):
        return dict(self.directives).get(key, default)

    def assumptions(self):
        return [v for k, v in self.directives if k == "assume"]

    def group_at(self, v: str, at: tuple = ()):
        """Group of vertex ``v``, descending into composites along ``at``."""
        G = self.vertex(v).group
        for name in at:
            if not isinstance(G, Composite):
                raise GogError(f"vertex {v} is not composite; cannot descend to {name}")
            G = G.graph.vertex(name).group
        return G

    # -- structure ---------------------------------------------------------
    def is_connected(self):
        if not self.vertices:
            return False
        adj = {v.name: set() for v in self.vertices}
        for e in self.edges:
            if e.origin in adj and e.terminus in adj:
                adj[e.origin].add(e.terminus)
                adj[e.terminus].add(e.origin)
        start = self.vertices[0].name
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def betti_number(self):
        return len(self.edges) - len(self.vertices) + 1

    def is_finite_groups(self):
        """True iff every vertex and edge group is an explicit finite group."""
        return all(isinstance(v.group, FiniteGroup) for v in self.vertices) and \
            all(isinstance(e.group, FiniteGroup) for e in self.edges)

    def is_trivial(self):
        return not self.edges

    def euler_characteristic(self) -> Fraction:
        """Rational Euler characteristic of a graph of finite groups."""
        if not self.is_finite_groups():
            raise GogError("Euler characteristic needs finite vertex and edge groups")
        return sum((Fraction(1, v.group.order) for v in self.vertices), Fraction(0)) - \
            sum((Fraction(1, e.group.order) for e in self.edges), Fraction(0))

    def with_(self, **changes):
        return replace(self, **changes)


# -- validation --------------------------------------------------------------

def validate(gamma: GraphOfGroups) -> list:
    """Check all structural invariants; returns a list of human-readable violations."""
    problems = []
    if not gamma.vertices:
        return ["graph has no vertices"]
    names = [v.name for v in gamma.vertices]
    if len(set(names)) != len(names):
        problems.append("duplicate vertex names")
    enames = [e.name for e in gamma.edges]
    if len(set(enames)) != len(enames):
        problems.append("duplicate edge names")
    for e in gamma.edges:
        for end, v in ((e.left, e.origin), (e.right, e.terminus)):
            if not gamma.has_vertex(v):
                problems.append(f"edge {e.name}: unknown vertex {v}")
                continue
            problems += _check_inclusion(gamma, e, end, v)
    if not problems and not gamma.is_connected():
        problems.append("underlying graph is not connected")
    for v in gamma.vertices:
        if isinstance(v.group, FiniteGroup):
            audit = v.group.audit() if v.group.constructor is None else []
            problems += [f"vertex {v.name}: {p}" for p in audit]
        if isinstance(v.group, Composite):
            problems += [f"vertex {v.name}/{p}" for p in validate(v.group.graph)]
        if isinstance(v.group, Opaque) and v.annotation is None:
            problems.append(f"vertex {v.name}: opaque vertex needs an annotation")
        ann = v.annotation
        if ann is not None and ann.kind == "qh":
            if ann.fiber_order < 1:
                problems.append(f"vertex {v.name}: QH fiber order must be >= 1")
            if ann.orbifold is None:
                problems.append(f"vertex {v.name}: QH vertex needs an orbifold descriptor")
    return problems


def _check_inclusion(gamma, e, inc, v):
    where = f"edge {e.name} at {v}"
    try:
        target = gamma.group_at(v, inc.at)
    except GogError as exc:
        return [f"{where}: {exc}"]
    if isinstance(target, Opaque) or isinstance(e.group, (Opaque, Composite)):
        return []
    if inc.hom is None:
        return [f"{where}: missing inclusion"]
    if isinstance(target, Composite):
        return [f"{where}: inclusion must name a sub-vertex of the composite group"]
    hom = inc.hom
    if isinstance(hom, GroupHom):
        if hom.target is not target and hom.target.table != getattr(target, "table", None):
            return [f"{where}: inclusion lands in the wrong group"]
        if not hom.is_homomorphism():
            return [f"{where}: inclusion is not a homomorphism"]
        if not hom.is_injective():
            return [f"{where}: inclusion is not injective"]
    elif isinstance(hom, AbelianHom):
        if not hom.is_injective():
            return [f"{where}: inclusion is not injective"]
    return []


# -- edge-group images -------------------------------------------------------

@dataclass(frozen=True)
class IncidentGroup:
    """Image of an incident edge group inside a vertex group."""

    edge: OrientedEdge
    subgroup: object  # Subgroup, tuple of vectors, or None for opaque targets
    at: tuple = ()
    conjugator: object = None


def image_of(oe: OrientedEdge):
    hom = oe.inclusion.hom
    if isinstance(hom, GroupHom):
        return hom.image()
    if isinstance(hom, AbelianHom):
        return tuple(hom.image_vectors())
    return None


def incident_edge_groups(gamma: GraphOfGroups, v: str) -> list:
    """One image ``i_e(G_e)`` per oriented edge with origin ``v`` (with multiplicity)."""
    gamma.vertex(v)
    out = []
    for oe in gamma.incident(v):
        sub = image_of(oe)
        conj = sub.parent.identity if isinstance(sub, Subgroup) else None
        out.append(IncidentGroup(oe, sub, oe.inclusion.at, conj))
    return out


def member_subgroup(gamma, member: FamilyMember):
    G = gamma.vertex(member.vertex).group
    if not isinstance(G, FiniteGroup):
        return member.elements
    if member.elements == "all":
        from .finite import whole
        return whole(G)
    from .finite import generated
    return generated(G, [G.element(n) for n in member.elements])


def induced_structure(gamma: GraphOfGroups, v: str, family) -> list:
    """Members of ``family`` conjugated into ``G_v`` that fix no edge.

    Each member must carry its vertex and ``edge_free`` flag; members elliptic
    at another vertex or fixing an edge are excluded.
    """
    gamma.vertex(v)
    out = []
    for m in family:
        if m.vertex is None or m.edge_free is None:
            raise GogError(f"family member {m.name} lacks ellipticity data (vertex and edge_free flag)")
        if m.vertex != v or not m.edge_free:
            continue
        out.append(m)
    return out


def edge_free_consistent(gamma: GraphOfGroups, member: FamilyMember) -> Optional[bool]:
    """For finite vertex groups: does the member really fix no edge?  None if undecidable here."""
    G = gamma.vertex(member.vertex).group
    if not isinstance(G, FiniteGroup):
        return None
    P = member_subgroup(gamma, member)
    for inc in incident_edge_groups(gamma, member.vertex):
        if not isinstance(inc.subgroup, Subgroup):
            return None
        for g in range(G.order):
            if all(G.conj(g, p) in inc.subgroup for p in P.elements):
                return False
    return True


# -- collapse and refine --------------------------------------------------------

def _components(gamma, edge_names):
    parent = {v.name: v.name for v in gamma.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for name in edge_names:
        e = gamma.edge(name)
        a, b = find(e.origin), find(e.terminus)
        if a != b:
            parent[b] = a
    comps = {}
    for v in gamma.vertices:
        comps.setdefault(find(v.name), []).append(v.name)
    return list(comps.values())


def collapse(gamma: GraphOfGroups, edge_names) -> GraphOfGroups:
    """Collapse a set of edges; each collapsed region becomes one composite vertex.

    Returns the new graph.  Composite vertices are named by joining the member
    vertex names with ``+``; a composite keeps the collapsed edges inside it.
    """
    edge_names = {n.lstrip("~") for n in edge_names}
    for n in edge_names:
        gamma.edge(n)
    if not edge_names:
        return gamma
    comps = _components(gamma, edge_names)
    where = {}  # old vertex -> (new vertex name, path prefix)
    new_vertices = []
    for comp in comps:
        inner_edges = [e for e in gamma.edges if e.name in edge_names and e.origin in comp]
        if not inner_edges:
            v = gamma.vertex(comp[0])
            new_vertices.append(v)
            where[v.name] = (v.name, ())
            continue
        name = "+".join(comp)
        sub = GraphOfGroups(tuple(gamma.vertex(n) for n in comp), tuple(inner_edges),
                            directives=(("class", "finite"),) if all(
                                isinstance(gamma.vertex(n).group, FiniteGroup) for n in comp) else ())
        new_vertices.append(Vertex(name, Composite(sub)))
        for n in comp:
            where[n] = (name, (n,))
    new_edges = []
    for e in gamma.edges:
        if e.name in edge_names:
            continue
        o, po = where[e.origin]
        t, pt = where[e.terminus]
        new_edges.append(Edge(e.name, e.group, o, t,
                              Inclusion(e.left.hom, po + e.left.at),
                              Inclusion(e.right.hom, pt + e.right.at)))
    return GraphOfGroups(tuple(new_vertices), tuple(new_edges), gamma.families, gamma.directives, gamma.groups)


def collapse_all_but(gamma: GraphOfGroups, keep: str) -> GraphOfGroups:
    return collapse(gamma, [e.name for e in gamma.edges if e.name != keep.lstrip("~")])


def refine_at_vertex(gamma: GraphOfGroups, v: str, sub: Optional[GraphOfGroups] = None,
                     attachment: Optional[dict] = None) -> GraphOfGroups:
    """Replace vertex ``v`` by the graph of groups ``sub``.

    ``attachment`` maps each oriented edge name with origin ``v`` to
    ``(sub-vertex name, hom)`` where ``hom`` embeds the edge group into that
    sub-vertex group.  For a composite vertex refined by its own graph the
    attachment is read off the stored paths.
    """
    vert = gamma.vertex(v)
    if sub is None:
        if not isinstance(vert.group, Composite):
            raise GogError(f"vertex {v} is not composite; supply the refining graph")
        sub = vert.group.graph
    clash = {n for n in sub.vertex_names if n != v and gamma.has_vertex(n)}
    clash |= {e.name for e in sub.edges if e.name in gamma._eindex}
    if clash:
        raise GogError(f"names {sorted(clash)} already used in the ambient graph")
    attachment = dict(attachment or {})
    new_edges = []
    for e in gamma.edges:
        left, right = e.left, e.right
        o, t = e.origin, e.terminus
        if o == v:
            o, left = _attach(sub, vert, OrientedEdge(e, False), attachment)
        if t == v:
            t, right = _attach(sub, vert, OrientedEdge(e, True), attachment)
        new_edges.append(Edge(e.name, e.group, o, t, left, right))
    verts = []
    for w in gamma.vertices:
        if w.name == v:
            verts.extend(sub.vertices)
        else:
            verts.append(w)
    return GraphOfGroups(tuple(verts), tuple(sub.edges) + tuple(new_edges), gamma.families,
                         gamma.directives, gamma.groups)


def _attach(sub, vert, oe, attachment):
    if oe.name in attachment:
        target, hom = attachment[oe.name]
        G = sub.vertex(target).group
        if isinstance(hom, GroupHom) and isinstance(G, FiniteGroup):
            if hom.target is not G and hom.target.table != G.table:
                raise GogError(f"attachment of {oe.name}: map does not land in {target}")
            if not hom.is_injective() or not hom.is_homomorphism():
                raise GogError(f"attachment of {oe.name}: edge group is not contained in {target}")
        elif hom is not None and not isinstance(hom, (GroupHom, AbelianHom)):
            raise GogError(f"attachment of {oe.name}: not a homomorphism")
        return target, Inclusion(hom, ())
    inc = oe.inclusion
    if isinstance(vert.group, Composite) and inc.at:
        return inc.at[0], Inclusion(inc.hom, inc.at[1:])
    raise GogError(f"edge {oe.name} has no attachment into the refining graph")


# -- composites ----------------------------------------------------------------

def flatten(gamma: GraphOfGroups) -> GraphOfGroups:
    """Expand all composite vertices recursively into one graph of groups."""
    while any(isinstance(v.group, Composite) for v in gamma.vertices):
        v = next(v for v in gamma.vertices if isinstance(v.group, Composite))
        sub = v.group.graph
        rename = {}
        used = {w.name for w in gamma.vertices if w.name != v.name} | set(gamma._eindex)
        for w in sub.vertices:
            rename[w.name] = w.name if w.name not in used else f"{v.name}/{w.name}"
        erename = {}
        for e in sub.edges:
            erename[e.name] = e.name if e.name not in used else f"{v.name}/{e.name}"
        sub = _rename(sub, rename, erename)
        att = {}
        for oe in gamma.incident(v.name):
            inc = oe.inclusion
            if not inc.at:
                raise GogError(f"edge {oe.name} is not attached to a sub-vertex of {v.name}")
            att[oe.name] = (rename[inc.at[0]], inc.hom, inc.at[1:])
        new_edges = []
        for e in gamma.edges:
            left, right, o, t = e.left, e.right, e.origin, e.terminus
            if o == v.name:
                tgt, hom, rest = att[e.name]
                o, left = tgt, Inclusion(hom, rest)
            if t == v.name:
                tgt, hom, rest = att["~" + e.name]
                t, right = tgt, Inclusion(hom, rest)
            new_edges.append(Edge(e.name, e.group, o, t, left, right))
        verts = []
        for w in gamma.vertices:
            verts.extend(sub.vertices if w.name == v.name else [w])
        gamma = GraphOfGroups(tuple(verts), tuple(sub.edges) + tuple(new_edges), gamma.families,
                              gamma.directives, gamma.groups)
    return gamma


def _rename(gamma, vmap, emap):
    verts = tuple(replace(v, name=vmap.get(v.name, v.name)) for v in gamma.vertices)
    edges = tuple(replace(e, name=emap.get(e.name, e.name), origin=vmap.get(e.origin, e.origin),
                          terminus=vmap.get(e.terminus, e.terminus)) for e in gamma.edges)
    return GraphOfGroups(verts, edges, gamma.families, gamma.directives, gamma.groups)


# -- reduction of graphs of finite groups ------------------------------------------

def reducible_edges(gamma: GraphOfGroups) -> list:
    """Edges with distinct endpoints whose group fills an endpoint group (finite case)."""
    out = []
    for e in gamma.edges:
        if e.origin == e.terminus:
            continue
        for oe in (OrientedEdge(e, False), OrientedEdge(e, True)):
            G = gamma.vertex(oe.origin).group
            if isinstance(G, FiniteGroup) and isinstance(e.group, FiniteGroup) and not oe.inclusion.at \
                    and e.group.order == G.order:
                out.append(oe)
                break
    return out


def reduce_tracked(gamma: GraphOfGroups):
    """Collapse reducible edges until none remain.

    Returns ``(reduced graph, where)``; ``where[v] = (w, hom)`` says that the
    old vertex group of ``v`` now sits inside vertex ``w`` via ``hom``.
    """
    where = {v.name: (v.name, None) for v in gamma.vertices
             if isinstance(v.group, FiniteGroup)}
    while True:
        red = reducible_edges(gamma)
        if not red:
            return gamma, where
        oe = red[0]
        gamma, phi = _absorb(gamma, oe)
        v, w = oe.origin, oe.terminus
        for old, (cur, hom) in list(where.items()):
            if cur == v:
                where[old] = (w, phi if hom is None else phi.compose(hom))


def _absorb(gamma, oe):
    """Collapse edge ``oe`` whose group fills its origin; the origin merges into the terminus."""
    v, w = oe.origin, oe.terminus
    to_edge = GroupHom(oe.inclusion.hom.target, oe.group,
                       [oe.inclusion.hom.preimage(g) for g in range(oe.inclusion.hom.target.order)])
    phi = oe.far_inclusion.hom.compose(to_edge)  # G_v -> G_w
    edges = []
    for e in gamma.edges:
        if e is oe.edge:
            continue
        left, right, o, t = e.left, e.right, e.origin, e.terminus
        if o == v:
            o, left = w, _push(left, phi, oe.far_inclusion.at)
        if t == v:
            t, right = w, _push(right, phi, oe.far_inclusion.at)
        edges.append(Edge(e.name, e.group, o, t, left, right))
    verts = tuple(x for x in gamma.vertices if x.name != v)
    return GraphOfGroups(verts, tuple(edges), gamma.families, gamma.directives, gamma.groups), phi


def _push(inc, phi, at):
    if inc.at:
        raise GogError("cannot push an attachment through a composite vertex")
    return Inclusion(phi.compose(inc.hom), at)


def composite_is_finite(sub: GraphOfGroups) -> bool:
    """A graph of finite groups has finite fundamental group iff it reduces to one vertex."""
    flat = flatten(sub)
    if not flat.is_finite_groups():
        return False
    red, _ = reduce_tracked(flat)
    return not red.edges


def simplify_composites(gamma: GraphOfGroups) -> GraphOfGroups:
    """Replace composite vertices with finite fundamental group by that finite group."""
    verts = []
    repl = {}
    for v in gamma.vertices:
        if isinstance(v.group, Composite):
            flat = flatten(v.group.graph)
            if flat.is_finite_groups():
                red, where = reduce_tracked(flat)
                if not red.edges:
                    only = red.vertices[0]
                    verts.append(Vertex(v.name, only.group, v.annotation))
                    repl[v.name] = (flat, where)
                    continue
        verts.append(v)
    if not repl:
        return gamma
    edges = []
    for e in gamma.edges:
        left, right = e.left, e.right
        if e.origin in repl:
            left = _collapse_path(left, *repl[e.origin])
        if e.terminus in repl:
            right = _collapse_path(right, *repl[e.terminus])
        edges.append(Edge(e.name, e.group, e.origin, e.terminus, left, right))
    return GraphOfGroups(tuple(verts), tuple(edges), gamma.families, gamma.directives, gamma.groups)


def _collapse_path(inc, flat, where):
    # after flattening, nested names are unique leaf names
    leaf = inc.at[-1] if inc.at else None
    if leaf is None or leaf not in where:
        cands = [n for n in where if n.endswith("/" + str(leaf))]
        if not cands:
            raise GogError("cannot locate attachment inside composite")
        leaf = cands[0]
    _, hom = where[leaf]
    return Inclusion(inc.hom if hom is None else hom.compose(inc.hom), ())


def edge_image_conjugate(G: FiniteGroup, H1: Subgroup, H2: Subgroup):
    return conjugate_subgroups(G, H1, H2)


def vertex_order_multiset(gamma):
    return sorted(v.group.signature for v in gamma.vertices if isinstance(v.group, FiniteGroup))


def edge_order_multiset(gamma):
    return sorted(e.group.signature for e in gamma.edges if isinstance(e.group, FiniteGroup))


def pairs(iterable):
    return itertools.combinations(iterable, 2)


# -- composites with flat sub-graphs -----------------------------------------------

def flatten_paths(graph: GraphOfGroups, sep="/"):
    """Flatten nested composites, naming nested pieces by their joined path.

    Returns ``(flat graph, pathmap)`` where ``pathmap[path] = flat vertex name``
    for every path of sub-vertex names reaching a non-composite vertex.
    """
    pathmap = {}
    verts, edges = [], []

    def resolve(prefix, inc, vname):
        path = (vname,) + tuple(inc.at)
        full = prefix + path
        # descend until a non-composite vertex
        for cut in range(len(full), 0, -1):
            if full[:cut] in pathmap:
                return Inclusion(inc.hom, full[cut:]) if full[cut:] else Inclusion(inc.hom), pathmap[full[:cut]]
        raise GogError(f"cannot resolve attachment path {full}")

    def walk(g, prefix):
        for v in g.vertices:
            p = prefix + (v.name,)
            if isinstance(v.group, Composite):
                walk(v.group.graph, p)
            else:
                name = sep.join(p)
                pathmap[p] = name
                verts.append(Vertex(name, v.group, v.annotation))
        for e in g.edges:
            left, o = resolve(prefix, e.left, e.origin)
            right, t = resolve(prefix, e.right, e.terminus)
            edges.append(Edge(sep.join(prefix + (e.name,)), e.group, o, t, left, right))

    walk(graph, ())
    return GraphOfGroups(tuple(verts), tuple(edges), graph.families, graph.directives, graph.groups), pathmap


def _resolve_at(pathmap, at):
    for cut in range(len(at), 0, -1):
        if tuple(at[:cut]) in pathmap:
            return pathmap[tuple(at[:cut])], tuple(at[cut:])
    raise GogError(f"cannot resolve attachment path {at}")


def tidy(gamma: GraphOfGroups, reduce_inside=True) -> GraphOfGroups:
    """Flatten each composite vertex, reduce its sub-graph and remap attachments.

    A composite whose sub-graph reduces to one vertex becomes that finite group.
    """
    new_vertices = list(gamma.vertices)
    remap = {}
    for i, v in enumerate(gamma.vertices):
        if not isinstance(v.group, Composite):
            continue
        flat, pathmap = flatten_paths(v.group.graph)
        where = {}
        if reduce_inside and flat.is_finite_groups():
            flat, where = reduce_tracked(flat)
        if not flat.edges and len(flat.vertices) == 1 and isinstance(flat.vertices[0].group, FiniteGroup):
            new_vertices[i] = Vertex(v.name, flat.vertices[0].group, v.annotation)
            remap[v.name] = (pathmap, where, True)
        else:
            new_vertices[i] = Vertex(v.name, Composite(flat), v.annotation)
            remap[v.name] = (pathmap, where, False)

    def fix(inc, vname):
        if vname not in remap:
            return inc
        pathmap, where, collapsed = remap[vname]
        if not inc.at:
            return inc
        w, rest = _resolve_at(pathmap, inc.at)
        hom = inc.hom
        if w in where:
            w, phi = where[w]
            if phi is not None and hom is not None:
                hom = phi.compose(hom)
        return Inclusion(hom, () if collapsed else (w,) + rest)

    edges = tuple(Edge(e.name, e.group, e.origin, e.terminus, fix(e.left, e.origin), fix(e.right, e.terminus))
                  for e in gamma.edges)
    return GraphOfGroups(tuple(new_vertices), edges, gamma.families, gamma.directives, gamma.groups)


def flatten_composites(gamma: GraphOfGroups) -> GraphOfGroups:
    """Make every composite vertex carry a flat sub-graph (no reduction)."""
    return tidy(gamma, reduce_inside=False)
