"""Elements of fundamental groups of graphs of groups.

Words live in the fundamental groupoid: a word ``g0 e1 g1 e2 ... en gn`` is a
path starting at ``start`` with ``g_i`` in the vertex group at the origin of
``e_{i+1}``.  The defining relations are ``i_e(c) e = e i_ē(c)`` and
``e ē = 1``; normal forms use the smallest element of each left coset
``g i_e(G_e)`` as transversal.

The same engine drives the fixed-subtree searches: for a finite subgroup
``A`` of a vertex group, the subtree fixed by ``A`` modulo its normalizer (or
centralizer) is computed as a graph of finite groups whose fundamental group
is ``N_G(A)`` (or ``Z_G(A)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .abelian import FgAbelianGroup, column_hermite, reduce_mod
from .finite import FiniteGroup, GroupHom, Subgroup, subgroup_as_group
from .gog import (AbelianHom, Composite, Edge, GogError, GraphOfGroups, Inclusion, OrientedEdge,
                  Vertex, flatten, reduce_tracked)
from .verdict import Certificate, finite, infinite


class WordError(ValueError):
    pass


def _bar(name):
    return name[1:] if name.startswith("~") else "~" + name


@dataclass(frozen=True)
class GogWord:
    """``letters`` is a tuple of ``(element, oriented edge name)``; ``last`` closes the path."""

    start: str
    letters: tuple
    last: object

    def __len__(self):
        return len(self.letters)

    @property
    def edges(self):
        return tuple(e for _, e in self.letters)


# -- per-vertex arithmetic ---------------------------------------------------------

class _FiniteOps:
    def __init__(self, G: FiniteGroup):
        self.G = G
        self.identity = G.identity

    def mul(self, a, b):
        return self.G.mul(a, b)

    def inv(self, a):
        return self.G.inv(a)

    def name(self, a):
        return self.G.names[a]


class _AbelianOps:
    def __init__(self, A: FgAbelianGroup):
        if A.torsion:
            raise WordError("abelian vertex groups must be torsion-free for normal forms")
        self.A = A
        self.identity = A.zero()

    def mul(self, a, b):
        return self.A.add(a, b)

    def inv(self, a):
        return self.A.neg(a)

    def name(self, a):
        return "(" + ",".join(map(str, a)) + ")"


class _FiniteEdge:
    def __init__(self, hom: GroupHom):
        G = hom.target
        image = hom.image().elements
        self.hom = hom
        self.split_table = {}
        reps = []
        for g in range(G.order):
            t = min(G.mul(g, h) for h in image)
            if t == g:
                reps.append(t)
            self.split_table[g] = (t, hom.preimage(G.mul(G.inv(t), g)))
        self.transversal = reps
        self.edge_identity = hom.source.identity

    def split(self, g):
        return self.split_table[g]

    def embed(self, c):
        return self.hom(c)


class _AbelianEdge:
    def __init__(self, hom: AbelianHom):
        if hom.source.torsion or hom.target.torsion:
            raise WordError("abelian edge inclusions must be between torsion-free groups")
        dim, k = hom.target.ngens, hom.source.ngens
        aug = [list(col) + [int(i == j) for j in range(k)] for i, col in enumerate(hom.columns)]
        self.basis = column_hermite(aug, dim)
        self.hom = hom
        self.dim = dim
        self.transversal = None  # infinite index in general
        self.edge_identity = hom.source.zero()

    def split(self, g):
        red = reduce_mod(tuple(g) + (0,) * self.hom.source.ngens, self.basis)
        return tuple(red[:self.dim]), tuple(-x for x in red[self.dim:])

    def embed(self, c):
        return self.hom(c)


# -- the engine --------------------------------------------------------------------

class WordEngine:
    """Normal forms and tree geometry for a graph of finite (or free abelian) groups."""

    def __init__(self, gamma: GraphOfGroups):
        if any(isinstance(v.group, Composite) for v in gamma.vertices):
            gamma = flatten(gamma)
        self.gamma = gamma
        self.vops = {}
        for v in gamma.vertices:
            if isinstance(v.group, FiniteGroup):
                self.vops[v.name] = _FiniteOps(v.group)
            elif isinstance(v.group, FgAbelianGroup):
                self.vops[v.name] = _AbelianOps(v.group)
            else:
                raise WordError(f"vertex {v.name}: normal forms need explicit vertex groups")
        self.eops = {}
        self.origin = {}
        self.terminus = {}
        for oe in gamma.oriented_edges():
            hom = oe.inclusion.hom
            if isinstance(hom, GroupHom):
                self.eops[oe.name] = _FiniteEdge(hom)
            elif isinstance(hom, AbelianHom):
                self.eops[oe.name] = _AbelianEdge(hom)
            else:
                raise WordError(f"edge {oe.name}: inclusion is not explicit")
            self.origin[oe.name] = oe.origin
            self.terminus[oe.name] = oe.terminus
        self.out_edges = {v.name: [oe.name for oe in gamma.incident(v.name)] for v in gamma.vertices}

    # -- construction helpers ----------------------------------------------------
    def identity(self, v) -> GogWord:
        return GogWord(v, (), self.vops[v].identity)

    def element(self, v, g) -> GogWord:
        return GogWord(v, (), g)

    def letter(self, e) -> GogWord:
        o, t = self.origin[e], self.terminus[e]
        return GogWord(o, ((self.vops[o].identity, e),), self.vops[t].identity)

    def end(self, w: GogWord):
        return self.terminus[w.letters[-1][1]] if w.letters else w.start

    def check(self, w: GogWord):
        v = w.start
        for _, e in w.letters:
            if self.origin.get(e) != v:
                raise WordError(f"letter {e} does not start at {v}")
            v = self.terminus[e]
        return v

    def word(self, start, *items) -> GogWord:
        """Build a word from alternating items; vertex elements may be omitted.

        ``engine.word("a", "r", "e1", "s", "~e1")`` is ``r e1 s ~e1``.  Strings that
        name oriented edges are letters, anything else is a vertex element
        (strings are looked up by element name).
        """
        letters = []
        v = start
        pending = None
        for item in items:
            if isinstance(item, str) and (item in self.origin):
                g = self.vops[v].identity if pending is None else pending
                if self.origin[item] != v:
                    raise WordError(f"letter {item} does not start at {v}")
                letters.append((g, item))
                v = self.terminus[item]
                pending = None
            else:
                g = self._element(v, item)
                pending = g if pending is None else self.vops[v].mul(pending, g)
        last = self.vops[v].identity if pending is None else pending
        return GogWord(start, tuple(letters), last)

    def _element(self, v, item):
        ops = self.vops[v]
        if isinstance(ops, _FiniteOps) and isinstance(item, str):
            return ops.G.element(item)
        if isinstance(ops, _AbelianOps):
            return ops.A.normalize(item)
        return item

    # -- arithmetic ----------------------------------------------------------------
    def concat(self, u: GogWord, w: GogWord) -> GogWord:
        if self.end(u) != w.start:
            raise WordError("paths do not compose")
        ops = self.vops[w.start]
        if not w.letters:
            return GogWord(u.start, u.letters, ops.mul(u.last, w.last))
        (g0, e0), rest = w.letters[0], w.letters[1:]
        return GogWord(u.start, u.letters + ((ops.mul(u.last, g0), e0),) + rest, w.last)

    def multiply(self, *words) -> GogWord:
        out = words[0]
        for w in words[1:]:
            out = self.concat(out, w)
        return self.normal_form(out)

    def inverse(self, w: GogWord) -> GogWord:
        end = self.end(w)
        elems = [g for g, _ in w.letters] + [w.last]
        verts = [w.start] + [self.terminus[e] for _, e in w.letters]
        inv = [self.vops[v].inv(g) for v, g in zip(verts, elems)]
        inv.reverse()
        edges = [_bar(e) for _, e in reversed(w.letters)]
        return GogWord(end, tuple(zip(inv[:-1], edges)), inv[-1])

    def normal_form(self, w: GogWord) -> GogWord:
        """Reduced form: no ``e c ē`` with ``c`` in the edge image; transversal letters."""
        self.check(w)
        elems = [g for g, _ in w.letters] + [w.last]
        stack = []
        cur = elems[0]
        for i, (_, e) in enumerate(w.letters):
            nxt = elems[i + 1]
            o = self.origin[e]
            t, c = self.eops[e].split(cur)
            if stack and stack[-1][1] == _bar(e) and t == self.vops[o].identity:
                tp, ep = stack.pop()
                po = self.origin[ep]
                cur = self.vops[po].mul(self.vops[po].mul(tp, self.eops[ep].embed(c)), nxt)
            else:
                stack.append((t, e))
                tv = self.terminus[e]
                cur = self.vops[tv].mul(self.eops[_bar(e)].embed(c), nxt)
        return GogWord(w.start, tuple(stack), cur)

    def is_trivial(self, w: GogWord) -> bool:
        nf = self.normal_form(w)
        return not nf.letters and nf.last == self.vops[nf.start].identity

    def equal(self, u: GogWord, w: GogWord) -> bool:
        return self.normal_form(u) == self.normal_form(w)

    def conjugate(self, x: GogWord, w: GogWord) -> GogWord:
        """``x w x^-1``."""
        return self.multiply(x, w, self.inverse(x))

    def commutes(self, u: GogWord, w: GogWord) -> bool:
        return self.equal(self.concat(u, w), self.concat(w, u))

    # -- geometry ------------------------------------------------------------------
    def is_elliptic(self, w: GogWord) -> "Ellipticity":
        """Cyclically reduce a loop; elliptic iff the reduced length is zero."""
        if self.end(w) != w.start:
            raise WordError("is_elliptic needs a loop")
        cur = self.normal_form(w)
        conj = self.identity(w.start)
        while cur.letters:
            first = GogWord(cur.start, (cur.letters[0],), self.vops[self.terminus[cur.letters[0][1]]].identity)
            shorter = self.normal_form(self.concat(self.concat(self.inverse(first), cur), first))
            if len(shorter) >= len(cur):
                return Ellipticity(False, None, len(cur), self.normal_form(conj), cur)
            conj = self.concat(conj, first)
            cur = shorter
        conj = self.normal_form(conj)
        return Ellipticity(True, conj.letters, 0, conj, cur)

    def path_word(self, key, start=None) -> GogWord:
        start = self.gamma.vertices[0].name if start is None else start
        end = self.terminus[key[-1][1]] if key else start
        return GogWord(start, tuple(key), self.vops[end].identity)

    def act(self, w: GogWord, key) -> tuple:
        """Image of the tree vertex ``key`` (a reduced path from ``w.start``) under ``w``."""
        return self.normal_form(self.concat(w, self.path_word(key, w.start))).letters

    def neighbours(self, key, start):
        end = self.terminus[key[-1][1]] if key else start
        last = key[-1][1] if key else None
        for e in self.out_edges[end]:
            trans = self.eops[e].transversal
            if trans is None:
                raise WordError("tree balls need finite vertex groups")
            for t in trans:
                if last is not None and e == _bar(last) and t == self.vops[end].identity:
                    continue
                yield key + ((t, e),)

    def ball(self, start, radius, limit=None):
        """Vertices of the Bass–Serre tree within ``radius`` of the base vertex at ``start``."""
        out = [()]
        frontier = [()]
        for _ in range(radius):
            nxt = []
            for key in frontier:
                for k2 in self.neighbours(key, start):
                    nxt.append(k2)
                    if limit is not None and len(out) + len(nxt) >= limit:
                        return out + nxt
            out += nxt
            frontier = nxt
        return out

    def format(self, w: GogWord) -> str:
        parts = []
        v = w.start
        for g, e in w.letters:
            if g != self.vops[v].identity:
                parts.append(self.vops[v].name(g))
            parts.append(e)
            v = self.terminus[e]
        if w.last != self.vops[v].identity or not parts:
            parts.append(self.vops[v].name(w.last))
        return " ".join(parts)


@dataclass(frozen=True)
class Ellipticity:
    elliptic: bool
    vertex: Optional[tuple]  # tree vertex fixed (reduced path from the base), if elliptic
    translation_length: int
    conjugator: GogWord
    core: GogWord  # cyclically reduced conjugate

    def __bool__(self):
        return self.elliptic


# -- fixed-subtree fragments ---------------------------------------------------------

@dataclass
class _State:
    name: str
    vertex: str
    label: tuple
    stabilizer: Subgroup
    group: FiniteGroup
    incl: GroupHom  # group -> G_vertex


@dataclass
class _FEdge:
    name: str
    edge: str  # oriented edge of the ambient graph
    origin: str
    terminus: str
    g: int  # conjugator at the origin vertex group
    h: int  # conjugator at the terminus vertex group
    stabilizer: Subgroup
    group: FiniteGroup
    incl: GroupHom


@dataclass
class Fragment:
    """Graph of finite groups presenting ``N_G(A)`` or ``Z_G(A)``.

    ``graph`` is the fragment; ``base`` its vertex over the starting vertex;
    ``states``/``edges`` record how each piece sits inside the ambient graph so
    that fragment words translate back to ambient words.
    """

    mode: str
    ambient: GraphOfGroups
    vertex: str
    subgroup: Subgroup
    graph: GraphOfGroups
    base: str
    states: dict
    edges: dict = field(default_factory=dict)

    def to_ambient(self, engine: WordEngine, w: GogWord) -> GogWord:
        """Translate a fragment word into the ambient groupoid."""
        st = self.states[w.start]
        out = engine.element(st.vertex, st.incl(w.letters[0][0] if w.letters else w.last))
        cur = w.start
        elems = [g for g, _ in w.letters] + [w.last]
        for i, (_, f) in enumerate(w.letters):
            fe = self.edges[f.lstrip("~")]
            rev = f.startswith("~")
            if not rev:
                g, e, h, far = fe.g, fe.edge, fe.h, fe.terminus
            else:
                g, e, h, far = fe.h, _bar(fe.edge), fe.g, fe.origin
            o = engine.origin[e]
            t = engine.terminus[e]
            step = GogWord(o, ((g, e),), engine.vops[t].inv(h))
            out = engine.concat(out, step)
            cur = far
            sf = self.states[cur]
            out = engine.concat(out, engine.element(sf.vertex, sf.incl(elems[i + 1])))
        return engine.normal_form(out)

    def is_finite(self):
        red, _ = reduce_tracked(self.graph)
        return not red.edges

    def locate(self, u, label):
        """The state over ``u`` whose label is conjugate to ``label``, with the conjugator."""
        G = self.ambient.vertex(u).group
        if self.mode == "normalizer":
            label = tuple(sorted(label))
        key = _canonical(G, label, self.mode)
        for st in self.states.values():
            if st.vertex == u and _canonical(G, st.label, self.mode) == key:
                h = next(g for g in range(G.order) if _label_conj(G, g, label, self.mode) == st.label)
                return st, h
        return None

    def covers(self):
        """True when the fragment is the whole ambient graph (so ``A`` is normal, resp. central)."""
        per_vertex = {}
        for st in self.states.values():
            per_vertex.setdefault(st.vertex, []).append(st)
        if set(per_vertex) != set(self.ambient.vertex_names):
            return False
        if any(len(sts) != 1 or len(sts[0].stabilizer) != self.ambient.vertex(u).group.order
               for u, sts in per_vertex.items()):
            return False
        per_edge = {}
        for fe in self.edges.values():
            per_edge.setdefault(fe.edge.lstrip("~"), []).append(fe)
        return set(per_edge) == {e.name for e in self.ambient.edges} and \
            all(len(x) == 1 and len(x[0].stabilizer) == self.ambient.edge(e).group.order for e, x in per_edge.items())


def _label_conj(G, g, label, mode):
    img = tuple(G.conj(g, x) for x in label)
    return tuple(sorted(img)) if mode == "normalizer" else img


def _canonical(G, label, mode):
    return min(_label_conj(G, g, label, mode) for g in range(G.order))


def _stabilizer(G, label, mode):
    return Subgroup(G, (g for g in range(G.order) if _label_conj(G, g, label, mode) == label))


def fixed_fragment(gamma: GraphOfGroups, v: str, A: Subgroup, mode: str = "normalizer") -> Fragment:
    """Quotient of the subtree fixed by ``A`` by its normalizer (or centralizer).

    ``mode`` is ``"normalizer"`` or ``"centralizer"``.  Vertex groups are
    ``N_{G_u}(A')`` (resp. ``Z_{G_u}(ψ(A))``) over the conjugates met along the
    fixed subtree; edges follow the cosets of incident edge groups containing
    the current conjugate.
    """
    if mode not in ("normalizer", "centralizer"):
        raise ValueError(mode)
    if any(isinstance(x.group, Composite) for x in gamma.vertices):
        gamma = flatten(gamma)
    G0 = gamma.vertex(v).group
    if not isinstance(G0, FiniteGroup) or not gamma.is_finite_groups():
        raise WordError("fixed subtrees are computed for graphs of finite groups")
    if A.parent.table != G0.table or not A.is_closed():
        raise WordError(f"A is not a subgroup of the vertex group at {v}")
    base_label = tuple(A.elements)
    states = {}  # name -> _State
    by_key = {}  # (vertex, canonical label) -> name
    counts = {}
    fedges = {}
    seen_edges = {}

    def new_state(u, label):
        G = gamma.vertex(u).group
        counts[u] = counts.get(u, 0) + 1
        name = f"{u}#{counts[u]}"
        stab = _stabilizer(G, label, mode)
        K, incl = subgroup_as_group(stab)
        st = _State(name, u, label, stab, K, incl)
        states[name] = st
        by_key[(u, _canonical(G, label, mode))] = name
        return st

    def locate(u, label):
        """Return (state, h) with h·label·h^-1 == state.label, creating the state if new."""
        G = gamma.vertex(u).group
        key = (u, _canonical(G, label, mode))
        if key not in by_key:
            return new_state(u, label), G.identity, True
        st = states[by_key[key]]
        h = next(g for g in range(G.order) if _label_conj(G, g, label, mode) == st.label)
        return st, h, False

    start = new_state(v, base_label)
    queue = [start]
    while queue:
        st = queue.pop(0)
        G = gamma.vertex(st.vertex).group
        for oe in gamma.incident(st.vertex):
            hom = oe.inclusion.hom
            image = hom.image()
            Ge = oe.group
            done = set()
            for g in range(G.order):
                if g in done:
                    continue
                gi = G.inv(g)
                moved = [G.conj(gi, x) for x in st.label]
                if not all(x in image for x in moved):
                    continue
                for z in st.stabilizer.elements:
                    for c in image.elements:
                        done.add(G.mul(G.mul(z, g), c))
                beta = tuple(hom.preimage(x) for x in moved)
                if mode == "normalizer":
                    beta = tuple(sorted(beta))
                ekey = (oe.edge.name, _canonical(Ge, beta, mode))
                if ekey in seen_edges:
                    continue
                far_label = tuple(oe.far_inclusion.hom(x) for x in beta)
                if mode == "normalizer":
                    far_label = tuple(sorted(far_label))
                far, h, fresh = locate(oe.terminus, far_label)
                if fresh:
                    queue.append(far)
                estab = _stabilizer(Ge, beta, mode)
                K, incl = subgroup_as_group(estab)
                fname = f"{oe.edge.name}#{len(fedges) + 1}"
                fe = _FEdge(fname, oe.name, st.name, far.name, g, h, estab, K, incl)
                fedges[fname] = fe
                seen_edges[ekey] = fname
    return _assemble(gamma, v, A, mode, states, fedges, start.name)


def _assemble(gamma, v, A, mode, states, fedges, base):
    # readable names: vertex name alone when unique, else v.1, v.2 ...
    per_vertex = {}
    for st in states.values():
        per_vertex.setdefault(st.vertex, []).append(st.name)
    rename = {}
    for u, names in per_vertex.items():
        for i, n in enumerate(names, 1):
            rename[n] = u if len(names) == 1 else f"{u}.{i}"
    per_edge = {}
    for fe in fedges.values():
        per_edge.setdefault(fe.edge.lstrip("~"), []).append(fe.name)
    erename = {}
    for e, names in per_edge.items():
        for i, n in enumerate(names, 1):
            erename[n] = e if len(names) == 1 else f"{e}.{i}"
    vertices = []
    new_states = {}
    for name, st in states.items():
        st.name = rename[name]
        new_states[st.name] = st
        vertices.append(Vertex(st.name, st.group))
    edges = []
    new_edges = {}
    for name, fe in fedges.items():
        so, stt = states[fe.origin], states[fe.terminus]
        oe = gamma.oriented(fe.edge)
        Go = gamma.vertex(oe.origin).group
        Gt = gamma.vertex(oe.terminus).group
        ihom, jhom = oe.inclusion.hom, oe.far_inclusion.hom
        left = GroupHom(fe.group, so.group,
                        [so.incl.preimage(Go.conj(fe.g, ihom(fe.incl(x)))) for x in range(fe.group.order)])
        right = GroupHom(fe.group, stt.group,
                         [stt.incl.preimage(Gt.conj(fe.h, jhom(fe.incl(x)))) for x in range(fe.group.order)])
        fe.name = erename[name]
        fe.origin, fe.terminus = so.name, stt.name
        new_edges[fe.name] = fe
        edges.append(Edge(fe.name, fe.group, so.name, stt.name, Inclusion(left), Inclusion(right)))
    graph = GraphOfGroups(tuple(vertices), tuple(edges), directives=(("class", "finite"),))
    return Fragment(mode, gamma, v, A, graph, rename[base], new_states, new_edges)


def normalizer_subgraph(gamma: GraphOfGroups, v: str, A: Subgroup) -> Fragment:
    """Graph of finite groups presenting ``N_G(A)`` for ``A`` inside ``G_v``."""
    return fixed_fragment(gamma, v, A, "normalizer")


def centralizer_fragment(gamma: GraphOfGroups, v: str, A: Subgroup) -> Fragment:
    return fixed_fragment(gamma, v, A, "centralizer")


# -- infinite-order witnesses ----------------------------------------------------------

def hyperbolic_word(graph: GraphOfGroups, base: str):
    """A hyperbolic loop at ``base`` in a graph of finite groups, or None if π₁ is finite."""
    engine = WordEngine(graph)
    red, where = reduce_tracked(graph)
    if not red.edges:
        return None
    tree = _spanning_tree(graph, base)
    if graph.betti_number() > 0:
        tree_edges = {e for e in tree.values() if e is not None}
        for e in graph.edges:
            if e.name not in tree_edges:
                p = _tree_path(graph, tree, base, e.origin)
                q = _tree_path(graph, tree, base, e.terminus)
                w = engine.path_word(tuple((engine.vops[engine.origin[x]].identity, x) for x in p + [e.name]
                                           + [_bar(y) for y in reversed(q)]), base)
                if not engine.is_elliptic(w):
                    return engine.normal_form(w)
    # a tree: pair two leaves of the reduced tree with elements outside the edge images
    leaves = []
    for u in red.vertices:
        inc = red.incident(u.name)
        if len(inc) == 1:
            img = set(inc[0].inclusion.hom.image().elements)
            G = u.group
            a = next(x for x in range(G.order) if x not in img)
            leaves.append((u.name, a))
    for (u1, a), (u2, b) in [(leaves[i], leaves[j]) for i in range(len(leaves)) for j in range(len(leaves)) if i < j]:
        p = _tree_path(graph, tree, base, u1)
        path = _tree_walk(graph, u1, u2)
        to_u1 = engine.path_word(tuple((engine.vops[engine.origin[x]].identity, x) for x in p), base)
        P = engine.path_word(tuple((engine.vops[engine.origin[x]].identity, x) for x in path), u1)
        core = engine.concat(engine.concat(engine.concat(engine.element(u1, a), P), engine.element(u2, b)),
                             engine.inverse(P))
        w = engine.normal_form(engine.concat(engine.concat(to_u1, core), engine.inverse(to_u1)))
        if not engine.is_elliptic(w):
            return w
    raise AssertionError("infinite fundamental group without a hyperbolic witness")


def _spanning_tree(graph, base):
    parent = {base: None}
    queue = [base]
    while queue:
        u = queue.pop(0)
        for oe in graph.incident(u):
            if oe.terminus not in parent:
                parent[oe.terminus] = oe.name
                queue.append(oe.terminus)
    return parent


def _tree_path(graph, tree, base, u):
    path = []
    while u != base:
        e = tree[u]
        path.append(e)
        u = graph.oriented(e).origin
    return list(reversed(path))


def _tree_walk(graph, u1, u2):
    tree = _spanning_tree(graph, u1)
    return _tree_path(graph, tree, u1, u2)


def centralizer_infinite(gamma: GraphOfGroups, v: str, A: Subgroup):
    """Decide whether ``Z_G(A)`` is infinite; Infinite verdicts carry a replayable witness."""
    frag = centralizer_fragment(gamma, v, A)
    return _fragment_verdict(frag, "hyperbolic-centralizer")


def normalizer_infinite(gamma: GraphOfGroups, v: str, A: Subgroup):
    frag = normalizer_subgraph(gamma, v, A)
    return _fragment_verdict(frag, "hyperbolic-normalizer")


def _fragment_verdict(frag: Fragment, kind):
    w = hyperbolic_word(frag.graph, frag.base)
    if w is None:
        red, _ = reduce_tracked(frag.graph)
        order = red.vertices[0].group.order
        return finite(order, data={"fragment": frag})
    engine = WordEngine(frag.ambient)
    word = frag.to_ambient(engine, w)
    cert = Certificate(kind, {"graph": frag.ambient, "vertex": frag.vertex, "subgroup": frag.subgroup,
                              "word": word},
                       {"vertex": frag.vertex, "subgroup": [frag.subgroup.parent.names[x] for x in frag.subgroup],
                        "word": engine.format(word)})
    if not replay_hyperbolic(cert):
        raise AssertionError("witness failed re-verification")
    return infinite(cert, data={"fragment": frag})


def replay_hyperbolic(cert: Certificate) -> bool:
    """Re-check that the witness is hyperbolic and centralizes (normalizes) ``A``."""
    gamma, v, A, w = (cert.data[k] for k in ("graph", "vertex", "subgroup", "word"))
    engine = WordEngine(gamma)
    if engine.end(w) != v or engine.is_elliptic(w):
        return False
    imgs = []
    for a in A.elements:
        x = engine.multiply(w, engine.element(v, a), engine.inverse(w))
        if x.letters:
            return False
        imgs.append(x.last)
    if cert.kind == "hyperbolic-centralizer":
        return imgs == list(A.elements)
    return sorted(imgs) == list(A.elements)
