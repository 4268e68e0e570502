"""Trees of cylinders for the equality relation on finite edge groups.

All edge groups have the same order ``k``, so two edges of the Bass–Serre
tree lie in the same cylinder exactly when their stabilizers are equal.  A
cylinder is therefore the subtree fixed by an edge group ``A`` and its
stabilizer is ``N_G(A)``.  At the level of the quotient graph, cylinders are
the connected components of the graph whose nodes are pairs (vertex,
conjugacy class of incident edge group) and whose links are the edges of Γ.

Vertex groups may be finite or composite (a graph of finite groups).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .finite import (FiniteGroup, GroupHom, conjugate_subgroups, normalizer, subgroup_as_group)
from .gog import (Composite, Edge, GogError, GraphOfGroups, Inclusion, Vertex, collapse_all_but,
                  flatten_composites, flatten_paths, reduce_tracked, tidy)
from .words import normalizer_subgraph


class CylinderError(GogError):
    pass


@dataclass
class _NormInfo:
    """``N_{G_u}(A')`` for one class of incident edge groups at ``u``."""

    group: object  # FiniteGroup or Composite
    finite: bool
    attach: dict  # oriented edge name -> Inclusion relative to ``group``
    into: Optional[Inclusion]  # how a finite normalizer sits in G_u
    lift: Callable  # Inclusion relative to ``group`` -> Inclusion relative to G_u
    normal: bool  # A' normal in G_u


def _finite_classes(gamma, u):
    G = gamma.vertex(u).group
    classes = []  # (rep subgroup, [(oe, g)])
    for oe in gamma.incident(u):
        S = oe.inclusion.hom.image()
        for rep, members in classes:
            g = conjugate_subgroups(G, S, rep)
            if g is not None:
                members.append((oe, g))
                break
        else:
            classes.append((S, [(oe, G.identity)]))
    infos = []
    for rep, members in classes:
        N = normalizer(G, rep)
        K, incl = subgroup_as_group(N)
        attach = {}
        for oe, g in members:
            i = oe.inclusion.hom
            attach[oe.name] = Inclusion(GroupHom(oe.group, K, [incl.preimage(G.conj(g, i(x)))
                                                               for x in range(oe.group.order)]))
        infos.append(_NormInfo(K, True, attach, Inclusion(incl),
                               lambda inc, incl=incl: Inclusion(incl.compose(inc.hom)),
                               len(N) == G.order))
    return infos


def _composite_classes(gamma, u):
    S = gamma.vertex(u).group.graph  # flat
    classes = []  # (fragment, [(oe, state, h)])
    for oe in gamma.incident(u):
        inc = oe.inclusion
        w = inc.at[0]
        Gw = S.vertex(w).group
        E = inc.hom.image()
        for frag, members in classes:
            hit = frag.locate(w, E.elements)
            if hit is not None:
                members.append((oe, hit[0], hit[1]))
                break
        else:
            frag = normalizer_subgraph(S, w, E)
            st = frag.states[frag.base]
            classes.append((frag, [(oe, st, Gw.identity)]))
    infos = []
    for frag, members in classes:
        raw = {}
        for oe, st, h in members:
            Gw = S.vertex(st.vertex).group
            i = oe.inclusion.hom
            raw[oe.name] = (st, GroupHom(oe.group, st.group,
                                         [st.incl.preimage(Gw.conj(h, i(x))) for x in range(oe.group.order)]))
        normal = frag.covers()
        red, where = reduce_tracked(frag.graph)
        if not red.edges:
            surv = red.vertices[0].name
            st0 = frag.states[surv]
            K = red.vertices[0].group
            attach = {}
            for name, (st, hom) in raw.items():
                _, phi = where.get(st.name, (surv, None))
                attach[name] = Inclusion(hom if phi is None else phi.compose(hom))
            infos.append(_NormInfo(K, True, attach, Inclusion(st0.incl, (st0.vertex,)),
                                   lambda inc, st0=st0: Inclusion(st0.incl.compose(inc.hom), (st0.vertex,)),
                                   normal))
        else:
            attach = {name: Inclusion(hom, (st.name,)) for name, (st, hom) in raw.items()}

            def lift(inc, frag=frag):
                st = frag.states[inc.at[0]]
                return Inclusion(st.incl.compose(inc.hom), (st.vertex,) + tuple(inc.at[1:]))

            infos.append(_NormInfo(Composite(frag.graph), False, attach, None, lift, normal))
    return infos


@dataclass
class CylinderClass:
    """One orbit of cylinders: its nodes (vertex, class) and the edges of Γ it contains."""

    name: str
    nodes: dict  # node name -> (vertex, class index)
    edges: list  # edge names of Γ
    graph: GraphOfGroups  # graph of groups presenting the cylinder stabilizer
    representative: tuple  # (vertex, subgroup elements) of one edge group in the class


@dataclass
class CylinderData:
    gamma: GraphOfGroups
    k: int
    infos: dict  # vertex -> list of _NormInfo
    v0: list
    cylinders: list
    tc_edges: list  # (name, vertex, class index, cylinder index, node name)
    node_of: dict = field(default_factory=dict)  # (vertex, class) -> (cylinder index, node name)


def _edge_order(gamma):
    orders = set()
    for e in gamma.edges:
        if not isinstance(e.group, FiniteGroup):
            raise CylinderError(f"edge {e.name}: trees of cylinders need finite edge groups")
        orders.add(e.group.order)
    if len(orders) > 1:
        raise CylinderError(f"edge groups have mixed orders {sorted(orders)}")
    return orders.pop() if orders else None


def cylinder_data(gamma: GraphOfGroups) -> CylinderData:
    k = _edge_order(gamma)
    gamma = flatten_composites(gamma)
    infos = {}
    cls_of = {}  # oriented edge name -> (vertex, class index)
    for v in gamma.vertices:
        if isinstance(v.group, FiniteGroup):
            infos[v.name] = _finite_classes(gamma, v.name)
        elif isinstance(v.group, Composite):
            if not v.group.graph.is_finite_groups():
                raise CylinderError(f"vertex {v.name}: composite must be a graph of finite groups")
            infos[v.name] = _composite_classes(gamma, v.name)
        else:
            raise CylinderError(f"vertex {v.name}: unsupported vertex group for cylinders")
        for ci, info in enumerate(infos[v.name]):
            for name in info.attach:
                cls_of[name] = (v.name, ci)
    # union-find on nodes
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in gamma.vertices:
        for ci in range(len(infos[v.name])):
            find((v.name, ci))
    for e in gamma.edges:
        a, b = find(cls_of[e.name]), find(cls_of["~" + e.name])
        if a != b:
            parent[b] = a
    comps = {}
    for v in gamma.vertices:
        for ci in range(len(infos[v.name])):
            comps.setdefault(find((v.name, ci)), []).append((v.name, ci))
    cylinders = []
    node_of = {}
    for idx, nodes in enumerate(comps.values()):
        yname = f"Y{idx + 1}"
        counts = {}
        for u, _ in nodes:
            counts[u] = counts.get(u, 0) + 1
        names = {}
        seen = {}
        for u, ci in nodes:
            if counts[u] == 1:
                names[(u, ci)] = u
            else:
                seen[u] = seen.get(u, 0) + 1
                names[(u, ci)] = f"{u}.{seen[u]}"
        for key, nm in names.items():
            node_of[key] = (idx, nm)
        verts = tuple(Vertex(names[key], infos[key[0]][key[1]].group) for key in nodes)
        edges = []
        for e in gamma.edges:
            ko, kt = cls_of[e.name], cls_of["~" + e.name]
            if ko not in names:
                continue
            left = infos[ko[0]][ko[1]].attach[e.name]
            right = infos[kt[0]][kt[1]].attach["~" + e.name]
            edges.append(Edge(e.name, e.group, names[ko], names[kt], left, right))
        graph = GraphOfGroups(verts, tuple(edges))
        rep = None
        if edges:
            oe = gamma.oriented(edges[0].name)
            rep = (oe.origin, tuple(oe.inclusion.hom.image().elements) if not oe.inclusion.at else oe.inclusion.at)
        cylinders.append(CylinderClass(yname, {names[key]: key for key in nodes}, [e.name for e in edges],
                                       graph, rep))
    v0 = []
    for v in gamma.vertices:
        info = infos[v.name]
        if not info:
            continue
        if len(info) >= 2 or not info[0].normal:
            v0.append(v.name)
    tc_edges = []
    for u in v0:
        for ci in range(len(infos[u])):
            idx, node = node_of[(u, ci)]
            tc_edges.append((f"eps{len(tc_edges) + 1}", u, ci, idx, node))
    return CylinderData(gamma, k, infos, v0, cylinders, tc_edges, node_of)


def _identity_hom(K):
    return GroupHom(K, K, range(K.order))


def tree_of_cylinders(gamma: GraphOfGroups, data: Optional[CylinderData] = None) -> GraphOfGroups:
    """Quotient graph of groups of the tree of cylinders.

    V0 vertices keep their groups, each cylinder class ``Yi`` carries the
    normalizer of its edge group, and edges ``epsj`` carry ``G_x ∩ G_Y``.  An
    edge whose group is an infinite normalizer (possible only at composite
    vertices) carries that composite group with structural inclusions.
    """
    if not gamma.edges:
        return tidy(gamma)
    data = data or cylinder_data(gamma)
    g = data.gamma
    verts = [g.vertex(u) for u in data.v0]
    verts += [Vertex(c.name, Composite(c.graph)) for c in data.cylinders]
    edges = []
    for name, u, ci, idx, node in data.tc_edges:
        info = data.infos[u][ci]
        yname = data.cylinders[idx].name
        if info.finite:
            edges.append(Edge(name, info.group, u, yname, info.into,
                              Inclusion(_identity_hom(info.group), (node,))))
        else:
            edges.append(Edge(name, info.group, u, yname, Inclusion(None), Inclusion(None, (node,))))
    out = GraphOfGroups(tuple(verts), tuple(edges), g.families, g.directives, g.groups)
    return tidy(out)


def is_trivial_tree(tc: GraphOfGroups) -> bool:
    return not tc.edges


def default_predicate(k):
    return lambda H: isinstance(H, FiniteGroup) and H.order <= k


def collapsed_tree_of_cylinders(gamma: GraphOfGroups, predicate=None,
                                data: Optional[CylinderData] = None) -> GraphOfGroups:
    """Tree of cylinders with every edge whose group fails ``predicate`` collapsed.

    The default predicate keeps edge groups of order at most ``k``.
    """
    if not gamma.edges:
        return tidy(gamma)
    data = data or cylinder_data(gamma)
    predicate = predicate or default_predicate(data.k or 0)
    g = data.gamma
    ids = [("v", u) for u in data.v0] + [("Y", i) for i in range(len(data.cylinders))]
    parent = {x: x for x in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    collapsed = set()
    for name, u, ci, idx, node in data.tc_edges:
        info = data.infos[u][ci]
        if not info.finite or not predicate(info.group):
            collapsed.add(name)
            a, b = find(("v", u)), find(("Y", idx))
            if a != b:
                parent[b] = a
    comps = {}
    for x in ids:
        comps.setdefault(find(x), []).append(x)

    def label(x):
        return x[1] if x[0] == "v" else data.cylinders[x[1]].name

    home = {}  # T_c vertex id -> new vertex name
    placement = {}  # (T_c vertex id, local name) -> name inside merged composite
    verts = []
    for members in comps.values():
        has_edge = any(name in collapsed and (("v", u) in members) for name, u, *_ in data.tc_edges)
        if len(members) == 1 and not has_edge:
            x = members[0]
            home[x] = label(x)
            if x[0] == "v":
                verts.append(g.vertex(x[1]))
            else:
                verts.append(Vertex(label(x), Composite(data.cylinders[x[1]].graph)))
            continue
        name = "+".join(label(x) for x in members)
        for x in members:
            home[x] = name
        verts.append(Vertex(name, Composite(_merge(data, members, collapsed, placement))))
    edges = []
    for name, u, ci, idx, node in data.tc_edges:
        if name in collapsed:
            continue
        info = data.infos[u][ci]
        vu, vy = ("v", u), ("Y", idx)
        left = info.into
        if home[vu] != u:  # u was merged
            left = _place(left, placement, vu, u)
        if home[vy] == data.cylinders[idx].name:
            right = Inclusion(_identity_hom(info.group), (node,))
        else:
            right = Inclusion(_identity_hom(info.group), (placement[(vy, node)],))
        edges.append(Edge(name, info.group, home[vu], home[vy], left, right))
    out = GraphOfGroups(tuple(verts), tuple(edges), g.families, g.directives, g.groups)
    return tidy(out)


def _place(inc, placement, vid, u):
    if inc.at:
        return Inclusion(inc.hom, (placement[(vid, inc.at[0])],) + tuple(inc.at[1:]))
    return Inclusion(inc.hom, (placement[(vid, u)],))


def _merge(data, members, collapsed, placement):
    """Graph of groups of a collapsed region of the tree of cylinders."""
    g = data.gamma
    used = set()
    verts, edges = [], []

    def fresh(base):
        name = base
        i = 1
        while name in used:
            i += 1
            name = f"{base}~{i}"
        used.add(name)
        return name

    replaced = {}  # (cylinder index, node) -> vertex u
    for name, u, ci, idx, node in data.tc_edges:
        if name in collapsed and ("v", u) in members:
            replaced[(idx, node)] = (u, ci)
    for x in members:
        if x[0] != "v":
            continue
        u = x[1]
        G = g.vertex(u).group
        if isinstance(G, Composite):
            sub = G.graph
            for w in sub.vertices:
                placement[(x, w.name)] = fresh(w.name)
                verts.append(Vertex(placement[(x, w.name)], w.group))
            for e in sub.edges:
                edges.append(Edge(fresh(e.name), e.group, placement[(x, e.origin)], placement[(x, e.terminus)],
                                  _relocate(e.left, placement, x), _relocate(e.right, placement, x)))
        else:
            placement[(x, u)] = fresh(u)
            verts.append(Vertex(placement[(x, u)], G))
    for x in members:
        if x[0] != "Y":
            continue
        cyl = data.cylinders[x[1]]
        for vtx in cyl.graph.vertices:
            if (x[1], vtx.name) in replaced:
                continue
            placement[(x, vtx.name)] = fresh(f"{cyl.name}.{vtx.name}")
            verts.append(Vertex(placement[(x, vtx.name)], vtx.group))

        def end(node, inc):
            if (x[1], node) in replaced:
                u, ci = replaced[(x[1], node)]
                lifted = data.infos[u][ci].lift(inc)
                return _place(lifted, placement, ("v", u), u)
            return placement[(x, node)], inc

        for e in cyl.graph.edges:
            o, left = _split_place(end(e.origin, e.left))
            t, right = _split_place(end(e.terminus, e.right))
            edges.append(Edge(fresh(e.name), e.group, o, t, left, right))
    return GraphOfGroups(tuple(verts), tuple(edges))


def _split_place(res):
    if isinstance(res, Inclusion):
        return res.at[0], Inclusion(res.hom, tuple(res.at[1:]))
    return res


def _relocate(inc, placement, x):
    return Inclusion(inc.hom, tuple(inc.at))


# -- the trichotomy ------------------------------------------------------------------

@dataclass
class Trichotomy:
    branch: str  # NontrivialTcFinite | CollapseWithInfiniteTwists | InvariantCollapse | Unknown
    edges: Optional[list] = None  # edges collapsed to reach the witness splitting
    witness: Optional[GraphOfGroups] = None
    verdict: object = None


def prop_induct_trichotomy(gamma: GraphOfGroups) -> Trichotomy:
    """Classify a reduced splitting with constant finite edge order.

    Returns the first branch that can be certified: a nontrivial tree of
    cylinders with finite edge groups, a nontrivial collapse with an infinite
    group of twists, or a nontrivial collapse invariant under the deformation
    space automorphisms.
    """
    from .moves import reduce
    from .twists import decide

    gamma = reduce(gamma)
    if not gamma.edges:
        raise CylinderError("the splitting is trivial")
    data = cylinder_data(gamma)
    tc = tree_of_cylinders(gamma, data)
    finite_edges = all(isinstance(e.group, FiniteGroup) for e in tc.edges)
    if tc.edges and finite_edges:
        return Trichotomy("NontrivialTcFinite", [], tc)
    if not tc.edges:
        if len(gamma.edges) == 1:
            return Trichotomy("InvariantCollapse", [], gamma)
        for e in gamma.edges:
            others = [x.name for x in gamma.edges if x.name != e.name]
            coll = collapse_all_but(gamma, e.name)
            v = decide(coll)
            if v.is_infinite:
                return Trichotomy("CollapseWithInfiniteTwists", others, coll, v)
        return Trichotomy("Unknown", None, None)
    first_type = {idx for name, u, ci, idx, node in data.tc_edges if not data.infos[u][ci].finite}
    for idx in sorted(first_type):
        cyl = data.cylinders[idx]
        if len(cyl.edges) < 2:
            continue
        for e in cyl.edges:
            coll = _collapse(gamma, [e])
            v = decide(coll)
            if v.is_infinite:
                return Trichotomy("CollapseWithInfiniteTwists", [e], coll, v)
    second = [e for i, c in enumerate(data.cylinders) if i not in first_type for e in c.edges]
    return Trichotomy("InvariantCollapse", second, _collapse(gamma, second))


def _collapse(gamma, names):
    from .gog import collapse
    return collapse(gamma, names)
