"""Isomorphism of graphs of groups.

Two graphs of finite groups are isomorphic when there are a graph isomorphism,
isomorphisms of vertex groups and of edge groups, and for every edge an
element of each endpoint group that conjugates the transported inclusion onto
the target inclusion.  Composite vertex groups are compared up to
deformation: two reduced sub-graphs of finite groups match when one is
isomorphic to a member of the other's slide census.
"""

from __future__ import annotations

from functools import lru_cache

from .abelian import FgAbelianGroup
from .finite import FiniteGroup, GroupHom, isomorphisms
from .gog import AbelianHom, Composite, GraphOfGroups, OrientedEdge, Opaque, flatten, reduce_tracked


def _out_reps(G: FiniteGroup, H: FiniteGroup):
    """Isomorphisms ``G -> H`` up to composition with inner automorphisms of ``H``."""
    reps = []
    seen = set()
    for phi in isomorphisms(G, H):
        if phi in seen:
            continue
        reps.append(phi)
        for k in range(H.order):
            seen.add(tuple(H.conj(k, x) for x in phi))
    return reps


_out_cache = {}


def out_reps(G, H):
    key = (id(G), id(H))
    if key not in _out_cache:
        _out_cache[key] = (G, H, _out_reps(G, H))
    return _out_cache[key][2]


def vertex_type(group):
    if isinstance(group, FiniteGroup):
        return ("finite", group.signature)
    if isinstance(group, FgAbelianGroup):
        return ("abelian", group.free_rank, group.torsion)
    if isinstance(group, Composite):
        red = _reduced(group.graph)
        if red.is_finite_groups():
            # slide-invariant: vertex/edge group types and first Betti number
            vs = tuple(sorted(v.group.signature for v in red.vertices))
            es = tuple(sorted(e.group.signature for e in red.edges))
            return ("composite", vs, es, red.betti_number())
        return ("composite", invariant(red))
    if isinstance(group, Opaque):
        return ("opaque", group.label)
    return ("other", repr(group))


def _reduced(graph):
    flat = flatten(graph)
    if flat.is_finite_groups():
        red, _ = reduce_tracked(flat)
        return red
    return flat


def invariant(gamma: GraphOfGroups):
    """Cheap isomorphism invariant used to prune searches."""
    deg = {v.name: 0 for v in gamma.vertices}
    for e in gamma.edges:
        deg[e.origin] += 1
        deg[e.terminus] += 1
    vs = sorted((repr(vertex_type(v.group)), deg[v.name], repr(v.annotation)) for v in gamma.vertices)
    es = sorted(tuple(sorted((repr(vertex_type(gamma.vertex(e.origin).group)),
                              repr(vertex_type(gamma.vertex(e.terminus).group))))) + (repr(vertex_type(e.group)),)
                for e in gamma.edges)
    return (tuple(vs), tuple(es))


def _edge_compatible(src, dst, oe, oe2, phis):
    """Can oriented edge ``oe`` of ``src`` map to ``oe2`` of ``dst`` given vertex maps ``phis``?"""
    Ge, Ge2 = oe.group, oe2.group
    if isinstance(Ge, FiniteGroup) and isinstance(Ge2, FiniteGroup):
        if Ge.order != Ge2.order or Ge.signature != Ge2.signature:
            return False
    elif vertex_type(Ge) != vertex_type(Ge2):
        return False
    ends = [(oe, oe2), (oe.bar, oe2.bar)]
    Go = src.vertex(oe.origin).group
    if not all(isinstance(src.vertex(x.origin).group, FiniteGroup) for x, _ in ends):
        return _loose_compatible(src, dst, ends)
    # the edge isomorphism is determined by the conjugator at the origin
    phi_o = phis[oe.origin]
    i1, j1 = oe.inclusion.hom, oe2.inclusion.hom
    H = dst.vertex(oe2.origin).group
    target = _image_set(j1)
    moved = tuple(phi_o[i1(x)] for x in range(Ge.order))
    phi_t = phis[oe.terminus]
    i2, j2 = oe.bar.inclusion.hom, oe2.bar.inclusion.hom
    K = dst.vertex(oe2.terminus).group
    have = tuple(phi_t[i2(x)] for x in range(Ge.order))
    reachable = _conj_orbit(K, have)
    for conj in _conj_orbit(H, moved):
        if not all(y in target for y in conj):
            continue
        want = tuple(j2(j1.preimage(y)) for y in conj)
        if want in reachable:
            return True
    return False


_orbit_cache = {}
_image_cache = {}


def _conj_orbit(G: FiniteGroup, tup):
    """All simultaneous conjugates of the tuple ``tup``."""
    key = (id(G), tup)
    hit = _orbit_cache.get(key)
    if hit is None or hit[0] is not G:
        hit = (G, frozenset(tuple(G.conj(k, x) for x in tup) for k in range(G.order)))
        _orbit_cache[key] = hit
    return hit[1]


def _image_set(hom):
    hit = _image_cache.get(id(hom))
    if hit is None or hit[0] is not hom:
        hit = (hom, frozenset(hom.images))
        _image_cache[id(hom)] = hit
    return hit[1]


def _loose_compatible(src, dst, ends):
    for x, y in ends:
        a, b = x.inclusion, y.inclusion
        if isinstance(a.hom, AbelianHom) and isinstance(b.hom, AbelianHom):
            if sorted(a.hom.columns) != sorted(b.hom.columns):
                return False
    return True


def _group_maps(G, H):
    if isinstance(G, FiniteGroup) and isinstance(H, FiniteGroup):
        return out_reps(G, H)
    if vertex_type(G) == vertex_type(H):
        if isinstance(G, Composite) and isinstance(H, Composite):
            if not same_deformation_space(_reduced(G.graph), _reduced(H.graph)):
                return []
        return [None]
    return []


_census_cache = {}


def same_deformation_space(s1: GraphOfGroups, s2: GraphOfGroups) -> bool:
    """Is ``s2`` isomorphic to a slide of ``s1``?  Falls back to isomorphism off the finite case."""
    if isomorphic(s1, s2):
        return True
    if not (s1.is_finite_groups() and s2.is_finite_groups()):
        return False
    from .moves import enumerate_deformation_space

    key = _structure_key(s1)
    if key not in _census_cache:
        _census_cache[key] = enumerate_deformation_space(s1)
    census = _census_cache[key]
    return any(isomorphic(m, s2) for m in census.members[1:])


def _structure_key(g: GraphOfGroups):
    vs = tuple((v.name, v.group.name, v.group.table) for v in g.vertices)
    es = tuple((e.name, e.origin, e.terminus, e.group.table, e.left.hom.images, e.right.hom.images)
               for e in g.edges)
    return vs, es


def isomorphic(g1: GraphOfGroups, g2: GraphOfGroups) -> bool:
    return find_isomorphism(g1, g2) is not None


def find_isomorphism(g1: GraphOfGroups, g2: GraphOfGroups):
    """Return ``(vertex map, edge map)`` or None."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    if invariant(g1) != invariant(g2):
        return None
    order = _bfs_order(g1)
    cand = {}
    for v in g1.vertices:
        tv = vertex_type(v.group)
        cand[v.name] = [w.name for w in g2.vertices
                        if vertex_type(w.group) == tv and w.annotation == v.annotation]
    maps_cache = {}

    def maps(v, w):
        key = (v, w)
        if key not in maps_cache:
            G, H = g1.vertex(v).group, g2.vertex(w).group
            reps = _group_maps(G, H)
            if isinstance(G, FiniteGroup) and isinstance(H, FiniteGroup):
                # edge checks see a vertex map only through the conjugacy orbits of
                # the transported incident inclusions, so keep one map per signature
                incs = [oe.inclusion.hom for oe in g1.incident(v)
                        if isinstance(oe.inclusion.hom, GroupHom)]
                seen, kept = set(), []
                for phi in reps:
                    sig = tuple(_conj_orbit(H, tuple(phi[x] for x in i.images)) for i in incs)
                    if sig not in seen:
                        seen.add(sig)
                        kept.append(phi)
                reps = kept
            maps_cache[key] = reps
        return maps_cache[key]

    sigma, phis, used = {}, {}, set()
    edge_map = {}

    def adjacency(graph):
        adj = {}
        for oe in graph.oriented_edges():
            if oe.origin == oe.terminus and oe.reverse:
                continue
            adj.setdefault((oe.origin, oe.terminus), []).append(oe)
        return adj

    adj1, adj2 = adjacency(g1), adjacency(g2)
    memo = {}

    def between(graph, a, b):
        return (adj1 if graph is g1 else adj2).get((a, b), [])

    def compatible(oe, var):
        key = (oe.name, var.name, phis.get(oe.origin), phis.get(oe.terminus))
        if key not in memo:
            memo[key] = _edge_compatible(g1, g2, oe, var, phis)
        return memo[key]

    def match_edges(v):
        """Match edges from ``v`` to assigned vertices; returns list of pairs or None."""
        pairs = []
        for u in list(sigma):
            src = between(g1, v, u)
            dst = between(g2, sigma[v], sigma[u])
            if len(src) != len(dst):
                return None
            if not src:
                continue
            loops = u == v
            adj = []
            for oe in src:
                opts = []
                for oe2 in dst:
                    variants = [oe2, oe2.bar] if loops else [oe2]
                    for var in variants:
                        if compatible(oe, var):
                            opts.append((oe2.edge.name, var))
                            break
                adj.append(opts)
            m = _matching(adj)
            if m is None:
                return None
            pairs += [(oe, var) for oe, var in zip(src, m)]
        return pairs

    def backtrack(i):
        if i == len(order):
            return True
        v = order[i]
        for w in cand[v]:
            if w in used:
                continue
            for phi in maps(v, w):
                sigma[v], phis[v] = w, phi
                used.add(w)
                pairs = match_edges(v)
                if pairs is not None:
                    for oe, var in pairs:
                        edge_map[oe.name] = var.name
                    if backtrack(i + 1):
                        return True
                used.discard(w)
                del sigma[v], phis[v]
        return False

    if backtrack(0):
        return dict(sigma), dict(edge_map)
    return None


def _matching(adj):
    """Perfect matching of left items to option keys; ``adj[i]`` lists ``(key, payload)``."""
    owner = {}

    def augment(i, seen):
        for key, payload in adj[i]:
            if key in seen:
                continue
            seen.add(key)
            if key not in owner or augment(owner[key][0], seen):
                owner[key] = (i, payload)
                return True
        return False

    for i in range(len(adj)):
        if not augment(i, set()):
            return None
    out = [None] * len(adj)
    for key, (i, payload) in owner.items():
        out[i] = payload
    return out


def _bfs_order(g):
    start = g.vertices[0].name
    seen = [start]
    i = 0
    while i < len(seen):
        for oe in g.incident(seen[i]):
            if oe.terminus not in seen:
                seen.append(oe.terminus)
        i += 1
    return seen + [v.name for v in g.vertices if v.name not in seen]
