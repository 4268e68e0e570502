"""Reduced graphs of groups, slide moves and censuses of deformation spaces."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import List

from .finite import FiniteGroup, GroupHom
from .gog import (Edge, GogError, GraphOfGroups, Inclusion, OrientedEdge, reduce_tracked,
                  reducible_edges)
from .iso import find_isomorphism, invariant

DEFAULT_BOUND = 10_000


class MoveError(GogError):
    pass


def census_bound(bound=None):
    if bound is not None:
        return int(bound)
    env = os.environ.get("BASSFORGE_CENSUS_BOUND")
    return int(env) if env else DEFAULT_BOUND


def is_reduced(gamma: GraphOfGroups):
    """``(flag, offending oriented edges)``: an edge is offending when its group fills an endpoint group."""
    bad = reducible_edges(gamma)
    return (not bad, [oe.name for oe in bad])


def reduce(gamma: GraphOfGroups) -> GraphOfGroups:
    red, _ = reduce_tracked(gamma)
    return red


def slide_conjugators(gamma: GraphOfGroups, e: str, f: str) -> list:
    """Elements ``g`` of the common origin group with ``g i_e(G_e) g^-1 ⊆ i_f(G_f)``."""
    oe, of = gamma.oriented(e), gamma.oriented(f)
    if oe.edge.name == of.edge.name:
        raise MoveError("an edge cannot slide over itself or its reverse")
    if oe.origin != of.origin:
        raise MoveError(f"{e} and {f} do not share an origin")
    G = gamma.vertex(oe.origin).group
    if not isinstance(G, FiniteGroup) or oe.inclusion.at or of.inclusion.at:
        raise MoveError("slides are implemented over finite vertex groups")
    src = oe.inclusion.hom.image().elements
    dst = set(of.inclusion.hom.image().elements)
    return [g for g in range(G.order) if all(G.conj(g, x) in dst for x in src)]


def slide(gamma: GraphOfGroups, e: str, f: str, g=None) -> GraphOfGroups:
    """Slide the oriented edge ``e`` over ``f`` (same origin, ``G_e`` conjugate into ``G_f``).

    The origin of ``e`` moves to the terminus of ``f``; the new inclusion is
    ``i_f̄ ∘ i_f^-1 ∘ ad(g) ∘ i_e``.
    """
    conjs = slide_conjugators(gamma, e, f)
    if not conjs:
        raise MoveError(f"G_{e} is not conjugate into G_{f} at {gamma.oriented(e).origin}")
    if g is None:
        G = gamma.vertex(gamma.oriented(e).origin).group
        g = G.identity if G.identity in conjs else conjs[0]
    elif g not in conjs:
        raise MoveError("conjugator does not carry G_e into G_f")
    oe, of = gamma.oriented(e), gamma.oriented(f)
    G = gamma.vertex(oe.origin).group
    i_e, i_f, i_fbar = oe.inclusion.hom, of.inclusion.hom, of.far_inclusion.hom
    images = [i_fbar(i_f.preimage(G.conj(g, i_e(x)))) for x in range(oe.group.order)]
    new_inc = Inclusion(GroupHom(oe.group, i_fbar.target, images))
    old = oe.edge
    if oe.reverse:
        new_edge = Edge(old.name, old.group, old.origin, of.terminus, old.left, new_inc)
    else:
        new_edge = Edge(old.name, old.group, of.terminus, old.terminus, new_inc, old.right)
    edges = tuple(new_edge if x.name == old.name else x for x in gamma.edges)
    return GraphOfGroups(gamma.vertices, edges, gamma.families, gamma.directives, gamma.groups)


def legal_slides(gamma: GraphOfGroups):
    """All ``(e, f, g)`` triples, one per conjugator."""
    out = []
    for v in gamma.vertices:
        if not isinstance(v.group, FiniteGroup):
            continue
        inc = gamma.incident(v.name)
        for oe in inc:
            for of in inc:
                if oe.edge.name == of.edge.name:
                    continue
                for g in slide_conjugators(gamma, oe.name, of.name):
                    out.append((oe.name, of.name, g))
    return out


@dataclass
class DeformationSpaceCensus:
    seed: GraphOfGroups
    members: List[GraphOfGroups]
    move_log: list = field(default_factory=list)  # (member index, e, f, member index)
    parents: dict = field(default_factory=dict)  # member index -> (parent index, e, f, g)
    exhaustive: bool = True
    bound: int = DEFAULT_BOUND

    def __len__(self):
        return len(self.members)

    def path_to(self, j):
        """Slides ``[(e, f, g), ...]`` that rebuild member ``j`` from the seed."""
        steps = []
        while j in self.parents:
            i, e, f, g = self.parents[j]
            steps.append((e, f, g))
            j = i
        return list(reversed(steps))

    def token(self):
        """Exhaustiveness token consumed by Finite verdicts."""
        return {"census_size": len(self.members), "exhaustive": self.exhaustive, "bound": self.bound}


def enumerate_deformation_space(gamma: GraphOfGroups, bound=None) -> DeformationSpaceCensus:
    """Closure of ``{gamma}`` under slides, up to isomorphism of graphs of groups."""
    bound = census_bound(bound)
    if not gamma.is_finite_groups():
        raise MoveError("censuses are computed for graphs of finite groups")
    members = [gamma]
    buckets = {invariant(gamma): [0]}
    log = []
    parents = {}
    i = 0
    exhaustive = True
    while i < len(members):
        cur = members[i]
        for e, f, g in legal_slides(cur):
            new = slide(cur, e, f, g)
            key = invariant(new)
            match = None
            for j in buckets.get(key, []):
                if find_isomorphism(new, members[j]) is not None:
                    match = j
                    break
            if match is None:
                if len(members) >= bound:
                    exhaustive = False
                    continue
                match = len(members)
                members.append(new)
                parents[match] = (i, e, f, g)
                buckets.setdefault(key, []).append(match)
            if match != i:
                log.append((i, e, f, match))
        i += 1
    return DeformationSpaceCensus(gamma, members, log, parents, exhaustive, bound)


def replay_slides(gamma: GraphOfGroups, steps) -> GraphOfGroups:
    for e, f, g in steps:
        gamma = slide(gamma, e, f, g)
    return gamma


def type_multisets(gamma: GraphOfGroups):
    vs = sorted(v.group.signature for v in gamma.vertices)
    es = sorted(e.group.signature for e in gamma.edges)
    return vs, es
