"""Checkers for infiniteness of outer automorphism groups.

Every Infinite verdict carries a certificate that :func:`bassforge.certify.replay`
re-verifies from the recorded data.  Finite verdicts record the assumptions
they rest on (annotations supplied by the user, exhaustiveness of a census).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .abelian import FgAbelianGroup, has_finite_index, lattice_rank
from .finite import FiniteGroup
from .gog import (AbelianHom, Composite, GogError, GraphOfGroups, OrbifoldDescriptor, collapse_all_but)
from .iso import isomorphic
from .moves import enumerate_deformation_space, reduce, replay_slides
from .twists import decide
from .verdict import Certificate, finite, infinite, unknown

COMPLETENESS = "slide census, one-edge collapses and trees of cylinders capture every splitting with infinite twists"


class CriteriaError(GogError):
    pass


# -- graphs of finite groups --------------------------------------------------------

def _candidates(member: GraphOfGroups):
    """Splittings derived from ``member``: itself, one-edge collapses, tree of cylinders."""
    from .cylinders import CylinderError, tree_of_cylinders

    yield ("member", None), member
    if len(member.edges) > 1:
        for e in member.edges:
            yield ("collapse", e.name), collapse_all_but(member, e.name)
    try:
        tc = tree_of_cylinders(member)
    except CylinderError:
        return
    if not tc.edges:
        return
    yield ("cylinders", None), tc
    if len(tc.edges) > 1:
        for e in tc.edges:
            yield ("cylinders-collapse", e.name), collapse_all_but(tc, e.name)


def _derive(member, recipe):
    from .cylinders import tree_of_cylinders

    kind, e = recipe
    if kind == "member":
        return member
    if kind == "collapse":
        return collapse_all_but(member, e)
    tc = tree_of_cylinders(member)
    return tc if kind == "cylinders" else collapse_all_but(tc, e)


def out_infinite_virtually_free(gamma: GraphOfGroups, bound=None):
    """Search the slide census for a splitting with an infinite group of twists."""
    for v in gamma.vertices:
        if not isinstance(v.group, FiniteGroup):
            raise CriteriaError(f"vertex {v.name}: out_infinite_virtually_free needs finite vertex groups")
    seed = reduce(gamma)
    if not seed.edges:
        return finite(None, reason="the group is finite", data={"census_size": 1, "exhaustive": True})
    census = enumerate_deformation_space(seed, bound)
    undecided = []
    for j, member in enumerate(census.members):
        for recipe, cand in _candidates(member):
            v = decide(cand)
            if v.is_infinite:
                cert = Certificate("splitting-twists",
                                   {"gamma": gamma, "slides": census.path_to(j), "recipe": recipe,
                                    "splitting": cand, "inner": v.certificate},
                                   {"member": j, "derivation": list(recipe),
                                    "splitting": describe(cand), "twists": v.certificate.to_json()})
                return infinite(cert, assumptions=[])
            if v.is_unknown:
                undecided.append((j, recipe, v.reason))
    if not census.exhaustive:
        return unknown(f"census bound {census.bound} reached", data=census.token())
    if undecided:
        return unknown("some twist groups could not be decided", data={"undecided": len(undecided)})
    return finite(None, assumptions=[COMPLETENESS], data=census.token())


def replay_splitting_twists(cert, replay) -> bool:
    d = cert.data
    member = replay_slides(reduce(d["gamma"]), d["slides"])
    cand = _derive(member, d["recipe"])
    return isomorphic(cand, d["splitting"]) and replay(d["inner"])


def describe(gamma: GraphOfGroups):
    def grp(G):
        if isinstance(G, FiniteGroup):
            return f"{G.name or 'G'}({G.order})"
        if isinstance(G, Composite):
            return "[" + "; ".join(describe(G.graph)) + "]"
        return str(G)

    out = [f"{v.name}: {grp(v.group)}" for v in gamma.vertices]
    out += [f"{e.name}: {e.origin} -> {e.terminus} over {grp(e.group)}" for e in gamma.edges]
    return out


# -- classification tables ------------------------------------------------------------

def gl_finite(r: int, n: int) -> bool:
    """Automorphisms of ``Z^(r+n)`` fixing the first ``n`` generators form a finite group?"""
    return r == 0 or (r == 1 and n == 0)


def mcg_classification(orb: OrbifoldDescriptor):
    """Finiteness of the mapping class group of a hyperbolic surface with boundary."""
    if not orb.is_surface():
        return "Unknown"
    if orb.orientable and orb.genus == 0 and orb.boundary_components == 3:
        return "Finite"  # pair of pants
    if not orb.orientable and orb.genus == 1 and orb.boundary_components == 2:
        return "Finite"  # twice punctured projective plane
    if not orb.is_hyperbolic():
        return "Unknown"
    return "Infinite"


def _incident_lattice(gamma, v):
    """Image vectors of incident edge groups in the abelian vertex group of ``v``."""
    A = gamma.vertex(v).group
    vecs = []
    for oe in gamma.incident(v):
        hom = oe.inclusion.hom
        if not isinstance(hom, AbelianHom):
            return None
        vecs += [tuple(c[:A.free_rank]) for c in hom.columns]
    return vecs


def gl_parameters(gamma, v):
    """``(r, n)``: the vertex is ``Z^(r+n)`` and its incident edge groups span rank ``n``."""
    A = gamma.vertex(v).group
    vecs = _incident_lattice(gamma, v)
    if vecs is None:
        return None
    n = lattice_rank(vecs, A.free_rank) if vecs else 0
    return A.free_rank - n, n


# -- free products --------------------------------------------------------------------

def _annotated(gamma, v, key):
    ann = gamma.vertex(v).annotation
    return None if ann is None else ann.flag(key)


def _is_abelian_vertex(gamma, v):
    G = gamma.vertex(v).group
    if isinstance(G, FgAbelianGroup):
        return True
    flag = _annotated(gamma, v, "abelian")
    if flag is None:
        return None
    return flag in ("true", True)


def _trivial_group(G):
    if isinstance(G, FgAbelianGroup):
        return G.is_trivial()
    if isinstance(G, FiniteGroup):
        return G.order == 1
    return False


def freep_check(gamma: GraphOfGroups):
    """Free splittings of torsion-free groups, relative to the family ``H``."""
    if not all(_trivial_group(e.group) for e in gamma.edges):
        raise CriteriaError("freep_check needs trivial edge groups")
    if gamma.directive("torsion") != "free":
        raise CriteriaError("torsion-freeness is not annotated (add 'torsion = free')")
    for v in gamma.vertices:
        if isinstance(v.group, FiniteGroup) and v.group.order > 1:
            raise CriteriaError(f"vertex {v.name}: torsion present")
        if isinstance(v.group, FgAbelianGroup) and v.group.torsion:
            raise CriteriaError(f"vertex {v.name}: torsion present")
    assumptions = ["torsion-free (annotation)"]
    nontrivial = [v.name for v in gamma.vertices if not _trivial_group(v.group)]
    factors = len(nontrivial) + gamma.betti_number()
    if factors < 2:
        return unknown("not a non-trivial free product", assumptions=assumptions)
    for v in nontrivial:
        if _is_abelian_vertex(gamma, v) is False and gamma.incident(v):
            cert = Certificate("nonabelian-free-factor", {"gamma": gamma, "vertex": v},
                               {"clause": "nonabelian-free-factor", "vertex": v})
            return infinite(cert, assumptions=assumptions, data={"clause": "nonabelian-free-factor"})
    if any(_is_abelian_vertex(gamma, v) is None for v in nontrivial):
        return unknown("a free factor is neither abelian nor annotated", assumptions=assumptions)
    if factors == 2 and len(nontrivial) == 2:
        return _abelian_amalgam(gamma, nontrivial, assumptions)
    v = decide(gamma)
    if v.is_infinite:
        cert = Certificate("free-product-twists", {"gamma": gamma, "inner": v.certificate},
                           {"clause": "free-product-twists", "twists": v.certificate.to_json()})
        return infinite(cert, assumptions=assumptions, data={"clause": "free-product-twists"})
    return unknown("twists of the free splitting are finite", assumptions=assumptions)


def _family_vectors(gamma, v):
    vecs = []
    for m in gamma.family("H"):
        if m.vertex == v:
            vecs += [tuple(x) for x in m.vectors]
    return vecs


def _abelian_amalgam(gamma, verts, assumptions):
    for v in verts:
        A = gamma.vertex(v).group
        if not isinstance(A, FgAbelianGroup):
            return unknown(f"vertex {v}: abelian factor without explicit lattice", assumptions=assumptions)
        vecs = [x[:A.free_rank] for x in _family_vectors(gamma, v)]
        if not has_finite_index(vecs, A.free_rank):
            cert = Certificate("abelian-factor-index", {"gamma": gamma, "vertex": v},
                               {"clause": "abelian-free-factor-infinite-index", "vertex": v,
                                "family_rank": lattice_rank(vecs, A.free_rank) if vecs else 0,
                                "factor_rank": A.free_rank})
            return infinite(cert, assumptions=assumptions, data={"clause": "abelian-free-factor-infinite-index"})
    return finite(None, assumptions=assumptions, data={"clause": "abelian-free-factors-finite-index"})


def replay_freep(cert, replay) -> bool:
    gamma = cert.data["gamma"]
    if cert.kind == "nonabelian-free-factor":
        v = cert.data["vertex"]
        return (_is_abelian_vertex(gamma, v) is False and bool(gamma.incident(v))
                and all(_trivial_group(e.group) for e in gamma.edges)
                and gamma.directive("torsion") == "free")
    if cert.kind == "abelian-factor-index":
        v = cert.data["vertex"]
        A = gamma.vertex(v).group
        vecs = [x[:A.free_rank] for x in _family_vectors(gamma, v)]
        return not has_finite_index(vecs, A.free_rank)
    if cert.kind == "free-product-twists":
        return replay(cert.data["inner"])
    return False


# -- toral JSJ splittings --------------------------------------------------------------

def _central_vertex(gamma):
    named = gamma.directive("central")
    if named is not None:
        return named if gamma.has_vertex(named) else None
    cands = [v.name for v in gamma.vertices if not isinstance(v.group, FgAbelianGroup)]
    return cands[0] if len(cands) == 1 else None


def _rht_evaluate(gamma):
    """``(status, clause, detail)`` with status Finite, Infinite or Unknown."""
    flag = gamma.directive("freely-indecomposable")
    if flag is None:
        return "Unknown", "annotation-missing", {"missing": "freely-indecomposable"}
    if flag not in ("true", True):
        return "Infinite", "free-product", {}
    c = _central_vertex(gamma)
    if c is None:
        return "Unknown", "annotation-missing", {"missing": "central vertex"}
    for e in gamma.edges:
        ends = {e.origin, e.terminus}
        if c not in ends or len(ends) != 2:
            return "Infinite", "not-star", {"edge": e.name}
    for v in gamma.vertices:
        if v.name == c:
            continue
        if not isinstance(v.group, FgAbelianGroup):
            return "Infinite", "not-star", {"vertex": v.name}
        if len(gamma.incident(v.name)) != 1:
            return "Infinite", "not-star", {"vertex": v.name}
    ann = gamma.vertex(c).annotation
    if ann is None:
        return "Unknown", "annotation-missing", {"missing": f"kind of vertex {c}"}
    if ann.kind == "qh":
        if ann.orbifold is None:
            return "Unknown", "annotation-missing", {"missing": f"orbifold of vertex {c}"}
        cls = mcg_classification(ann.orbifold)
        if cls == "Unknown":
            return "Unknown", "orbifold-unclassified", {"vertex": c}
        if cls == "Infinite":
            return "Infinite", "central-surface-not-exceptional", {"vertex": c,
                                                                   "orbifold": ann.orbifold.describe()}
    elif ann.kind != "rigid":
        return "Unknown", "annotation-missing", {"missing": f"vertex {c} must be rigid or qh"}
    for v in gamma.vertices:
        if v.name == c:
            continue
        A = v.group
        vecs = _incident_lattice(gamma, v.name)
        if vecs is None:
            return "Unknown", "annotation-missing", {"missing": f"edge lattice at {v.name}"}
        if not has_finite_index(vecs, A.free_rank):
            return "Infinite", "terminal-edge-infinite-index", {"vertex": v.name}
    return "Finite", "star-with-finite-index-ends", {"central": c}


def rht_check(gamma: GraphOfGroups):
    status, clause, detail = _rht_evaluate(gamma)
    assumptions = ["toral relatively hyperbolic (annotation)", "canonical JSJ splitting (annotation)"]
    data = {"clause": clause, **{k: v for k, v in detail.items()}}
    if status == "Finite":
        return finite(None, assumptions=assumptions, data=data)
    if status == "Unknown":
        return unknown(f"{clause}: {detail}", assumptions=assumptions, data=data)
    cert = Certificate("toral-clause", {"gamma": gamma, "clause": clause}, {"clause": clause, **detail})
    return infinite(cert, assumptions=assumptions, data=data)


def replay_toral_clause(cert, replay) -> bool:
    status, clause, _ = _rht_evaluate(cert.data["gamma"])
    return status == "Infinite" and clause == cert.data["clause"]


# -- structure reports -------------------------------------------------------------------

@dataclass
class StructureReport:
    twist_part: object
    qh_factors: list = field(default_factory=list)  # (vertex, OrbifoldDescriptor, classification)
    parabolic_factors: list = field(default_factory=list)  # (vertex, descriptor, classification)
    exactness_note: str = ""

    def overall(self):
        parts = [self.twist_part.verdict] + [c for *_, c in self.qh_factors] + \
            [c for *_, c in self.parabolic_factors]
        if "Infinite" in parts:
            return "Infinite"
        if "Unknown" in parts:
            return "Unknown"
        return "Finite"

    def witness(self):
        """The part that makes the overall verdict Infinite, as a certificate summary."""
        if self.twist_part.is_infinite:
            return self.twist_part.certificate.to_json()
        for v, o, c in self.qh_factors:
            if c == "Infinite":
                return {"kind": "surface-mapping-classes", "vertex": v, "orbifold": o.describe()}
        for v, d, c in self.parabolic_factors:
            if c == "Infinite":
                return {"kind": "parabolic-automorphisms", "vertex": v, "factor": d}
        return None

    def to_json(self):
        out = {
            "verdict": self.overall(),
            "twist_part": self.twist_part.to_json(),
            "qh_factors": [{"vertex": v, "orbifold": o.describe(), "mapping_class_group": c}
                           for v, o, c in self.qh_factors],
            "parabolic_factors": [{"vertex": v, "factor": d, "classification": c}
                                  for v, d, c in self.parabolic_factors],
            "exactness_note": self.exactness_note,
        }
        w = self.witness()
        if w is not None:
            out["certificate"] = w
        return out


def _parabolic_vertices(gamma):
    names = {m.vertex for m in gamma.family("parabolic") if m.vertex}
    for v in gamma.vertices:
        if v.annotation is not None and v.annotation.kind in ("parabolic", "abelian"):
            names.add(v.name)
        elif isinstance(v.group, FgAbelianGroup):
            names.add(v.name)
    return [v.name for v in gamma.vertices if v.name in names]


def structure_report(gamma: GraphOfGroups) -> StructureReport:
    twist = decide(gamma)
    qh = []
    for v in gamma.vertices:
        ann = v.annotation
        if ann is not None and ann.kind == "qh":
            if ann.orbifold is None:
                qh.append((v.name, OrbifoldDescriptor(), "Unknown"))
            else:
                qh.append((v.name, ann.orbifold, mcg_classification(ann.orbifold)))
    par = []
    for v in _parabolic_vertices(gamma):
        G = gamma.vertex(v).group
        if isinstance(G, FgAbelianGroup):
            rn = gl_parameters(gamma, v)
            if rn is None:
                par.append((v, "GL(?)", "Unknown"))
            else:
                r, n = rn
                par.append((v, f"GL_{{{r},{n}}}(Z)", "Finite" if gl_finite(r, n) else "Infinite"))
        else:
            par.append((v, "Out(P; marked incident groups)", "Unknown"))
    note = ("a finite-index subgroup of Out maps onto the product of the mapping class groups and the "
            "parabolic factors, with kernel the group of twists")
    return StructureReport(twist, qh, par, note)


# -- splittings relative to parabolic subgroups -------------------------------------------

def cor_outu_check(gamma: GraphOfGroups):
    """Infinite twists, or a parabolic vertex group with infinitely many relative automorphisms."""
    assumptions = list(gamma.assumptions())
    opaque = []
    tw = decide(gamma)
    if tw.is_infinite:
        cert = Certificate("twists-infinite", {"gamma": gamma, "inner": tw.certificate},
                           {"clause": "twists-infinite", "twists": tw.certificate.to_json()})
        return infinite(cert, assumptions=assumptions, data={"clause": "twists-infinite"})
    if tw.is_unknown:
        opaque.append("twists")
    for v in _parabolic_vertices(gamma):
        G = gamma.vertex(v).group
        if not isinstance(G, FgAbelianGroup):
            opaque.append(v)
            continue
        rn = gl_parameters(gamma, v)
        if rn is None:
            opaque.append(v)
            continue
        r, n = rn
        if not gl_finite(r, n):
            cert = Certificate("parabolic-automorphisms", {"gamma": gamma, "vertex": v, "r": r, "n": n},
                               {"clause": "parabolic-automorphisms", "vertex": v, "factor": f"GL_{{{r},{n}}}(Z)"})
            return infinite(cert, assumptions=assumptions, data={"clause": "parabolic-automorphisms"})
    if opaque:
        return unknown(f"undecided clauses: {', '.join(map(str, opaque))}", assumptions=assumptions,
                       data={"clause": "undecided"})
    if "exhaustive-splittings" in assumptions:
        return finite(None, assumptions=assumptions, data={"clause": "both-refuted"})
    return unknown("both clauses fail on this splitting; other splittings are not searched",
                   assumptions=assumptions + ["exhaustiveness of splittings not asserted"],
                   data={"clause": "both-refuted"})


def replay_cor_outu(cert, replay) -> bool:
    if cert.kind == "twists-infinite":
        return replay(cert.data["inner"])
    gamma, v = cert.data["gamma"], cert.data["vertex"]
    if v not in _parabolic_vertices(gamma) or not isinstance(gamma.vertex(v).group, FgAbelianGroup):
        return False
    rn = gl_parameters(gamma, v)
    return rn == (cert.data["r"], cert.data["n"]) and not gl_finite(*rn)
