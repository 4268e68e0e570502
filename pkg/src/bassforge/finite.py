"""Explicit finite groups given by multiplication tables.

Everything here is brute force over the Cayley table.  Elements are integer
indices ``0 .. order-1``; subgroups are sorted index tuples so that equality
of subgroups is plain tuple equality.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Optional, Sequence

MAX_ORDER = 512


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group stored as its full multiplication table.

    ``table[a][b]`` is the index of ``a*b``.  ``names`` gives the printable
    name of every element; ``constructor`` records how the group was built
    (``"cyclic(4)"``, ``"dihedral(3)"``) or is ``None`` for raw tables.
    """

    def __init__(self, table, identity=0, name="G", names=None, constructor=None,
                 max_order=MAX_ORDER):
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        if n == 0:
            raise GroupError("a group has at least one element")
        if n > max_order:
            raise GroupError(f"group order {n} exceeds the cap {max_order}")
        if any(len(row) != n for row in table):
            raise GroupError("multiplication table is not square")
        self.table = table
        self.order = n
        self.identity = identity
        self.name = name
        self.names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(n))
        self.constructor = constructor
        if len(self.names) != n:
            raise GroupError("one name per element is required")

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def mul(self, a, b):
        return self.table[a][b]

    def prod(self, elements: Iterable[int]) -> int:
        x = self.identity
        for g in elements:
            x = self.table[x][g]
        return x

    @cached_property
    def _inverses(self):
        inv = [None] * self.order
        for a in range(self.order):
            row = self.table[a]
            for b in range(self.order):
                if row[b] == self.identity:
                    inv[a] = b
                    break
        return tuple(inv)

    def inv(self, a):
        return self._inverses[a]

    def conj(self, g, x):
        """``g x g^-1``."""
        return self.table[self.table[g][x]][self._inverses[g]]

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        x = self.identity
        for _ in range(k):
            x = self.table[x][a]
        return x

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    @cached_property
    def index_of(self):
        return {name: i for i, name in enumerate(self.names)}

    def element(self, name: str) -> int:
        """Look up an element by name; ``*``-separated products are allowed."""
        parts = [p.strip() for p in name.split("*")]
        try:
            return self.prod(self.index_of[p] for p in parts)
        except KeyError as exc:
            raise GroupError(f"{self.name} has no element named {exc.args[0]!r}") from None

    def audit(self) -> list:
        """Check the group axioms; returns a list of violations (empty if valid)."""
        problems = []
        n, t, e = self.order, self.table, self.identity
        if not 0 <= e < n:
            return [f"identity index {e} out of range"]
        for a in range(n):
            if any(not 0 <= x < n for x in t[a]):
                return [f"row {a} has entries out of range"]
            if t[e][a] != a or t[a][e] != a:
                problems.append(f"{self.names[a]}: identity law fails")
            if self._inverses[a] is None or t[self._inverses[a]][a] != e:
                problems.append(f"{self.names[a]}: no two-sided inverse")
        if problems:
            return problems
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                problems.append(f"associativity fails at ({self.names[a]},{self.names[b]},{self.names[c]})")
                break
        return problems

    @cached_property
    def generators(self) -> tuple:
        """A small generating set, chosen greedily in index order."""
        gens = []
        span = {self.identity}
        for g in range(self.order):
            if g not in span:
                gens.append(g)
                span = set(generated(self, gens).elements)
                if len(span) == self.order:
                    break
        return tuple(gens)

    def is_abelian(self):
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def signature(self):
        """Isomorphism invariant used to prune isomorphism searches."""
        counts = {}
        for a in range(self.order):
            k = self.element_order(a)
            counts[k] = counts.get(k, 0) + 1
        return (self.order, tuple(sorted(counts.items())), len(center(self)))


class Subgroup:
    """A subgroup of ``parent`` stored as a sorted tuple of element indices."""

    __slots__ = ("parent", "elements", "_set")

    def __init__(self, parent: FiniteGroup, elements: Iterable[int]):
        self.parent = parent
        self.elements = tuple(sorted(set(elements)))
        self._set = frozenset(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._set

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent is other.parent and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __le__(self, other):
        return self._set <= other._set

    def __repr__(self):
        names = ", ".join(self.parent.names[g] for g in self.elements[:8])
        more = ", ..." if len(self.elements) > 8 else ""
        return f"<{names}{more}> < {self.parent.name}"

    @property
    def order(self):
        return len(self.elements)

    def is_closed(self):
        G = self.parent
        return (G.identity in self._set
                and all(G.mul(a, b) in self._set for a in self.elements for b in self.elements)
                and all(G.inv(a) in self._set for a in self.elements))

    def conjugate(self, g) -> "Subgroup":
        return Subgroup(self.parent, (self.parent.conj(g, h) for h in self.elements))

    def as_group(self, name=None):
        """This subgroup as a standalone group, with the inclusion into the parent."""
        return subgroup_as_group(self, name)


class GroupHom:
    """Homomorphism between finite groups, stored as a full image table."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images: Sequence[int]):
        self.source = source
        self.target = target
        self.images = tuple(images)

    def __call__(self, g):
        return self.images[g]

    def __repr__(self):
        return f"GroupHom({self.source.name} -> {self.target.name})"

    @classmethod
    def from_generators(cls, source, target, gen_images, generators=None):
        """Extend images of ``generators`` (default: ``source.generators``) to a hom.

        Raises GroupError if the assignment does not define a homomorphism.
        """
        gens = tuple(source.generators if generators is None else generators)
        gen_images = tuple(gen_images)
        if len(gens) != len(gen_images):
            raise GroupError(f"expected {len(gens)} generator images for {source.name}, got {len(gen_images)}")
        images = {source.identity: target.identity}
        frontier = [source.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, img in zip(gens, gen_images):
                    y = source.mul(x, g)
                    val = target.mul(images[x], img)
                    if y not in images:
                        images[y] = val
                        nxt.append(y)
                    elif images[y] != val:
                        raise GroupError("generator images do not define a homomorphism")
            frontier = nxt
        if len(images) != source.order:
            raise GroupError("listed generators do not generate the source group")
        hom = cls(source, target, [images[g] for g in range(source.order)])
        if not hom.is_homomorphism():
            raise GroupError("generator images do not define a homomorphism")
        return hom

    @classmethod
    def identity_map(cls, G):
        return cls(G, G, range(G.order))

    def is_homomorphism(self):
        S, T, im = self.source, self.target, self.images
        return all(im[S.mul(a, b)] == T.mul(im[a], im[b]) for a in range(S.order) for b in range(S.order))

    def is_injective(self):
        return len(set(self.images)) == self.source.order

    def image(self) -> Subgroup:
        return Subgroup(self.target, self.images)

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, (g for g in range(self.source.order) if self.images[g] == self.target.identity))

    def preimage(self, h):
        """Some preimage of ``h`` (the unique one for injective maps), or None."""
        try:
            return self._preimages[h]
        except KeyError:
            return None

    @cached_property
    def _preimages(self):
        pre = {}
        for g in reversed(range(self.source.order)):
            pre[self.images[g]] = g
        return pre

    def compose(self, other: "GroupHom") -> "GroupHom":
        """``self ∘ other``."""
        return GroupHom(other.source, self.target, [self.images[x] for x in other.images])


# -- constructors -----------------------------------------------------------

def cyclic(n: int, name=None) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["e"] + ["g" if k == 1 else f"g{k}" for k in range(1, n)]
    return FiniteGroup(table, 0, name or f"Z{n}", names, constructor=f"cyclic({n})")


def trivial(name="1") -> FiniteGroup:
    return cyclic(1, name)


def dihedral(n: int, name=None) -> FiniteGroup:
    """Dihedral group of order 2n, ``<r, s | r^n, s^2, (rs)^2>``.

    Index ``k`` is ``r^k`` and index ``n+k`` is ``r^k s``; so ``r`` has index 1.
    """
    if n < 1:
        raise GroupError("dihedral(n) needs n >= 1")

    def decode(i):
        return i % n, i // n

    def encode(k, f):
        return (k % n) + n * f

    table = []
    for a in range(2 * n):
        ka, fa = decode(a)
        row = []
        for b in range(2 * n):
            kb, fb = decode(b)
            row.append(encode(ka + (kb if fa == 0 else -kb), (fa + fb) % 2))
        table.append(row)

    def rname(k):
        return "" if k == 0 else ("r" if k == 1 else f"r{k}")

    names = ["e"] + [rname(k) for k in range(1, n)]
    names += [rname(k) + "s" for k in range(n)]
    return FiniteGroup(table, 0, name or f"Dih{n}", names, constructor=f"dihedral({n})")


def dihedral_of_order(m: int, name=None) -> FiniteGroup:
    """Dihedral group with ``m`` elements (``m`` even), i.e. ``dihedral(m // 2)``."""
    if m < 2 or m % 2:
        raise GroupError("dihedral_of_order(m) needs an even m >= 2")
    return dihedral(m // 2, name)


def from_table(table, name="G", names=None, identity=None) -> FiniteGroup:
    """Build a group from a raw table, locating the identity if not given."""
    if identity is None:
        n = len(table)
        identity = next((e for e in range(n) if list(table[e]) == list(range(n))
                         and all(table[a][e] == a for a in range(n))), None)
        if identity is None:
            raise GroupError("table has no two-sided identity")
    G = FiniteGroup(table, identity, name, names, constructor=None)
    problems = G.audit()
    if problems:
        raise GroupError(f"{name}: " + "; ".join(problems[:3]))
    return G


def direct_product(factors: Sequence[FiniteGroup], name=None, max_order=MAX_ORDER) -> FiniteGroup:
    """Direct product; element index is mixed-radix with the first factor most significant."""
    orders = [F.order for F in factors]
    total = 1
    for k in orders:
        total *= k
    if total > max_order:
        raise GroupError(f"direct product of order {total} exceeds the cap {max_order}")
    tuples = list(itertools.product(*[range(k) for k in orders]))
    index = {t: i for i, t in enumerate(tuples)}
    table = [[index[tuple(F.mul(x, y) for F, x, y in zip(factors, s, t))] for t in tuples] for s in tuples]
    ident = index[tuple(F.identity for F in factors)]
    names = ["(" + ",".join(F.names[x] for F, x in zip(factors, t)) + ")" for t in tuples]
    return FiniteGroup(table, ident, name or "x".join(F.name for F in factors), names,
                       max_order=max_order)


# -- subgroup computations -------------------------------------------------

def whole(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, range(G.order))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, [G.identity])


def generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Subgroup generated by ``gens`` (closure under multiplication)."""
    gens = list(gens)
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, seen)


def _check_sub(G, H):
    if H.parent is not G:
        if H.parent.table != G.table:
            raise GroupError("subgroup does not belong to this group")
    if not H.is_closed():
        raise GroupError("element set is not a subgroup")


def center(G: FiniteGroup) -> Subgroup:
    t = G.table
    return Subgroup(G, (g for g in range(G.order) if all(t[g][x] == t[x][g] for x in range(G.order))))


def centralizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    _check_sub(G, H)
    t = G.table
    return Subgroup(G, (g for g in range(G.order) if all(t[g][h] == t[h][g] for h in H.elements)))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    _check_sub(G, H)
    hs = H._set
    return Subgroup(G, (g for g in range(G.order) if all(G.conj(g, h) in hs for h in H.elements)))


def conjugate_subgroups(G: FiniteGroup, H1: Subgroup, H2: Subgroup) -> Optional[int]:
    """Some ``g`` with ``g H1 g^-1 = H2``, or None.  The identity is preferred."""
    if len(H1) != len(H2):
        return None
    target = H2._set
    for g in range(G.order):
        if all(G.conj(g, h) in target for h in H1.elements):
            return g
    return None


def transporter_into(G: FiniteGroup, H: Subgroup, K: Subgroup) -> list:
    """All ``g`` with ``g H g^-1 ⊆ K``."""
    ks = K._set
    return [g for g in range(G.order) if all(G.conj(g, h) in ks for h in H.elements)]


def normal_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    S = set(S)
    conj = {G.conj(g, s) for g in range(G.order) for s in S}
    return generated(G, conj)


def left_cosets(G: FiniteGroup, H: Subgroup) -> list:
    """Left cosets ``gH`` as sorted tuples, ordered by their smallest element."""
    seen = set()
    cosets = []
    for g in range(G.order):
        if g in seen:
            continue
        c = tuple(sorted(G.mul(g, h) for h in H.elements))
        seen.update(c)
        cosets.append(c)
    return cosets


def quotient_by_normal_closure(G: FiniteGroup, S: Iterable[int], name=None):
    """Quotient of ``G`` by the normal closure of ``S``.

    Returns ``(Q, projection)`` where ``projection`` is a GroupHom ``G -> Q``.
    Cosets are numbered by their smallest element, so the identity coset is 0
    whenever ``G.identity`` is 0.
    """
    N = normal_closure(G, S)
    cosets = left_cosets(G, N)
    which = {}
    for i, c in enumerate(cosets):
        for g in c:
            which[g] = i
    reps = [c[0] for c in cosets]
    table = [[which[G.mul(a, b)] for b in reps] for a in reps]
    names = [G.names[r] if len(N) == 1 else f"{G.names[r]}N" for r in reps]
    Q = FiniteGroup(table, which[G.identity], name or f"{G.name}/N", names,
                    constructor=G.constructor if len(N) == 1 else None)
    return Q, GroupHom(G, Q, [which[g] for g in range(G.order)])


def subgroups(G: FiniteGroup) -> list:
    """All subgroups, via closure of subgroup pairs (fine for small groups)."""
    found = {trivial_subgroup(G).elements: trivial_subgroup(G)}
    cyclics = {}
    for g in range(G.order):
        H = generated(G, [g])
        cyclics[H.elements] = H
    found.update(cyclics)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclics.values():
                if C <= H:
                    continue
                K = generated(G, H.elements[:] + C.elements)
                if K.elements not in found:
                    found[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (len(H), H.elements))


def subgroup_as_group(H: Subgroup, name=None):
    """Re-index ``H`` as a group; returns ``(group, inclusion hom)``.

    Cyclic and dihedral subgroups are rebuilt with the standard constructors so
    that their elements carry readable names.
    """
    G = H.parent
    std = identify(G, H)
    if std is not None:
        K, images = std
        if name:
            K.name = name
        return K, GroupHom(K, G, images)
    elems = H.elements
    pos = {g: i for i, g in enumerate(elems)}
    table = [[pos[G.mul(a, b)] for b in elems] for a in elems]
    K = FiniteGroup(table, pos[G.identity], name or f"{G.name}_sub", [G.names[g] for g in elems])
    return K, GroupHom(K, G, elems)


def identify(G: FiniteGroup, H: Subgroup):
    """Recognise ``H`` as cyclic or dihedral.

    Returns ``(standard group, images)`` with ``images[i]`` the element of ``G``
    matching element ``i`` of the standard group, or None.
    """
    n = len(H)
    orders = {h: G.element_order(h) for h in H.elements}
    gen = next((h for h in H.elements if orders[h] == n), None)
    if gen is not None:
        K = cyclic(n)
        return K, [G.power(gen, k) for k in range(n)]
    if n % 2 == 0 and n >= 4:
        m = n // 2
        for r in H.elements:
            if orders[r] != m:
                continue
            rot = [G.power(r, k) for k in range(m)]
            for s in H.elements:
                if s in rot or orders[s] != 2:
                    continue
                if G.mul(G.mul(r, s), G.mul(r, s)) != G.identity:
                    continue
                K = dihedral(m)
                return K, rot + [G.mul(x, s) for x in rot]
    return None


def isomorphisms(G: FiniteGroup, H: FiniteGroup, first_only=False):
    """Enumerate isomorphisms ``G -> H`` as image tuples (backtracking on generators)."""
    if G.order != H.order or G.signature != H.signature:
        return []
    gens = G.generators
    candidates = [[h for h in range(H.order) if H.element_order(h) == G.element_order(g)] for g in gens]
    found = []
    for choice in itertools.product(*candidates):
        try:
            hom = GroupHom.from_generators(G, H, choice, gens)
        except GroupError:
            continue
        if hom.is_injective():
            found.append(hom.images)
            if first_only:
                break
    return found


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return bool(isomorphisms(G, H, first_only=True))
