"""Brute-force oracles, written without the package's normal forms or twist code.

Words are lists ``[g0, e1, g1, ..., en, gn]``; tree vertices are path words with
trailing identity.  Reduction only cancels pinches ``e i_ē(c) ē -> i_e(c)``.
"""

from __future__ import annotations

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from bassforge.abelian import FgAbelianGroup
from bassforge.finite import FiniteGroup, direct_product, quotient_by_normal_closure


class TreeOracle:
    def __init__(self, gamma):
        self.groups = {v.name: v.group for v in gamma.vertices}
        self.ends = {}
        self.image = {}  # oriented edge -> {c: i_e(c)} in the origin group
        self.out = {v.name: [] for v in gamma.vertices}
        for e in gamma.edges:
            K = e.group
            for name, o, t, inc in ((e.name, e.origin, e.terminus, e.left), ("~" + e.name, e.terminus, e.origin, e.right)):
                self.ends[name] = (o, t)
                self.image[name] = {c: inc.hom(c) for c in range(K.order)}
                self.out[o].append(name)
        self.preimage = {n: {g: c for c, g in m.items()} for n, m in self.image.items()}

    @staticmethod
    def bar(e):
        return e[1:] if e.startswith("~") else "~" + e

    def reduce(self, w):
        w = list(w)
        changed = True
        while changed:
            changed = False
            for i in range(1, len(w) - 2, 2):
                e, g, f = w[i], w[i + 1], w[i + 2]
                if f == self.bar(e) and g in self.preimage[f]:
                    c = self.preimage[f][g]
                    o = self.ends[e][0]
                    G = self.groups[o]
                    mid = self.image[e][c]
                    w[i - 1:i + 4] = [G.mul(G.mul(w[i - 1], mid), w[i + 3])]
                    changed = True
                    break
        return w

    def _vertices(self, w, start=None):
        if len(w) == 1:
            return [start]
        vs = [self.ends[w[1]][0]]
        for i in range(1, len(w), 2):
            vs.append(self.ends[w[i]][1])
        return vs

    def concat(self, u, w, v_mid):
        G = self.groups[v_mid]
        return u[:-1] + [G.mul(u[-1], w[0])] + w[1:]

    def end(self, w, start):
        return self.ends[w[-2]][1] if len(w) > 1 else start

    def fixes(self, w, start, x):
        """Does the loop ``w`` at ``start`` fix the tree vertex ``x``?"""
        xi = self._inv_path(x, start)
        y = self.concat(self.concat(xi, w, start), x, start)
        return len(self.reduce(y)) == 1

    def _inv_path(self, x, start):
        if len(x) == 1:
            return [self.groups[start].inv(x[0])]
        out = [None] * len(x)
        verts = self._vertices(x)
        for k in range(0, len(x), 2):
            out[len(x) - 1 - k] = self.groups[verts[k // 2]].inv(x[k])
        for k in range(1, len(x), 2):
            out[len(x) - 1 - k] = self.bar(x[k])
        return out

    def _coset_reps(self, e):
        o = self.ends[e][0]
        G = self.groups[o]
        H = set(self.image[e].values())
        seen, reps = set(), []
        for g in reversed(range(G.order)):
            if g in seen:
                continue
            coset = {G.mul(g, h) for h in H}
            seen |= coset
            reps.append(max(coset))
        return reps

    def children(self, x, start):
        u = self.end(x, start)
        back = x[-2] if len(x) > 1 else None
        for e in self.out[u]:
            H = set(self.image[e].values())
            for t in self._coset_reps(e):
                if back is not None and e == self.bar(back) and t in H:
                    continue
                yield x[:-1] + [t, e, self.groups[self.ends[e][1]].identity]

    def displacement(self, w, start, x):
        """Tree distance from ``x`` to ``w·x``."""
        xi = self._inv_path(x, start)
        return (len(self.reduce(self.concat(self.concat(xi, w, start), x, start))) - 1) // 2

    def fixed_vertex(self, w, start, radius=6):
        """A vertex of the radius ball fixed by ``w``, or None.

        Every child of every visited vertex is tested.  ``d(y, w·y)`` is twice the
        distance from ``y`` to the fixed set, so it drops by exactly 2 along the
        geodesic to the nearest fixed vertex; children that do not decrease it, or
        that could not reach a fixed vertex inside the ball, are pruned.
        """
        root = [self.groups[start].identity]
        stack = [(root, 0, self.displacement(w, start, root))]
        while stack:
            x, depth, d = stack.pop()
            if d == 0:
                return x
            if depth == radius:
                continue
            kids = []
            for y in self.children(x, start):
                dy = self.displacement(w, start, y)
                if dy < d and dy <= 2 * (radius - depth - 1):
                    kids.append((y, depth + 1, dy))
            kids.sort(key=lambda k: -k[2])
            stack.extend(kids)
        return None

    def fixed_reach(self, gens, start, radius=6):
        """Largest distance from the base reached inside ``Fix(<gens>)`` within the ball."""
        root = [self.groups[start].identity]
        stack = [(root, 0)]
        best = 0
        while stack:
            x, depth = stack.pop()
            best = max(best, depth)
            if depth == radius:
                return radius
            for y in self.children(x, start):
                if all(self.fixes([a], start, y) for a in gens):
                    stack.append((y, depth + 1))
        return best


def _sub_table(G: FiniteGroup, elems):
    pos = {g: i for i, g in enumerate(elems)}
    table = [[pos[G.mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, pos[G.identity], "Z", [G.names[g] for g in elems]), pos


def twist_order_bruteforce(gamma, max_order=1024):
    """Order of the group of twists of a graph of finite groups, or None when the product is too big."""
    names, factors, where = [], [], []
    for v in gamma.vertices:
        G = v.group
        for e in gamma.edges:
            for name, o, inc in ((e.name, e.origin, e.left), ("~" + e.name, e.terminus, e.right)):
                if o != v.name:
                    continue
                img = {inc.hom(c) for c in range(e.group.order)}
                Z = [g for g in range(G.order) if all(G.mul(g, h) == G.mul(h, g) for h in img)]
                K, pos = _sub_table(G, Z)
                names.append(name)
                factors.append(K)
                where.append(pos)
    if not factors:
        return 1
    total = 1
    for K in factors:
        total *= K.order
    if total > max_order:
        return None
    P = direct_product(factors, max_order=max_order)
    radix = []
    acc = 1
    for K in reversed(factors):
        radix.append(acc)
        acc *= K.order
    radix.reverse()

    def element(parts):
        coords = [K.identity for K in factors]
        for name, g in parts.items():
            i = names.index(name)
            coords[i] = where[i][g]
        return sum(c * r for c, r in zip(coords, radix))

    rels = []
    for v in gamma.vertices:
        G = v.group
        out = [n for n, K in zip(names, factors) if _origin(gamma, n) == v.name]
        if not out:
            continue
        for z in range(G.order):
            if all(G.mul(z, h) == G.mul(h, z) for h in range(G.order)):
                rels.append(element({n: z for n in out}))
    for e in gamma.edges:
        K = e.group
        for c in range(K.order):
            if all(K.mul(c, h) == K.mul(h, c) for h in range(K.order)):
                rels.append(element({e.name: e.left.hom(c), "~" + e.name: e.right.hom(c)}))
    Q, _ = quotient_by_normal_closure(P, rels)
    return Q.order


def _origin(gamma, name):
    e = gamma.edge(name.lstrip("~"))
    return e.terminus if name.startswith("~") else e.origin


def toral_matrix_free_rank(gamma):
    """Free rank of the cokernel of the assembled twist relations, via sympy's Smith form.

    Coordinates: one copy of ``G_e`` per edge on the non-abelian side and one
    copy of ``G_a`` per edge at each abelian vertex ``a``.
    """
    offset = {}
    n = 0
    for e in gamma.edges:
        offset[("edge", e.name)] = n
        n += e.group.ngens
        a = gamma.vertex(e.terminus)
        offset[("ab", e.name)] = n
        n += a.group.ngens
    rows = []
    for v in gamma.vertices:
        if not isinstance(v.group, FgAbelianGroup):
            continue
        inc = [e for e in gamma.edges if e.terminus == v.name]
        for i in range(v.group.ngens):
            row = [0] * n
            for e in inc:
                row[offset[("ab", e.name)] + i] = 1
            rows.append(row)
    for e in gamma.edges:
        for j, col in enumerate(e.right.hom.columns):
            row = [0] * n
            row[offset[("edge", e.name)] + j] = 1
            for i, x in enumerate(col):
                row[offset[("ab", e.name)] + i] = x
            rows.append(row)
    if not rows:
        return n
    D = smith_normal_form(Matrix(rows), domain=ZZ)
    nonzero = sum(1 for i in range(min(D.shape)) if D[i, i] != 0)
    return n - nonzero
