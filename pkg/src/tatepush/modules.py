"""Bigraded free modules, homogeneous matrices, and finitely presented modules.

A free module is a list of generator bidegrees over S or E.  Every matrix is
bihomogeneous: entry (r,c) has bidegree colShape[c] - rowShape[r].  Finitely
presented S-modules expose per-bidegree linear-algebra views: a monomial
basis of the free cover, the echelonized relation image, and the surviving
quotient basis with deterministic representatives.
"""

from __future__ import annotations

from .errors import InhomogeneousEntry, TruncationInsufficient
from .linalg import Echelon, ScalarMatrix
from .rings import EPoly, PolyRing, SPoly, emask_sign, _fmt_xmono, _fmt_amono


class FreeModuleShape:
    """Free S- or E-module over A given by ordered generator bidegrees."""

    def __init__(self, ring: PolyRing, algebra: str, gens):
        assert algebra in ("S", "E")
        self.ring = ring
        self.algebra = algebra
        self.gens = tuple((int(i), int(p)) for (i, p) in gens)
        self._slices = {}

    @property
    def rank(self):
        return len(self.gens)

    def slice_basis(self, bidegree):
        """Ordered monomial basis (gen, monokey, aexp) of the slice."""
        key = tuple(bidegree)
        cached = self._slices.get(key)
        if cached is not None:
            return cached
        i, p = bidegree
        ring = self.ring
        out = []
        for g, (gi, gp) in enumerate(self.gens):
            ap = p - gp
            if ap < 0:
                continue
            amonos = ring.amonomials(ap)
            if not amonos:
                continue
            if self.algebra == "S":
                xdeg = i - gi
                if xdeg < 0:
                    continue
                for xm in ring.xmonomials(xdeg):
                    for am in amonos:
                        out.append((g, xm, am))
            else:
                esize = gi - i
                if esize < 0 or esize > ring.n + 1:
                    continue
                for mask in ring.emasks(esize):
                    for am in amonos:
                        out.append((g, mask, am))
        index = {b: k for k, b in enumerate(out)}
        self._slices[key] = (out, index)
        return self._slices[key]

    def slice_dim(self, bidegree):
        return len(self.slice_basis(bidegree)[0])

    def twist(self, k):
        """Shift all generator internal degrees by -k (the O(k) twist)."""
        return FreeModuleShape(self.ring, self.algebra, [(i - k, p) for (i, p) in self.gens])

    def __repr__(self):
        return f"Free{self.algebra}({self.gens})"


def mono_mul_s(key, xm, am, ring):
    g, x, a = key
    return (g, tuple(u + v for u, v in zip(x, xm)), tuple(u + v for u, v in zip(a, am)))


class HomogeneousMatrix:
    """Bihomogeneous matrix between free modules (columns = domain)."""

    def __init__(self, domain: FreeModuleShape, codomain: FreeModuleShape, entries, check=True):
        self.domain = domain
        self.codomain = codomain
        self.entries = {k: v for k, v in entries.items() if not v.is_zero()}
        if check:
            self.validate()

    def validate(self):
        for (r, c), poly in self.entries.items():
            want = (
                self.domain.gens[c][0] - self.codomain.gens[r][0],
                self.domain.gens[c][1] - self.codomain.gens[r][1],
            )
            try:
                got = poly.bidegree()
            except ValueError:
                raise InhomogeneousEntry(r, c, want, "mixed")
            if got is not None and got != want:
                raise InhomogeneousEntry(r, c, want, got)

    def entry(self, r, c):
        e = self.entries.get((r, c))
        if e is not None:
            return e
        ring = self.domain.ring
        return ring.spoly() if self.domain.algebra == "S" else ring.epoly()

    def compose(self, other: "HomogeneousMatrix") -> "HomogeneousMatrix":
        """self o other (apply other first)."""
        assert other.codomain is self.domain or other.codomain.gens == self.domain.gens
        prod: dict = {}
        by_row: dict = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                p = v * w
                if p.is_zero():
                    continue
                key = (r, c)
                cur = prod.get(key)
                prod[key] = p if cur is None else cur + p
        return HomogeneousMatrix(other.domain, self.codomain, prod, check=False)

    def is_zero(self):
        return not self.entries

    def slice_matrix(self, bidegree) -> ScalarMatrix:
        """Scalar matrix of the map on the (internal, param) slice."""
        rows, rindex = self.codomain.slice_basis(bidegree)
        cols, _ = self.domain.slice_basis(bidegree)
        ring = self.domain.ring
        F = ring.field
        m = ScalarMatrix(F, len(rows), len(cols))
        by_col: dict = {}
        for (r, c), v in self.entries.items():
            by_col.setdefault(c, []).append((r, v))
        if self.domain.algebra == "S":
            for j, (g, xm, am) in enumerate(cols):
                for r, poly in by_col.get(g, ()):
                    for (x, a), coeff in poly.terms.items():
                        key = (
                            r,
                            tuple(u + v for u, v in zip(x, xm)),
                            tuple(u + v for u, v in zip(a, am)),
                        )
                        ri = rindex.get(key)
                        if ri is not None:
                            cur = m.rows[ri].get(j)
                            nv = F.add(cur, coeff) if cur is not None else coeff
                            if F.is_zero(nv):
                                m.rows[ri].pop(j, None)
                            else:
                                m.rows[ri][j] = nv
        else:
            for j, (g, mask, am) in enumerate(cols):
                for r, poly in by_col.get(g, ()):
                    for (em, a), coeff in poly.terms.items():
                        s = emask_sign(em, mask)
                        if s == 0:
                            continue
                        key = (r, em | mask, tuple(u + v for u, v in zip(a, am)))
                        ri = rindex.get(key)
                        if ri is not None:
                            val = coeff if s > 0 else F.neg(coeff)
                            cur = m.rows[ri].get(j)
                            nv = F.add(cur, val) if cur is not None else val
                            if F.is_zero(nv):
                                m.rows[ri].pop(j, None)
                            else:
                                m.rows[ri][j] = nv
        return m

    def specialize(self, values, new_ring=None):
        """Evaluate parameters at scalar values; bidegrees keep internal part."""
        ring = self.domain.ring
        if new_ring is None:
            new_ring = PolyRing(ring.field, ring.xnames)
        dom = FreeModuleShape(new_ring, self.domain.algebra, [(i, 0) for (i, _) in self.domain.gens])
        cod = FreeModuleShape(new_ring, self.codomain.algebra, [(i, 0) for (i, _) in self.codomain.gens])
        cls = SPoly if self.domain.algebra == "S" else EPoly
        entries = {}
        for (r, c), poly in self.entries.items():
            q = poly.subst_params(values)
            if not q.is_zero():
                entries[(r, c)] = cls(new_ring, {(k[0], new_ring.zero_aexp()): v for k, v in q.terms.items()})
        return HomogeneousMatrix(dom, cod, entries, check=False)

    def __repr__(self):
        return f"HomogeneousMatrix({self.codomain.rank}x{self.domain.rank} over {self.domain.ring!r})"


class GradedPieceView:
    """Degree slice of a presented module: free basis, relation pivots, quotient."""

    def __init__(self, bidegree, free_basis, free_index, reducer: Echelon, field):
        self.bidegree = bidegree
        self.free_basis = free_basis
        self.free_index = free_index
        self.reducer = reducer
        pivots = set(reducer.pivrows)
        self.qbasis = [k for k in range(len(free_basis)) if k not in pivots]
        self.qindex = {pos: i for i, pos in enumerate(self.qbasis)}
        self.dim = len(self.qbasis)
        self.field = field

    def reduce(self, vec: dict) -> dict:
        """Free-slice coordinates -> quotient coordinates."""
        red = self.reducer.reduce(vec)
        return {self.qindex[pos]: v for pos, v in red.items()}

    def basis_tags(self, ring):
        tags = []
        for pos in self.qbasis:
            g, x, a = self.free_basis[pos]
            body = _fmt_amono(ring, a) + _fmt_xmono(ring, x)
            tags.append(("*".join(body) if body else "1", g))
        return tags


class ModulePresentation:
    """Finitely presented bigraded S-module (generators + relation matrix)."""

    def __init__(self, ring: PolyRing, gens, relations: HomogeneousMatrix, gen_names=None):
        self.ring = ring
        self.gens = tuple((int(i), int(p)) for (i, p) in gens)
        self.free = FreeModuleShape(ring, "S", self.gens)
        self.relations = relations
        self.gen_names = tuple(gen_names) if gen_names else tuple(
            f"g{k}" for k in range(len(self.gens))
        )
        self._views = {}
        self._agens = {}
        self._mult_cache = {}

    @property
    def n(self):
        return self.ring.n

    def min_gen_degree(self):
        return min((i for (i, _) in self.gens), default=0)

    def max_gen_degree(self):
        return max((i for (i, _) in self.gens), default=0)

    def graded_piece(self, bidegree) -> GradedPieceView:
        key = tuple(bidegree)
        view = self._views.get(key)
        if view is not None:
            return view
        i, p = key
        basis, index = self.free.slice_basis(key)
        F = self.ring.field
        red = Echelon(F)
        # span of all relation-column multiples landing in this slice
        relc = self.relations.domain.gens if self.relations is not None else ()
        for c, (ci, cp) in enumerate(relc):
            xdeg = i - ci
            ap = p - cp
            if xdeg < 0 or ap < 0:
                continue
            col = [
                (r, poly) for (r, cc), poly in self.relations.entries.items() if cc == c
            ]
            if not col:
                continue
            for xm in self.ring.xmonomials(xdeg):
                for am in self.ring.amonomials(ap):
                    vec: dict = {}
                    for r, poly in col:
                        for (x, a), coeff in poly.terms.items():
                            tk = (
                                r,
                                tuple(u + v for u, v in zip(x, xm)),
                                tuple(u + v for u, v in zip(a, am)),
                            )
                            pos = index.get(tk)
                            if pos is None:
                                continue
                            cur = vec.get(pos)
                            nv = F.add(cur, coeff) if cur is not None else coeff
                            if F.is_zero(nv):
                                vec.pop(pos, None)
                            else:
                                vec[pos] = nv
                    if vec:
                        red.insert(vec)
        view = GradedPieceView(key, basis, index, red, F)
        self._views[key] = view
        return view

    def var_mult_matrix(self, bidegree, k) -> ScalarMatrix:
        """Cached matrix of multiplication by x_k on the slice."""
        key = (tuple(bidegree), k)
        m = self._mult_cache.get(key)
        if m is None:
            m = self.multiplication_matrix(bidegree, self.ring.s_var(k))
            self._mult_cache[key] = m
        return m

    def multiplication_matrix(self, bidegree, poly: SPoly) -> ScalarMatrix:
        """Matrix of multiplication by a bihomogeneous poly between slice views."""
        deg = poly.bidegree()
        if deg is None:
            src = self.graded_piece(bidegree)
            return ScalarMatrix(self.ring.field, 0, src.dim)
        src = self.graded_piece(bidegree)
        tgt = self.graded_piece((bidegree[0] + deg[0], bidegree[1] + deg[1]))
        F = self.ring.field
        m = ScalarMatrix(F, tgt.dim, src.dim)
        for j, pos in enumerate(src.qbasis):
            g, xm, am = src.free_basis[pos]
            vec: dict = {}
            for (x, a), coeff in poly.terms.items():
                tk = (
                    g,
                    tuple(u + v for u, v in zip(x, xm)),
                    tuple(u + v for u, v in zip(a, am)),
                )
                tpos = tgt.free_index.get(tk)
                if tpos is None:
                    continue
                cur = vec.get(tpos)
                nv = F.add(cur, coeff) if cur is not None else coeff
                if F.is_zero(nv):
                    vec.pop(tpos, None)
                else:
                    vec[tpos] = nv
            for ri, v in tgt.reduce(vec).items():
                m.rows[ri][j] = v
        return m

    def hilbert_function(self, d_range, param_bound=0):
        """Total slice dimension per internal degree (params summed to bound)."""
        lo, hi = d_range
        out = {}
        for d in range(lo, hi + 1):
            tot = 0
            for p in range(0, param_bound + 1):
                tot += self.graded_piece((d, p)).dim
            out[d] = tot
        return out

    def a_generators(self, d, param_bound):
        """Minimal A-module generators of the degree-d layer, scanned by param
        degree; returns list of (param degree, quotient-coord rep, tag)."""
        key = (d, param_bound)
        cached = self._agens.get(key)
        if cached is not None:
            return cached
        F = self.ring.field
        gens = []
        spans = {}
        for p in range(0, param_bound + 1):
            view = self.graded_piece((d, p))
            span = Echelon(F)
            for gp, rep, _tag in gens:
                for am in self.ring.amonomials(p - gp):
                    if not any(am):
                        continue
                    vec = self._amono_image(d, gp, rep, am, view)
                    if vec:
                        span.insert(vec)
            for i in range(view.dim):
                if span.insert({i: F.one}):
                    pos = view.qbasis[i]
                    g, x, a = view.free_basis[pos]
                    body = _fmt_amono(self.ring, a) + _fmt_xmono(self.ring, x)
                    name = self.gen_names[g]
                    tag = "*".join(body) + ("*" if body else "") + name
                    gens.append((p, {i: F.one}, tag))
            spans[p] = span
        self._agens[key] = gens
        return gens

    def _amono_image(self, d, src_p, rep, am, tgt_view):
        """Image of a quotient vector under multiplication by the a-monomial."""
        F = self.ring.field
        src_view = self.graded_piece((d, src_p))
        vec: dict = {}
        for i, coeff in rep.items():
            g, x, a = src_view.free_basis[src_view.qbasis[i]]
            tk = (g, x, tuple(u + v for u, v in zip(a, am)))
            tpos = tgt_view.free_index.get(tk)
            if tpos is None:
                continue
            cur = vec.get(tpos)
            nv = F.add(cur, coeff) if cur is not None else coeff
            if F.is_zero(nv):
                vec.pop(tpos, None)
            else:
                vec[tpos] = nv
        return tgt_view.reduce(vec)

    def agen_expander(self, d, param_bound):
        """Per-slice change of basis from quotient coordinates to A-generator
        coordinates (a-monomial multiples of the minimal generators).

        Returns a function (p, qcoords) -> dict (gen index, a-exponent) -> coeff.
        Raises TruncationInsufficient when the layer is not free on the found
        generators (base-change matrix singular or not spanning).
        """
        gens = self.a_generators(d, param_bound)
        F = self.ring.field
        cache = {}

        def colkeys(p):
            keys = []
            for gi, (gp, rep, _t) in enumerate(gens):
                for am in self.ring.amonomials(p - gp):
                    keys.append((gi, am))
            return keys

        def expand(p, qcoords: dict):
            data = cache.get(p)
            if data is None:
                view = self.graded_piece((d, p))
                keys = colkeys(p)
                mat = ScalarMatrix(F, view.dim, len(keys))
                for j, (gi, am) in enumerate(keys):
                    gp, rep, _t = gens[gi]
                    img = self._amono_image(d, gp, rep, am, view)
                    for ri, v in img.items():
                        mat.rows[ri][j] = v
                pivots, rows = mat.rref()
                if len(pivots) != view.dim or len(keys) != view.dim:
                    raise TruncationInsufficient(
                        (d, p), "(degree layer not free on its minimal generators)"
                    )
                cache[p] = (mat, keys)
                data = cache[p]
            mat, keys = data
            rhs = ScalarMatrix(F, mat.nrows, 1)
            for i, v in qcoords.items():
                rhs.rows[i][0] = v
            sol = mat.solve(rhs)
            if sol is None:
                raise TruncationInsufficient((d, p), "(vector outside generator span)")
            out = {}
            for j in range(len(keys)):
                v = sol.entry(j, 0)
                if not F.is_zero(v):
                    out[keys[j]] = v
            return out

        expand.gens = gens
        return expand

    def twist(self, k):
        """Module of F(k): generator internal degrees shifted by -k."""
        gens = [(i - k, p) for (i, p) in self.gens]
        rel = None
        if self.relations is not None:
            rel = HomogeneousMatrix(
                self.relations.domain.twist(k),
                FreeModuleShape(self.ring, "S", gens),
                self.relations.entries,
                check=False,
            )
        return ModulePresentation(self.ring, gens, rel, self.gen_names)

    def specialize(self, values):
        """Substitute parameter values: module over the field base."""
        new_ring = PolyRing(self.ring.field, self.ring.xnames)
        gens = [(i, 0) for (i, _) in self.gens]
        rel = None
        if self.relations is not None:
            rel = self.relations.specialize(values, new_ring)
            keep = [c for c in range(rel.domain.rank)
                    if any(cc == c for (_, cc) in rel.entries)]
            remap = {c: j for j, c in enumerate(keep)}
            rel = HomogeneousMatrix(
                FreeModuleShape(new_ring, "S", [rel.domain.gens[c] for c in keep]),
                FreeModuleShape(new_ring, "S", gens),
                {(r, remap[c]): v for (r, c), v in rel.entries.items()},
                check=False,
            )
        return ModulePresentation(new_ring, gens, rel, self.gen_names)

    def __repr__(self):
        nrel = self.relations.domain.rank if self.relations is not None else 0
        return f"ModulePresentation({len(self.gens)} gens, {nrel} relations over {self.ring!r})"


def build_presentation(ring: PolyRing, gen_bidegrees, relation_columns, gen_names=None) -> ModulePresentation:
    """Validated constructor.  relation_columns: list of dicts gen-index -> SPoly.

    The bidegree of each relation column is inferred from its entries and the
    generator bidegrees; inhomogeneous columns raise InhomogeneousEntry.
    """
    gens = [(int(i), int(p)) for (i, p) in gen_bidegrees]
    free = FreeModuleShape(ring, "S", gens)
    coldegs = []
    entries = {}
    for c, col in enumerate(relation_columns):
        degs = set()
        for r, poly in col.items():
            if poly.is_zero():
                continue
            try:
                d = poly.bidegree()
            except ValueError as e:
                raise InhomogeneousEntry(r, c, "?", str(e))
            degs.add((d[0] + gens[r][0], d[1] + gens[r][1]))
        if not degs:
            continue
        if len(degs) > 1:
            raise InhomogeneousEntry("*", c, "consistent column bidegree", sorted(degs))
        coldegs.append(degs.pop())
        for r, poly in col.items():
            if not poly.is_zero():
                entries[(r, len(coldegs) - 1)] = poly
    rel = HomogeneousMatrix(FreeModuleShape(ring, "S", coldegs), free, entries)
    return ModulePresentation(ring, gens, rel, gen_names)


def free_module_presentation(ring: PolyRing, gen_bidegrees, gen_names=None) -> ModulePresentation:
    gens = list(gen_bidegrees)
    rel = HomogeneousMatrix(
        FreeModuleShape(ring, "S", []), FreeModuleShape(ring, "S", gens), {}
    )
    return ModulePresentation(ring, gens, rel, gen_names)
