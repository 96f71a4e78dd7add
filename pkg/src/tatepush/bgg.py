"""Regularity via Koszul homology, truncation, the R and L functors, corners.

The R-strand of a module M has terms E (x) M_d with differential
a (x) m  |->  sum_i e_i a (x) x_i m.  All computations run bidegree by
bidegree on the graded-piece views, so they stay finite over a graded
polynomial base.  Kernel generators are selected minimally by scanning
bidegrees with internal degree descending, param degree ascending: any
non-unit monomial multiple of a generator lands strictly later in that scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BoundTooSmall
from .linalg import Echelon, ScalarMatrix
from .modules import (
    FreeModuleShape,
    HomogeneousMatrix,
    ModulePresentation,
    build_presentation,
)
from .rings import EPoly, PolyRing, emask_sign


def koszul_sign(mask: int, k: int) -> int:
    """Sign of dropping e_k from the sorted monomial e_mask."""
    pos = bin(mask & ((1 << k) - 1)).count("1")
    return -1 if pos & 1 else 1


# ---------------------------------------------------------------------------
# regularity
# ---------------------------------------------------------------------------


@dataclass
class RegularityReport:
    value: int
    per_tor_max: dict
    certified_up_to: int
    heuristic: bool
    method: str = "KoszulTor"


def _koszul_slice_rank(M: ModulePresentation, i, mdeg, p) -> int:
    """Rank of the Koszul differential L^i W (x) M_mdeg -> L^{i-1} W (x) M_{mdeg+1}
    on the param-degree-p slice."""
    ring = M.ring
    n1 = ring.n + 1
    if i <= 0 or i > n1:
        return 0
    src = M.graded_piece((mdeg, p))
    tgt = M.graded_piece((mdeg + 1, p))
    if src.dim == 0 or tgt.dim == 0:
        return 0
    masks_src = ring.emasks(i)
    masks_tgt = {m: a for a, m in enumerate(ring.emasks(i - 1))}
    F = ring.field
    mat = ScalarMatrix(F, len(masks_tgt) * tgt.dim, len(masks_src) * src.dim)
    for t, mask in enumerate(masks_src):
        rem = mask
        while rem:
            k = (rem & -rem).bit_length() - 1
            rem &= rem - 1
            s = koszul_sign(mask, k)
            mult = M.var_mult_matrix((mdeg, p), k)
            blk = masks_tgt[mask & ~(1 << k)]
            for r, row in enumerate(mult.rows):
                for c, v in row.items():
                    val = v if s > 0 else F.neg(v)
                    tgt_r = blk * tgt.dim + r
                    src_c = t * src.dim + c
                    cur = mat.rows[tgt_r].get(src_c)
                    nv = F.add(cur, val) if cur is not None else val
                    if F.is_zero(nv):
                        mat.rows[tgt_r].pop(src_c, None)
                    else:
                        mat.rows[tgt_r][src_c] = nv
    return mat.rank()


def tor_dimension(M: ModulePresentation, i, d, param_bound=0) -> int:
    """dim of Tor^S_i(A, M) in internal degree d (params summed to bound)."""
    ring = M.ring
    n1 = ring.n + 1
    if i < 0 or i > n1:
        return 0
    total = 0
    nch = _binom(n1, i)
    for p in range(param_bound + 1):
        mid = nch * M.graded_piece((d - i, p)).dim
        if mid == 0:
            continue
        r_out = _koszul_slice_rank(M, i, d - i, p)
        r_in = _koszul_slice_rank(M, i + 1, d - i - 1, p)
        total += mid - r_out - r_in
    return total


def _binom(n, k):
    if k < 0 or k > n:
        return 0
    r = 1
    for j in range(k):
        r = r * (n - j) // (j + 1)
    return r


def regularity(M: ModulePresentation, degree_bound=None, param_bound=0) -> RegularityReport:
    """Castelnuovo-Mumford regularity max_i (reg Tor_i - i) from Koszul homology.

    With an explicit degree_bound the result is certified up to that bound and
    a nonzero Tor class at the boundary raises BoundTooSmall.  Without one,
    internal degrees are deepened until n+2 consecutive degrees carry no Tor
    class in any homological index, and the report is flagged heuristic.
    """
    ring = M.ring
    n1 = ring.n + 1
    if not M.gens:
        return RegularityReport(0, {}, degree_bound or 0, degree_bound is None)
    dmin = M.min_gen_degree()
    per_max: dict = {}

    def scan_degree(d):
        hit = False
        for i in range(0, n1 + 1):
            if tor_dimension(M, i, d, param_bound) > 0:
                per_max[i] = d
                hit = True
        return hit

    if degree_bound is not None:
        for d in range(dmin, degree_bound + 1):
            hit = scan_degree(d)
            if hit and d == degree_bound:
                raise BoundTooSmall(
                    f"nonzero Tor at the boundary degree {degree_bound}"
                )
        cert = degree_bound
        heuristic = False
    else:
        window = n1 + 1  # n + 2 consecutive all-zero degrees
        quiet = 0
        d = dmin
        while quiet < window:
            if scan_degree(d):
                quiet = 0
            else:
                quiet += 1
            d += 1
        cert = d - 1
        heuristic = True
    value = max((dd - i for i, dd in per_max.items()), default=dmin)
    return RegularityReport(value, per_max, cert, heuristic)


# ---------------------------------------------------------------------------
# truncation
# ---------------------------------------------------------------------------


def truncate(M: ModulePresentation, s: int, param_bound=0) -> ModulePresentation:
    """Presentation of M_{>=s}: layer generators tied by multiplication
    relations, with the full relation slice at the top layer + 1.

    Exact whenever relations of the truncation are generated one degree past
    the top generator layer, which holds for s >= reg(M) (the engine's use).
    """
    ring = M.ring
    F = ring.field
    D = max(s, M.max_gen_degree())
    if all(M.graded_piece((d, p)).dim == 0
           for d in range(s, D + 1) for p in range(param_bound + 1)):
        return build_presentation(ring, [], [])
    layers = {}
    gen_bidegrees = []
    gen_names = []
    for d in range(s, D + 1):
        ag = M.a_generators(d, param_bound)
        layers[d] = ag
        for (p, _rep, tag) in ag:
            gen_bidegrees.append((d, p))
            gen_names.append(f"[{tag}]@{d}")
    offsets = {}
    off = 0
    for d in range(s, D + 1):
        offsets[d] = off
        off += len(layers[d])
    cols = []
    # linking relations x_k * g = expansion over the next layer
    for d in range(s, D):
        expand = M.agen_expander(d + 1, param_bound)
        for gi, (p, rep, _tag) in enumerate(layers[d]):
            for k in range(ring.n + 1):
                mult = M.var_mult_matrix((d, p), k)
                img = {}
                for q, v in rep.items():
                    for r, w in ((r, row[q]) for r, row in enumerate(mult.rows) if q in row):
                        cur = img.get(r)
                        nv = F.add(cur, F.mul(w, v)) if cur is not None else F.mul(w, v)
                        img[r] = nv
                img = {r: v for r, v in img.items() if not F.is_zero(v)}
                col = {offsets[d] + gi: ring.s_var(k)}
                for (gj, am), c in expand(p, img).items():
                    poly = ring.spoly({(((0,) * (ring.n + 1)), am): F.neg(c)})
                    key = offsets[d + 1] + gj
                    col[key] = col.get(key, ring.spoly()) + poly
                cols.append(col)
    # top-layer kernel relations at degree D+1
    top = layers[D]
    for p in range(param_bound + 1):
        tgt = M.graded_piece((D + 1, p))
        # columns: x_k * a^nu * g_i landing at (D+1, p)
        colkeys = []
        data = []
        for gi, (pg, rep, _tag) in enumerate(top):
            for am in ring.amonomials(p - pg):
                for k in range(ring.n + 1):
                    img0 = M._amono_image(D, pg, rep, am, M.graded_piece((D, p)))
                    mult = M.var_mult_matrix((D, p), k)
                    img = {}
                    for q, v in img0.items():
                        for r, row in enumerate(mult.rows):
                            w = row.get(q)
                            if w is None:
                                continue
                            cur = img.get(r)
                            nv = F.add(cur, F.mul(w, v)) if cur is not None else F.mul(w, v)
                            img[r] = nv
                    img = {r: v for r, v in img.items() if not F.is_zero(v)}
                    colkeys.append((gi, am, k))
                    data.append(img)
        if not colkeys:
            continue
        mat = ScalarMatrix(F, tgt.dim, len(colkeys))
        for j, img in enumerate(data):
            for r, v in img.items():
                mat.rows[r][j] = v
        ker = mat.kernel_basis()
        for j in range(ker.ncols):
            col = {}
            for rowpos in range(ker.nrows):
                v = ker.entry(rowpos, j)
                if F.is_zero(v):
                    continue
                gi, am, k = colkeys[rowpos]
                xexp = [0] * (ring.n + 1)
                xexp[k] = 1
                poly = ring.spoly({(tuple(xexp), am): v})
                key = offsets[D] + gi
                col[key] = col.get(key, ring.spoly()) + poly
            if col:
                cols.append(col)
    return build_presentation(ring, gen_bidegrees, cols, gen_names)


# ---------------------------------------------------------------------------
# the R functor
# ---------------------------------------------------------------------------


class RStrand:
    """The complex ... -> E (x) M_d -> E (x) M_{d+1} -> ... on a degree range,
    exposed through per-bidegree scalar slices."""

    def __init__(self, M: ModulePresentation, d0, d1, param_bound=0):
        self.M = M
        self.d0, self.d1 = d0, d1
        self.param_bound = param_bound
        self.ring = M.ring
        self._slices = {}

    def term_slice_basis(self, d, bidegree):
        """Basis (mask, q) of the (i,p)-slice of E (x) M_d."""
        i, p = bidegree
        esize = d - i
        ring = self.ring
        if esize < 0 or esize > ring.n + 1:
            return []
        view = self.M.graded_piece((d, p))
        return [(mask, q) for mask in ring.emasks(esize) for q in range(view.dim)]

    def slice_matrix(self, d, bidegree) -> ScalarMatrix:
        """Matrix of E (x) M_d -> E (x) M_{d+1} on the bidegree slice."""
        key = (d, tuple(bidegree))
        m = self._slices.get(key)
        if m is not None:
            return m
        i, p = bidegree
        ring = self.ring
        F = ring.field
        src = self.term_slice_basis(d, bidegree)
        tgt = self.term_slice_basis(d + 1, bidegree)
        tdim_view = self.M.graded_piece((d + 1, p)).dim
        masks_tgt = {mm: a for a, mm in enumerate(ring.emasks(d + 1 - i))}
        mat = ScalarMatrix(F, len(tgt), len(src))
        if src and tgt:
            sdim_view = self.M.graded_piece((d, p)).dim
            mults = [self.M.var_mult_matrix((d, p), k) for k in range(ring.n + 1)]
            for t, mask in enumerate(ring.emasks(d - i)):
                for k in range(ring.n + 1):
                    if mask >> k & 1:
                        continue
                    s = emask_sign(1 << k, mask)
                    blk = masks_tgt[mask | (1 << k)]
                    mult = mults[k]
                    for r, row in enumerate(mult.rows):
                        for c, v in row.items():
                            val = v if s > 0 else F.neg(v)
                            rr = blk * tdim_view + r
                            cc = t * sdim_view + c
                            cur = mat.rows[rr].get(cc)
                            nv = F.add(cur, val) if cur is not None else val
                            if F.is_zero(nv):
                                mat.rows[rr].pop(cc, None)
                            else:
                                mat.rows[rr][cc] = nv
        self._slices[key] = mat
        return mat

    def agen_matrix(self, d) -> HomogeneousMatrix:
        """The differential E (x) M_d -> E (x) M_{d+1} over minimal A-generator
        blocks, as a homogeneous matrix over E (x) A."""
        ring = self.ring
        F = ring.field
        pb = self.param_bound
        src_gens = self.M.a_generators(d, pb)
        expand = self.M.agen_expander(d + 1, pb)
        tgt_gens = expand.gens
        dom = FreeModuleShape(ring, "E", [(d, p) for (p, _r, _t) in src_gens])
        cod = FreeModuleShape(ring, "E", [(d + 1, p) for (p, _r, _t) in tgt_gens])
        entries = {}
        for ci, (p, rep, _tag) in enumerate(src_gens):
            mults = [self.M.var_mult_matrix((d, p), k) for k in range(ring.n + 1)]
            for k in range(ring.n + 1):
                img = {}
                for q, v in rep.items():
                    for r, row in enumerate(mults[k].rows):
                        w = row.get(q)
                        if w is None:
                            continue
                        cur = img.get(r)
                        img[r] = F.add(cur, F.mul(w, v)) if cur is not None else F.mul(w, v)
                img = {r: v for r, v in img.items() if not F.is_zero(v)}
                for (gj, am), c in expand(p, img).items():
                    term = EPoly(ring, {(1 << k, am): c})
                    key = (gj, ci)
                    entries[key] = entries.get(key, ring.epoly()) + term
        return HomogeneousMatrix(dom, cod, {k: v for k, v in entries.items() if not v.is_zero()})

    def exactness_table(self, degrees, internal_window, param_bound=None):
        """Per middle term E (x) M_d and bidegree: rank(in) + rank(out) == dim."""
        pb = self.param_bound if param_bound is None else param_bound
        out = {}
        for d in degrees:
            for i in internal_window:
                for p in range(pb + 1):
                    mid = len(self.term_slice_basis(d, (i, p)))
                    if mid == 0:
                        continue
                    r_in = self.slice_matrix(d - 1, (i, p)).rank()
                    r_out = self.slice_matrix(d, (i, p)).rank()
                    out[(d, i, p)] = (r_in + r_out == mid, mid, r_in, r_out)
        return out


def bgg_R(M: ModulePresentation, d_range, param_bound=0) -> RStrand:
    return RStrand(M, d_range[0], d_range[1], param_bound)


# ---------------------------------------------------------------------------
# corner module
# ---------------------------------------------------------------------------


@dataclass
class CornerGenerator:
    bidegree: tuple
    rep: dict  # (mask, qindex in view of M_{s+1} at its param slice) -> coeff


@dataclass
class CornerModule:
    M: ModulePresentation
    s: int
    gens: list
    param_bound: int
    boundary_touching: bool = False

    @property
    def rank(self):
        return len(self.gens)

    def block_ranks(self):
        out = {}
        for g in self.gens:
            out[g.bidegree] = out.get(g.bidegree, 0) + 1
        return out


def corner_module(M: ModulePresentation, s: int, param_bound=0) -> CornerModule:
    """Minimal homogeneous generators of ker(E (x) M_{s+1} -> E (x) M_{s+2}),
    scanned internal degree descending / param degree ascending."""
    ring = M.ring
    F = ring.field
    n = ring.n
    strand = RStrand(M, s + 1, s + 2, param_bound)
    gens: list = []
    boundary = False
    for j in range(s + 1, s - n - 1, -1):
        for p in range(param_bound + 1):
            src = strand.term_slice_basis(s + 1, (j, p))
            if not src:
                continue
            ker = strand.slice_matrix(s + 1, (j, p)).kernel_basis()
            if ker.ncols == 0:
                continue
            span = Echelon(F)
            view = M.graded_piece((s + 1, p))
            index = {(mask, q): t for t, (mask, q) in enumerate(src)}
            for g in gens:
                gj, gp = g.bidegree
                prods = _corner_products(M, s + 1, g, (j, p), index, ring)
                for vec in prods:
                    span.insert(vec)
            for cidx in range(ker.ncols):
                vec = {r: ker.entry(r, cidx) for r in range(ker.nrows)
                       if not F.is_zero(ker.entry(r, cidx))}
                if span.insert(vec):
                    rep = {src[t]: v for t, v in vec.items()}
                    gens.append(CornerGenerator((j, p), rep))
                    if p == param_bound and param_bound > 0:
                        boundary = True
                    if param_bound == 0 and ring.pnames:
                        boundary = True
    return CornerModule(M, s, gens, param_bound, boundary)


def _corner_products(M, deg, g: CornerGenerator, bidegree, index, ring):
    """All monomial multiples of a corner generator landing in the slice."""
    F = ring.field
    gj, gp = g.bidegree
    j, p = bidegree
    esize = gj - j
    wdeg = p - gp
    if esize < 0 or wdeg < 0 or esize > ring.n + 1:
        return []
    out = []
    src_view = M.graded_piece((deg, gp))
    tgt_view = M.graded_piece((deg, p))
    for am in ring.amonomials(wdeg):
        # move the module part by the a-monomial once
        moved = {}
        for (mask, q), v in g.rep.items():
            img = M._amono_image(deg, gp, {q: v}, am, tgt_view)
            for qq, vv in img.items():
                key = (mask, qq)
                cur = moved.get(key)
                moved[key] = F.add(cur, vv) if cur is not None else vv
        moved = {k: v for k, v in moved.items() if not F.is_zero(v)}
        if not moved:
            continue
        for emask in ring.emasks(esize):
            vec = {}
            for (mask, qq), v in moved.items():
                sgn = emask_sign(emask, mask)
                if sgn == 0:
                    continue
                pos = index.get((emask | mask, qq))
                if pos is None:
                    continue
                val = v if sgn > 0 else F.neg(v)
                cur = vec.get(pos)
                nv = F.add(cur, val) if cur is not None else val
                if F.is_zero(nv):
                    vec.pop(pos, None)
                else:
                    vec[pos] = nv
            if vec:
                out.append(vec)
    return out


# ---------------------------------------------------------------------------
# graded E-modules and the L functor
# ---------------------------------------------------------------------------


class GradedEModule:
    """Finite graded E-module given by piece dimensions and e_i-actions
    (field base).  action(i, j): piece_j -> piece_{j-1}."""

    def __init__(self, ring: PolyRing, pieces: dict, actions: dict):
        self.ring = ring
        self.pieces = {j: d for j, d in pieces.items() if d > 0}
        self.actions = actions

    @classmethod
    def exterior_algebra(cls, ring: PolyRing):
        """E itself: piece at degree -s is Lambda^s V."""
        n1 = ring.n + 1
        F = ring.field
        pieces = {-s: _binom(n1, s) for s in range(n1 + 1)}
        actions = {}
        for s in range(n1):
            src = ring.emasks(s)
            tgt = {m: a for a, m in enumerate(ring.emasks(s + 1))}
            for i in range(n1):
                mat = ScalarMatrix(F, len(tgt), len(src))
                for c, mask in enumerate(src):
                    sgn = emask_sign(1 << i, mask)
                    if sgn == 0:
                        continue
                    mat.rows[tgt[mask | (1 << i)]][c] = F.one if sgn > 0 else F.neg(F.one)
                actions[(i, -s)] = mat
        return cls(ring, pieces, actions)

    @classmethod
    def single_block(cls, ring: PolyRing, j: int, dim: int):
        return cls(ring, {j: dim}, {})

    @classmethod
    def from_corner(cls, corner: CornerModule, shift=None):
        """Corner kernel as a graded E-module; degrees shifted by +(n+1) so
        that L of the result resolves M_{>s} with the right twists."""
        M = corner.M
        ring = M.ring
        assert ring.is_field_base, "corner E-module extraction needs a field base"
        n1 = ring.n + 1
        if shift is None:
            shift = n1
        s = corner.s
        strand = RStrand(M, s + 1, s + 2, 0)
        F = ring.field
        pieces = {}
        bases = {}
        for j in range(s + 1, s - ring.n - 2, -1):
            srcb = strand.term_slice_basis(s + 1, (j, 0))
            if not srcb:
                continue
            ker = strand.slice_matrix(s + 1, (j, 0)).kernel_basis()
            if ker.ncols:
                pieces[j + shift] = ker.ncols
                bases[j] = (srcb, ker)
        actions = {}
        for j, (srcb, ker) in bases.items():
            if (j - 1) not in bases:
                continue
            tgtb, tker = bases[j - 1]
            tindex = {b: t for t, b in enumerate(tgtb)}
            for i in range(n1):
                cols = ScalarMatrix(F, len(tgtb), ker.ncols)
                for c in range(ker.ncols):
                    for r in range(ker.nrows):
                        v = ker.entry(r, c)
                        if F.is_zero(v):
                            continue
                        mask, q = srcb[r]
                        sgn = emask_sign(1 << i, mask)
                        if sgn == 0:
                            continue
                        pos = tindex.get((mask | (1 << i), q))
                        if pos is None:
                            continue
                        val = v if sgn > 0 else F.neg(v)
                        cur = cols.rows[pos].get(c)
                        nv = F.add(cur, val) if cur is not None else val
                        if F.is_zero(nv):
                            cols.rows[pos].pop(c, None)
                        else:
                            cols.rows[pos][c] = nv
                sol = tker.solve(cols)
                if sol is None:
                    raise RuntimeError("e-action does not preserve the corner kernel")
                actions[(i, j + shift)] = sol
        return cls(ring, pieces, actions)

    def action(self, i, j) -> ScalarMatrix:
        m = self.actions.get((i, j))
        if m is None:
            F = self.ring.field
            m = ScalarMatrix(F, self.pieces.get(j - 1, 0), self.pieces.get(j, 0))
        return m


@dataclass
class LComplex:
    """Complex of free S-modules S (x) P_j -> S (x) P_{j-1}; the block at
    degree j has generators in internal degree j."""

    ring: PolyRing
    blocks: dict  # j -> rank
    differentials: dict  # j -> HomogeneousMatrix (block j -> block j-1)

    def term_shape(self, j):
        return FreeModuleShape(self.ring, "S", [(j, 0)] * self.blocks.get(j, 0))

    def homology_dim(self, j, internal_degree) -> int:
        """dim of homology at block j in one internal degree (field base)."""
        din = self.differentials.get(j + 1)
        dout = self.differentials.get(j)
        shape = self.term_shape(j)
        mid = shape.slice_dim((internal_degree, 0))
        r_in = din.slice_matrix((internal_degree, 0)).rank() if din is not None else 0
        r_out = dout.slice_matrix((internal_degree, 0)).rank() if dout is not None else 0
        return mid - r_in - r_out


def bgg_L(P: GradedEModule) -> LComplex:
    """L(P): ... -> S (x) P_j -> S (x) P_{j-1} -> ...,
    f (x) p |-> sum_i x_i f (x) e_i p."""
    ring = P.ring
    F = ring.field
    blocks = dict(P.pieces)
    diffs = {}
    for j in sorted(blocks):
        if (j - 1) not in blocks and not any(
            P.actions.get((i, j)) is not None and P.actions[(i, j)].nrows
            for i in range(ring.n + 1)
        ):
            continue
        src = FreeModuleShape(ring, "S", [(j, 0)] * blocks[j])
        tgt_rank = blocks.get(j - 1, 0)
        tgt = FreeModuleShape(ring, "S", [(j - 1, 0)] * tgt_rank)
        entries = {}
        for i in range(ring.n + 1):
            act = P.action(i, j)
            for r in range(act.nrows):
                for c, v in act.rows[r].items():
                    term = ring.s_var(i).scale(v)
                    key = (r, c)
                    entries[key] = entries.get(key, ring.spoly()) + term
        diffs[j] = HomogeneousMatrix(src, tgt, {k: v for k, v in entries.items() if not v.is_zero()})
    return LComplex(ring, blocks, diffs)
