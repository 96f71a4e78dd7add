"""Exact dense/sparse linear algebra over the scalar fields.

Matrices are stored as sparse rows (dict col -> value).  All reductions
produce the canonical reduced row echelon form, so ranks, kernel bases and
solved coordinates are reproducible no matter which pivot rows the
elimination picked.  Prime fields get a vectorized numpy int64 path.
"""

from __future__ import annotations

import numpy as np

from .fields import PrimeField


class ScalarMatrix:
    """Sparse exact matrix with canonical echelon reductions."""

    def __init__(self, field, nrows, ncols, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]
        self._rref = None

    @classmethod
    def from_dense(cls, field, data):
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        m = cls(field, nrows, ncols)
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                if not field.is_zero(v):
                    m.rows[i][j] = v
        return m

    @classmethod
    def from_entries(cls, field, nrows, ncols, entries):
        m = cls(field, nrows, ncols)
        for (i, j), v in entries.items():
            if not field.is_zero(v):
                m.rows[i][j] = v
        return m

    @classmethod
    def identity(cls, field, n):
        m = cls(field, n, n)
        for i in range(n):
            m.rows[i][i] = m.field.one
        return m

    def entry(self, i, j):
        return self.rows[i].get(j, self.field.zero)

    def set_entry(self, i, j, v):
        self._rref = None
        if self.field.is_zero(v):
            self.rows[i].pop(j, None)
        else:
            self.rows[i][j] = v

    def is_zero(self):
        return all(not r for r in self.rows)

    def dense(self):
        z = self.field.zero
        return [
            [self.rows[i].get(j, z) for j in range(self.ncols)]
            for i in range(self.nrows)
        ]

    def transpose(self):
        m = ScalarMatrix(self.field, self.ncols, self.nrows)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                m.rows[j][i] = v
        return m

    def hstack(self, other):
        assert self.nrows == other.nrows and self.field is other.field
        m = ScalarMatrix(self.field, self.nrows, self.ncols + other.ncols)
        for i in range(self.nrows):
            row = dict(self.rows[i])
            for j, v in other.rows[i].items():
                row[j + self.ncols] = v
            m.rows[i] = row
        return m

    def matmul(self, other):
        assert self.ncols == other.nrows
        F = self.field
        m = ScalarMatrix(F, self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            acc: dict = {}
            for k, v in row.items():
                for j, w in other.rows[k].items():
                    p = F.mul(v, w)
                    if j in acc:
                        acc[j] = F.add(acc[j], p)
                    else:
                        acc[j] = p
            m.rows[i] = {j: v for j, v in acc.items() if not F.is_zero(v)}
        return m

    def matvec(self, vec: dict) -> dict:
        F = self.field
        out: dict = {}
        for i, row in enumerate(self.rows):
            acc = F.zero
            hit = False
            for j, v in row.items():
                if j in vec:
                    acc = F.add(acc, F.mul(v, vec[j]))
                    hit = True
            if hit and not F.is_zero(acc):
                out[i] = acc
        return out

    # -- reductions -------------------------------------------------------

    def rref(self):
        """(pivot columns, reduced rows).  Canonical; cached."""
        if self._rref is None:
            if isinstance(self.field, PrimeField):
                self._rref = _rref_modp(self)
            else:
                self._rref = _rref_generic(self)
        return self._rref

    def rank(self):
        return len(self.rref()[0])

    def kernel_basis(self):
        """Columns spanning the right kernel, as a ScalarMatrix.

        Canonical: one basis vector per free column, ordered by column index,
        with unit coordinate at its free column.
        """
        pivots, rows = self.rref()
        F = self.field
        pivset = dict(zip(pivots, range(len(pivots))))
        free = [j for j in range(self.ncols) if j not in pivset]
        ker = ScalarMatrix(F, self.ncols, len(free))
        for k, j in enumerate(free):
            ker.rows[j][k] = F.one
            for r, pc in enumerate(pivots):
                v = rows[r].get(j)
                if v is not None:
                    ker.rows[pc][k] = F.neg(v)
        return ker

    def solve(self, rhs: "ScalarMatrix"):
        """Solve self @ X = rhs; returns X or None if inconsistent.

        Picks the canonical solution with zero coordinates at free columns.
        """
        aug = self.hstack(rhs)
        pivots, rows = aug.rref()
        F = self.field
        for pc in pivots:
            if pc >= self.ncols:
                return None
        X = ScalarMatrix(F, self.ncols, rhs.ncols)
        for r, pc in enumerate(pivots):
            for j, v in rows[r].items():
                if j >= self.ncols:
                    X.rows[pc][j - self.ncols] = v
        return X

    def eval_dense_int(self):
        """int64 array for prime-field matrices."""
        assert isinstance(self.field, PrimeField)
        a = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                a[i, j] = v
        return a

    def __repr__(self):
        return f"ScalarMatrix({self.field.name}, {self.nrows}x{self.ncols})"


def _rref_generic(m: ScalarMatrix):
    """Sparse fraction-capable RREF; pivot row chosen sparsest for fill control."""
    F = m.field
    work = [dict(r) for r in m.rows]
    active = [i for i in range(m.nrows) if work[i]]
    piv_rows = []  # (pivot col, row dict) in pivot-col order
    for col in range(m.ncols):
        cand = None
        best = None
        for i in active:
            v = work[i].get(col)
            if v is not None:
                nnz = len(work[i])
                if best is None or nnz < best:
                    best = nnz
                    cand = i
        if cand is None:
            continue
        active.remove(cand)
        prow = work[cand]
        inv = F.inv(prow[col])
        prow = {j: F.mul(inv, v) for j, v in prow.items()}
        for i in active:
            v = work[i].get(col)
            if v is None:
                continue
            row = work[i]
            for j, pv in prow.items():
                d = F.mul(v, pv)
                cur = row.get(j)
                nv = F.sub(cur, d) if cur is not None else F.neg(d)
                if F.is_zero(nv):
                    row.pop(j, None)
                else:
                    row[j] = nv
        active = [i for i in active if work[i]]
        piv_rows.append((col, prow))
    # back substitution to reduced form
    piv_rows.sort(key=lambda t: t[0])
    for k in range(len(piv_rows) - 1, -1, -1):
        col, prow = piv_rows[k]
        for kk in range(k):
            _, above = piv_rows[kk]
            v = above.get(col)
            if v is None:
                continue
            for j, pv in prow.items():
                d = F.mul(v, pv)
                cur = above.get(j)
                nv = F.sub(cur, d) if cur is not None else F.neg(d)
                if F.is_zero(nv):
                    above.pop(j, None)
                else:
                    above[j] = nv
    pivots = [c for c, _ in piv_rows]
    return pivots, [r for _, r in piv_rows]


def _rref_modp(m: ScalarMatrix):
    p = m.field.p
    a = m.eval_dense_int()
    pivots, red = rref_modp_array(a, p)
    rows = []
    for r in red:
        nz = np.nonzero(r)[0]
        rows.append({int(j): int(r[j]) for j in nz})
    return pivots, rows


def rref_modp_array(a: np.ndarray, p: int):
    """Canonical RREF of an int64 array mod p: (pivot cols, pivot row array)."""
    a = a % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        sub = a[r:, col]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, col]), -1, p)
        a[r] = (a[r] * inv) % p
        colvals = a[:, col].copy()
        colvals[r] = 0
        mask = colvals != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(colvals[mask], a[r])) % p
        pivots.append(col)
        r += 1
    return pivots, a[: len(pivots)]


def rank_modp_dense(a: np.ndarray, p: int) -> int:
    """Rank of an int64 matrix mod p (no canonical form needed)."""
    a = a % p
    nrows, ncols = a.shape
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        sub = a[r:, col]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, col]), -1, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1 :, col]
        mask = below != 0
        if mask.any():
            rows = np.nonzero(mask)[0] + r + 1
            a[rows] = (a[rows] - np.outer(a[rows, col], a[r])) % p
        r += 1
    return r


class Echelon:
    """Incremental row-echelon container for span/membership queries."""

    def __init__(self, field):
        self.field = field
        self.pivrows = {}  # pivot col -> row dict (pivot normalized to 1)

    def reduce(self, vec: dict) -> dict:
        F = self.field
        vec = dict(vec)
        while vec:
            c = min(vec)
            prow = self.pivrows.get(c)
            if prow is None:
                return vec
            v = vec[c]
            for j, pv in prow.items():
                d = F.mul(v, pv)
                cur = vec.get(j)
                nv = F.sub(cur, d) if cur is not None else F.neg(d)
                if F.is_zero(nv):
                    vec.pop(j, None)
                else:
                    vec[j] = nv
        return vec

    def insert(self, vec: dict) -> bool:
        """Reduce and insert; True if the vector enlarged the span."""
        res = self.reduce(vec)
        if not res:
            return False
        F = self.field
        c = min(res)
        inv = F.inv(res[c])
        self.pivrows[c] = {j: F.mul(inv, v) for j, v in res.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self):
        return len(self.pivrows)
