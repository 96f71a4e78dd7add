"""Bigraded rings: base ring A, symmetric algebra S = A[x], exterior algebra E.

Bidegrees are pairs (internal, param): the x_i carry internal degree +1, the
e_i internal degree -1, and the base-ring parameters carry positive weights
on the param axis.  Polynomials are term dicts keyed by monomials; exterior
monomials are bitmasks over the e-variables with shuffle-sign multiplication.
"""

from __future__ import annotations

from functools import lru_cache


class PolyRing:
    """Shared descriptor for A, S = A[x_0..x_n] and E = A<e_0..e_n>."""

    def __init__(self, field, xnames, pnames=(), pweights=None):
        self.field = field
        self.xnames = tuple(xnames)
        self.n = len(self.xnames) - 1
        self.pnames = tuple(pnames)
        self.pweights = tuple(pweights) if pweights is not None else (1,) * len(self.pnames)
        if len(self.pweights) != len(self.pnames):
            raise ValueError("one weight per parameter")
        if any(w < 1 for w in self.pweights):
            raise ValueError("parameter weights must be >= 1")
        if set(self.xnames) & set(self.pnames):
            raise ValueError("parameter names must be disjoint from variable names")
        self.enames = tuple("e" + str(i) for i in range(self.n + 1))
        self._amono_cache = {}

    @property
    def nparams(self):
        return len(self.pnames)

    @property
    def is_field_base(self):
        return not self.pnames

    def zero_aexp(self):
        return (0,) * self.nparams

    def wdeg(self, aexp):
        return sum(w * e for w, e in zip(self.pweights, aexp))

    def amonomials(self, wdeg: int):
        """All parameter exponent tuples of exact weighted degree, lex order."""
        if wdeg < 0:
            return []
        key = wdeg
        cached = self._amono_cache.get(key)
        if cached is not None:
            return cached
        out = []

        def rec(i, rem, acc):
            if i == self.nparams:
                if rem == 0:
                    out.append(tuple(acc))
                return
            w = self.pweights[i]
            for k in range(rem // w, -1, -1):
                acc.append(k)
                rec(i + 1, rem - k * w, acc)
                acc.pop()

        rec(0, wdeg, [])
        out.sort(reverse=True)
        self._amono_cache[key] = out
        return out

    def xmonomials(self, deg: int):
        return _xmonomials(self.n + 1, deg)

    def emasks(self, size: int):
        return _emasks(self.n + 1, size)

    def spoly(self, terms=None):
        return SPoly(self, terms or {})

    def epoly(self, terms=None):
        return EPoly(self, terms or {})

    def s_const(self, c):
        if self.field.is_zero(c):
            return SPoly(self, {})
        return SPoly(self, {((0,) * (self.n + 1), self.zero_aexp()): c})

    def s_var(self, i):
        x = [0] * (self.n + 1)
        x[i] = 1
        return SPoly(self, {(tuple(x), self.zero_aexp()): self.field.one})

    def s_param(self, i):
        a = [0] * self.nparams
        a[i] = 1
        return SPoly(self, {((0,) * (self.n + 1), tuple(a)): self.field.one})

    def e_const(self, c):
        if self.field.is_zero(c):
            return EPoly(self, {})
        return EPoly(self, {(0, self.zero_aexp()): c})

    def e_var(self, i):
        return EPoly(self, {(1 << i, self.zero_aexp()): self.field.one})

    def e_param(self, i):
        a = [0] * self.nparams
        a[i] = 1
        return EPoly(self, {(0, tuple(a)): self.field.one})

    def __repr__(self):
        base = self.field.name
        if self.pnames:
            ws = ",".join(
                f"{a}({w})" if w != 1 else a
                for a, w in zip(self.pnames, self.pweights)
            )
            base = f"{base}[{ws}]"
        return f"{base}[{','.join(self.xnames)}]"


@lru_cache(maxsize=None)
def _xmonomials(nvars: int, deg: int):
    if deg < 0:
        return ()
    if nvars == 1:
        return ((deg,),)
    out = []
    for k in range(deg, -1, -1):
        for rest in _xmonomials(nvars - 1, deg - k):
            out.append((k,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _emasks(nvars: int, size: int):
    """Bitmasks with `size` bits among nvars, in graded-colex (integer) order."""
    if size < 0 or size > nvars:
        return ()
    return tuple(sorted(m for m in range(1 << nvars) if bin(m).count("1") == size))


def emask_sign(a: int, b: int) -> int:
    """Sign s with e_a * e_b = s * e_{a|b}; 0 if the masks overlap."""
    if a & b:
        return 0
    # count inversions: pairs (i in a, j in b) with i > j
    inv = 0
    bb = b
    while bb:
        j = (bb & -bb).bit_length() - 1
        inv += bin(a >> (j + 1)).count("1")
        bb &= bb - 1
    return -1 if inv & 1 else 1


def _add_term(field, terms, key, val):
    cur = terms.get(key)
    nv = field.add(cur, val) if cur is not None else val
    if field.is_zero(nv):
        terms.pop(key, None)
    else:
        terms[key] = nv


class SPoly:
    """Element of S = A[x_0..x_n]; terms keyed by (x-exponents, a-exponents)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SPoly) and self.terms == other.terms

    def __add__(self, other):
        F = self.ring.field
        terms = dict(self.terms)
        for k, v in other.terms.items():
            _add_term(F, terms, k, v)
        return SPoly(self.ring, terms)

    def __neg__(self):
        F = self.ring.field
        return SPoly(self.ring, {k: F.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.ring.field
        terms: dict = {}
        for (x1, a1), c1 in self.terms.items():
            for (x2, a2), c2 in other.terms.items():
                key = (
                    tuple(u + v for u, v in zip(x1, x2)),
                    tuple(u + v for u, v in zip(a1, a2)),
                )
                _add_term(F, terms, key, F.mul(c1, c2))
        return SPoly(self.ring, terms)

    def scale(self, c):
        F = self.ring.field
        if F.is_zero(c):
            return SPoly(self.ring, {})
        return SPoly(self.ring, {k: F.mul(c, v) for k, v in self.terms.items()})

    def bidegree(self):
        """(internal, param) if bihomogeneous; raises on mixed terms."""
        degs = {
            (sum(x), self.ring.wdeg(a)) for (x, a) in self.terms
        }
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous polynomial: degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def subst_params(self, values):
        """Evaluate the parameters at scalar values; result over the same ring
        shape but with zero parameter exponents."""
        F = self.ring.field
        terms: dict = {}
        zero_a = self.ring.zero_aexp()
        for (x, a), c in self.terms.items():
            for i, e in enumerate(a):
                for _ in range(e):
                    c = F.mul(c, values[i])
                if F.is_zero(c):
                    break
            if not F.is_zero(c):
                _add_term(F, terms, (x, zero_a), c)
        return SPoly(self.ring, terms)

    def constant_value(self):
        if not self.terms:
            return self.ring.field.zero
        ((x, a), c), = self.terms.items()
        if any(x) or any(a):
            raise ValueError("not a constant")
        return c

    def format(self):
        return _format_terms(self.ring, self.terms, _fmt_xmono)

    def __repr__(self):
        return self.format()


class EPoly:
    """Element of E (x) A; terms keyed by (e-bitmask, a-exponents)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, EPoly) and self.terms == other.terms

    def __add__(self, other):
        F = self.ring.field
        terms = dict(self.terms)
        for k, v in other.terms.items():
            _add_term(F, terms, k, v)
        return EPoly(self.ring, terms)

    def __neg__(self):
        F = self.ring.field
        return EPoly(self.ring, {k: F.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.ring.field
        terms: dict = {}
        for (m1, a1), c1 in self.terms.items():
            for (m2, a2), c2 in other.terms.items():
                s = emask_sign(m1, m2)
                if s == 0:
                    continue
                c = F.mul(c1, c2)
                if s < 0:
                    c = F.neg(c)
                key = (m1 | m2, tuple(u + v for u, v in zip(a1, a2)))
                _add_term(F, terms, key, c)
        return EPoly(self.ring, terms)

    def scale(self, c):
        F = self.ring.field
        if F.is_zero(c):
            return EPoly(self.ring, {})
        return EPoly(self.ring, {k: F.mul(c, v) for k, v in self.terms.items()})

    def bidegree(self):
        degs = {
            (-bin(m).count("1"), self.ring.wdeg(a)) for (m, a) in self.terms
        }
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous exterior form: degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def subst_params(self, values):
        F = self.ring.field
        terms: dict = {}
        zero_a = self.ring.zero_aexp()
        for (m, a), c in self.terms.items():
            for i, e in enumerate(a):
                for _ in range(e):
                    c = F.mul(c, values[i])
                if F.is_zero(c):
                    break
            if not F.is_zero(c):
                _add_term(F, terms, (m, zero_a), c)
        return EPoly(self.ring, terms)

    def e_components(self):
        """Split by e-monomial: dict mask -> dict aexp -> coeff."""
        out: dict = {}
        for (m, a), c in self.terms.items():
            out.setdefault(m, {})[a] = c
        return out

    def format(self):
        return _format_terms(self.ring, self.terms, _fmt_emono)

    def __repr__(self):
        return self.format()


def _fmt_xmono(ring, x):
    parts = []
    for name, e in zip(ring.xnames, x):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return parts


def _fmt_emono(ring, mask):
    return [ring.enames[i] for i in range(ring.n + 1) if mask >> i & 1]


def _fmt_amono(ring, a):
    parts = []
    for name, e in zip(ring.pnames, a):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return parts


def _format_terms(ring, terms, fmt_main):
    if not terms:
        return "0"
    F = ring.field
    chunks = []
    for key in sorted(terms, key=lambda k: (k[1], k[0]) if isinstance(k[0], int) else k):
        main, a = key
        c = terms[key]
        body = _fmt_amono(ring, a) + fmt_main(ring, main)
        cs = str(c)
        if body:
            if c == F.one:
                s = "*".join(body)
            elif cs == "-1":
                s = "-" + "*".join(body)
            else:
                s = cs + "*" + "*".join(body)
        else:
            s = cs
        chunks.append(s)
    out = chunks[0]
    for s in chunks[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out
