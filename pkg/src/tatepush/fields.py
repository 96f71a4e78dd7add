"""Exact scalar arithmetic: rationals, prime fields, and univariate function fields.

Every field is a small stateless object exposing arithmetic on raw element
values (Fraction for Q, int for F_p, RatFunc for K(t)).  Keeping elements as
plain values lets the prime-field linear algebra drop into numpy int64.
"""

from __future__ import annotations

import random
from fractions import Fraction


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """Arbitrary-precision rationals backed by fractions.Fraction."""

    name = "Q"
    char = 0

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def random(self, rng: random.Random):
        return Fraction(rng.randint(-8, 8), rng.randint(1, 6))

    def __repr__(self):
        return "QQ"


class PrimeField:
    """F_p for a machine-word prime p; elements are ints in [0, p)."""

    char = None

    def __init__(self, p: int):
        if not (2 <= p < 2**31):
            raise ValueError("prime modulus must satisfy 2 <= p < 2^31")
        if not _is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def from_int(self, n):
        return n % self.p

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def __repr__(self):
        return f"GF({self.p})"


class Poly:
    """Dense univariate polynomial over a scalar field (used inside K(t))."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs = coeffs[:-1]
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @classmethod
    def gen(cls, field):
        return cls(field, [field.zero, field.one])

    @property
    def deg(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __neg__(self):
        F = self.field
        return Poly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(F, [])
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if F.is_zero(ca):
                continue
            for j, cb in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(ca, cb))
        return Poly(F, out)

    def scale(self, c):
        F = self.field
        return Poly(F, [F.mul(c, x) for x in self.coeffs])

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        q = [F.zero] * max(0, len(rem) - len(other.coeffs) + 1)
        dlead = F.inv(other.coeffs[-1])
        dd = other.deg
        for i in range(len(rem) - 1, dd - 1, -1):
            c = F.mul(rem[i], dlead)
            if F.is_zero(c):
                continue
            q[i - dd] = c
            for j, oc in enumerate(other.coeffs):
                rem[i - dd + j] = F.sub(rem[i - dd + j], F.mul(c, oc))
        return Poly(F, q), Poly(F, rem)

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def eval(self, x):
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def __repr__(self):
        return "Poly(" + repr(list(self.coeffs)) + ")"

    def format(self, var="t"):
        F = self.field
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if F.is_zero(c):
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*{var}" if c != F.one else var)
            else:
                parts.append(f"{c}*{var}^{i}" if c != F.one else f"{var}^{i}")
        return " + ".join(parts)


class RatFunc:
    """Reduced fraction of univariate polynomials; denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, reduce=True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            g = num.gcd(den)
            if g.deg > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead = den.coeffs[-1]
            if lead != den.field.one:
                c = den.field.inv(lead)
                num = num.scale(c)
                den = den.scale(c)
        self.num = num
        self.den = den

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RatFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc(self.num * other.num, self.den * other.den)

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in K(t)")
        return RatFunc(self.den, self.num)

    def __repr__(self):
        if self.den.deg == 0:
            return self.num.format()
        return f"({self.num.format()})/({self.den.format()})"


class FunctionField:
    """K(t): univariate rational functions over Q or F_p."""

    char = None

    def __init__(self, base):
        self.base = base
        self.char = base.char
        self.name = f"{base.name}(t)"
        pz = Poly(base, [])
        po = Poly(base, [base.one])
        self.zero = RatFunc(pz, po, reduce=False)
        self.one = RatFunc(po, po, reduce=False)
        self.t = RatFunc(Poly.gen(base), po, reduce=False)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return a.inv()

    def div(self, a, b):
        return a * b.inv()

    def is_zero(self, a):
        return a.is_zero()

    def from_int(self, n):
        return RatFunc(
            Poly.const(self.base, self.base.from_int(n)),
            Poly.const(self.base, self.base.one),
            reduce=False,
        )

    def from_poly_coeffs(self, coeffs):
        return RatFunc(
            Poly(self.base, [self.base.from_int(c) for c in coeffs]),
            Poly.const(self.base, self.base.one),
        )

    def random(self, rng: random.Random):
        num = Poly(self.base, [self.base.random(rng) for _ in range(rng.randint(1, 3))])
        den = Poly(self.base, [self.base.random(rng) for _ in range(rng.randint(1, 3))])
        if den.is_zero():
            den = Poly.const(self.base, self.base.one)
        return RatFunc(num, den)

    def __repr__(self):
        return f"{self.base!r}(t)"


QQ = RationalField()


def parse_field(spec: str):
    """Parse a field tag: Q | Fp:<p> | Qt | Fpt:<p>."""
    if spec == "Q":
        return QQ
    if spec == "Qt":
        return FunctionField(QQ)
    if spec.startswith("Fp:"):
        return PrimeField(int(spec[3:]))
    if spec.startswith("Fpt:"):
        return FunctionField(PrimeField(int(spec[4:])))
    raise ValueError(f"unknown field spec {spec!r} (want Q, Fp:<p>, Qt, Fpt:<p>)")
