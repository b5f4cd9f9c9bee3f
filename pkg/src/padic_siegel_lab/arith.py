"""Exact arithmetic: rationals, cyclotomic fields Q(zeta_m), capped p-adic numbers.

Rationals are plain :class:`fractions.Fraction`.  Everything else in the
package is built from the three value types defined here plus a handful of
elementary number-theoretic helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction
INF = math.inf
DEFAULT_RELPREC = 12


class PrecisionError(ArithmeticError):
    """Raised when a p-adic result cannot be resolved at the available precision."""


# ---------------------------------------------------------------------------
# elementary number theory
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def is_odd_prime(n: int) -> bool:
    return n != 2 and is_prime(n)


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of ``|n|``; ``{}`` for 0 and 1."""
    n = abs(n)
    out: dict[int, int] = {}
    if n < 2:
        return out
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def euler_phi(n: int) -> int:
    result = n
    for q in factorize(n):
        result -= result // q
    return result


def moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def sigma(k: int, n: int) -> int:
    """Divisor power sum sigma_k(n) for n >= 1, k >= 0."""
    return sum(d**k for d in divisors(n))


def valuation(x: Union[int, Fraction], p: int) -> Union[int, float]:
    """p-adic valuation of an integer or rational; ``INF`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_val(x.numerator, p) - _int_val(x.denominator, p)


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for a positive integer n."""
    if n <= 0:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # n odd now: Jacobi symbol (D/n)
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p)^x."""
    if not is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    qs = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def _log_table(p: int, g: int) -> dict[int, int]:
    table = {}
    x = 1
    for e in range(p - 1):
        table[x] = e
        x = x * g % p
    if len(table) != p - 1:
        raise ValueError(f"{g} is not a primitive root mod {p}")
    return table


def discrete_log(p: int, g: int, x: int) -> int:
    """Exponent e in [0, p-2] with g^e = x mod p."""
    if x % p == 0:
        raise ValueError(f"{x} is divisible by {p}")
    return _log_table(p, g)[x % p]


def multiplicative_order(x: int, n: int) -> int:
    if math.gcd(x, n) != 1:
        raise ValueError("not a unit")
    k, y = 1, x % n
    while y != 1 % n:
        y = y * x % n
        k += 1
    return k


# ---------------------------------------------------------------------------
# Z/p^k
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZmodPk:
    p: int
    k: int
    residue: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def _coerce(self, other) -> int:
        if isinstance(other, ZmodPk):
            if (other.p, other.k) != (self.p, self.k):
                raise ValueError("modulus mismatch")
            return other.residue
        return int(other)

    def __add__(self, other):
        return ZmodPk(self.p, self.k, self.residue + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ZmodPk(self.p, self.k, self.residue - self._coerce(other))

    def __mul__(self, other):
        return ZmodPk(self.p, self.k, self.residue * self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return ZmodPk(self.p, self.k, pow(self.residue, e, self.modulus))

    def __int__(self):
        return self.residue

    def __eq__(self, other):
        if isinstance(other, ZmodPk):
            return (self.p, self.k, self.residue) == (other.p, other.k, other.residue)
        if isinstance(other, int):
            return (self.residue - other) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.k, self.residue))


# ---------------------------------------------------------------------------
# polynomials over Q (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------

def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = [Fraction(c) for c in a]
    b = _trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
    return _trim(q), a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, constant term first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d < m:
            q, r = _poly_divmod(num, cyclotomic_polynomial(d))
            assert not r
            num = q
    return tuple(int(c) for c in num)


# ---------------------------------------------------------------------------
# Q(zeta_m)
# ---------------------------------------------------------------------------

Scalar = Union[int, Fraction]


class CyclotomicNumber:
    """Element of Q(zeta_m), stored as its residue mod Phi_m in the power basis."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable[Scalar]):
        deg = euler_phi(conductor)
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > deg:
            cs = _reduce(cs, conductor)
        cs += [Fraction(0)] * (deg - len(cs))
        self.conductor = conductor
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # constructors
    @classmethod
    def from_rational(cls, conductor: int, q: Scalar) -> "CyclotomicNumber":
        return cls(conductor, [q])

    @classmethod
    def zeta(cls, conductor: int, power: int = 1) -> "CyclotomicNumber":
        power %= conductor
        return cls(conductor, [0] * power + [1])

    @classmethod
    def zero(cls, conductor: int) -> "CyclotomicNumber":
        return cls(conductor, [])

    @classmethod
    def one(cls, conductor: int) -> "CyclotomicNumber":
        return cls(conductor, [1])

    # predicates
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coeffs[0]

    # arithmetic
    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.conductor != self.conductor:
                raise ValueError(
                    f"conductor mismatch: {self.conductor} vs {other.conductor}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.conductor, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.conductor, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.conductor, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.conductor, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.conductor, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicNumber(self.conductor, _reduce(prod, self.conductor))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Inverse via the extended Euclidean algorithm against Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        if self.is_rational():
            return CyclotomicNumber(self.conductor, [1 / self.coeffs[0]])
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.conductor)]
        r0, r1 = phi, _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is now a nonzero constant since Phi_m is irreducible
        c = r1[0]
        return CyclotomicNumber(self.conductor, _reduce([x / c for x in s1], self.conductor))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.conductor, [a / other for a in self.coeffs])
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.one(self.conductor)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CyclotomicNumber):
            return self.conductor == other.conductor and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"CyclotomicNumber({self.conductor}, {encode_cyclotomic(self)})"


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _reduce(coeffs: list, m: int) -> list:
    """Reduce a coefficient list modulo the monic integer polynomial Phi_m."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    cs = list(coeffs)
    for top in range(len(cs) - 1, deg - 1, -1):
        c = cs[top]
        if c:
            shift = top - deg
            for i in range(deg):
                if phi[i]:
                    cs[shift + i] -= c * phi[i]
            cs[top] = Fraction(0)
    return cs[:deg]


def cyclo_mul(x: CyclotomicNumber, y: CyclotomicNumber) -> CyclotomicNumber:
    if x.conductor != y.conductor:
        raise ValueError(f"conductor mismatch: {x.conductor} vs {y.conductor}")
    return x * y


def cyclo_inverse(x: CyclotomicNumber) -> CyclotomicNumber:
    return x.inverse()


# ---------------------------------------------------------------------------
# capped p-adic numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PadicApprox:
    """``p**valuation * unit + O(p**(valuation + relprec))``.

    Three shapes occur:

    * ordinary: ``relprec > 0`` and ``p`` does not divide ``unit``;
    * zero to precision: ``unit == 0`` and ``relprec == 0``, i.e. ``O(p**valuation)``;
    * exact zero: ``valuation == INF``.
    """

    p: int
    valuation: Union[int, float]
    unit: int
    relprec: int

    @classmethod
    def exact_zero(cls, p: int) -> "PadicApprox":
        return cls(p, INF, 0, 0)

    @classmethod
    def zero_to(cls, p: int, absprec: int) -> "PadicApprox":
        return cls(p, absprec, 0, 0)

    @classmethod
    def from_int_mod(cls, p: int, value: int, absprec: int, shift: int = 0) -> "PadicApprox":
        """The element ``p**shift * value`` where ``value`` is known mod ``p**absprec``."""
        value %= p**absprec
        if value == 0:
            return cls.zero_to(p, absprec + shift)
        v = _int_val(value, p)
        rel = absprec - v
        return cls(p, v + shift, (value // p**v) % p**rel, rel)

    @property
    def absprec(self) -> Union[int, float]:
        return self.valuation + self.relprec

    def is_exact_zero(self) -> bool:
        return self.valuation == INF

    def is_zero(self) -> bool:
        return self.unit == 0

    def _scalar_for_add(self, q: Fraction) -> "PadicApprox":
        if q == 0 or self.is_exact_zero():
            return padic_of_rational(q, self.p, DEFAULT_RELPREC)
        rel = max(1, int(self.absprec - valuation(q, self.p)))
        return padic_of_rational(q, self.p, rel)

    def _check(self, other: "PadicApprox"):
        if not isinstance(other, PadicApprox):
            raise TypeError(f"cannot combine PadicApprox with {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._scalar_for_add(Fraction(other))
        self._check(other)
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        p = self.p
        absprec = min(self.absprec, other.absprec)
        v0 = min(self.valuation, other.valuation)
        if absprec <= v0:
            return PadicApprox.zero_to(p, absprec)
        w = self.unit * p ** (self.valuation - v0) + other.unit * p ** (other.valuation - v0)
        return PadicApprox.from_int_mod(p, w, absprec - v0, shift=v0)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicApprox(self.p, self.valuation, (-self.unit) % self.p**self.relprec, self.relprec)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = padic_of_rational(Fraction(other), self.p, max(self.relprec, 1))
        self._check(other)
        p = self.p
        if self.is_exact_zero() or other.is_exact_zero():
            return PadicApprox.exact_zero(p)
        if self.is_zero() or other.is_zero():
            return PadicApprox.zero_to(p, self.valuation + other.valuation)
        rel = min(self.relprec, other.relprec)
        mod = p**rel
        return PadicApprox(p, self.valuation + other.valuation, self.unit * other.unit % mod, rel)

    __rmul__ = __mul__

    def inverse(self) -> "PadicApprox":
        if self.is_exact_zero():
            raise ZeroDivisionError("division by exact p-adic zero")
        if self.is_zero():
            raise PrecisionError(f"division by O({self.p}^{self.valuation})")
        mod = self.p**self.relprec
        return PadicApprox(self.p, -self.valuation, pow(self.unit, -1, mod), self.relprec)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = padic_of_rational(Fraction(other), self.p, max(self.relprec, 1))
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_exact_zero():
            return self if e else padic_of_rational(1, self.p, DEFAULT_RELPREC)
        if self.is_zero():
            return PadicApprox.zero_to(self.p, self.valuation * e) if e else padic_of_rational(1, self.p, 1)
        return PadicApprox(self.p, self.valuation * e, pow(self.unit, e, self.p**self.relprec), self.relprec)

    def residue(self, k: int) -> int:
        """The value mod ``p**k``; requires non-negative valuation and enough precision."""
        if self.is_exact_zero():
            return 0
        if self.valuation < 0:
            raise ValueError("element is not p-integral")
        if self.absprec < k:
            raise PrecisionError(f"known only mod {self.p}^{self.absprec}")
        return self.unit * self.p**self.valuation % self.p**k

    def congruent(self, other: "PadicApprox", k: int) -> bool:
        """True when ``self - other`` has valuation at least ``k``."""
        d = self - other
        if d.absprec < k and not d.is_exact_zero():
            raise PrecisionError(f"difference known only to O({self.p}^{d.absprec})")
        return d.valuation >= k


def padic_of_rational(q: Scalar, p: int, relprec: int = DEFAULT_RELPREC) -> PadicApprox:
    q = Fraction(q)
    if q == 0:
        return PadicApprox.exact_zero(p)
    a = _int_val(q.numerator, p)
    b = _int_val(q.denominator, p)
    mod = p**relprec
    num = q.numerator // p**a
    den = q.denominator // p**b
    return PadicApprox(p, a - b, num * pow(den, -1, mod) % mod, relprec)


def padic_arith(x: PadicApprox, y: PadicApprox, op: str) -> PadicApprox:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# canonical text encodings
# ---------------------------------------------------------------------------

def encode_rational(q: Scalar) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def decode_rational(s: str) -> Fraction:
    return Fraction(s)


def encode_cyclotomic(x: CyclotomicNumber) -> list[str]:
    return [encode_rational(c) for c in x.coeffs]


def decode_cyclotomic(conductor: int, data: Sequence[str]) -> CyclotomicNumber:
    return CyclotomicNumber(conductor, [Fraction(c) for c in data])


def encode_padic(x: PadicApprox) -> dict:
    v = "inf" if x.is_exact_zero() else int(x.valuation)
    return {"v": v, "unit": str(x.unit), "relprec": x.relprec}


def decode_padic(p: int, data: dict) -> PadicApprox:
    v = INF if data["v"] == "inf" else int(data["v"])
    return PadicApprox(p, v, int(data["unit"]), int(data["relprec"]))
