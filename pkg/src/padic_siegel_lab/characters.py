"""Dirichlet characters mod p, the Teichmueller character and the embeddings
Q(mu_{p-1}) -> Q_p.

A character mod ``p`` is stored by the exponent ``t`` with
``chi(g) = zeta_{p-1}**t`` for the smallest primitive root ``g``.  An embedding
is fixed by a root ``d`` of Phi_{p-1} mod ``p``; it sends ``zeta_{p-1}`` to the
Teichmueller lift ``omega(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .arith import (
    CyclotomicNumber,
    PadicApprox,
    PrecisionError,
    ZmodPk,
    _int_val,
    cyclotomic_polynomial,
    discrete_log,
    euler_phi,
    is_odd_prime,
    kronecker_symbol,
    primitive_root,
)

DEFAULT_PREC = 10
# working-precision ceiling for embed; hitting it means a genuine precision loss
MAX_WORKING_PREC = 4096


def _require_odd_prime(p: int) -> None:
    if not is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")


@dataclass(frozen=True)
class DirichletCharacter:
    p: int
    t: int

    def __post_init__(self):
        _require_odd_prime(self.p)
        object.__setattr__(self, "t", self.t % (self.p - 1))

    @classmethod
    def parse(cls, spec: str) -> "DirichletCharacter":
        """Parse ``"p:t"``."""
        try:
            p, t = (int(x) for x in spec.split(":"))
        except ValueError:
            raise ValueError(f"bad character spec {spec!r}, expected 'p:t'") from None
        return cls(p, t)

    @classmethod
    def trivial(cls, p: int) -> "DirichletCharacter":
        return cls(p, 0)

    @property
    def g(self) -> int:
        return primitive_root(self.p)

    def spec(self) -> str:
        return f"{self.p}:{self.t}"

    def is_trivial(self) -> bool:
        return self.t == 0

    def order(self) -> int:
        return (self.p - 1) // gcd(self.t, self.p - 1)

    def exponent(self, d: int) -> int | None:
        """``e`` with ``chi(d) = zeta**e``, or None when ``p | d``."""
        if d % self.p == 0:
            return None
        return self.t * discrete_log(self.p, self.g, d) % (self.p - 1)

    def __call__(self, d: int) -> CyclotomicNumber:
        e = self.exponent(d)
        if e is None:
            return CyclotomicNumber.zero(self.p - 1)
        return CyclotomicNumber.zeta(self.p - 1, e)

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        return -1 if self.t % 2 else 1

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.p, -self.t)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.p != self.p:
            raise ValueError("characters of different moduli")
        return DirichletCharacter(self.p, self.t + other.t)


@dataclass(frozen=True)
class KroneckerCharacter:
    """The quadratic character ``a -> (D/a)`` of modulus ``|D|``."""

    D: int

    @property
    def modulus(self) -> int:
        return abs(self.D)

    def __call__(self, a: int) -> int:
        if self.modulus == 1:
            return 1
        if a % self.modulus == 0:
            return 0
        return kronecker_symbol(self.D, a)


@lru_cache(maxsize=None)
def teichmuller_residue(d: int, p: int, M: int) -> int:
    if d % p == 0:
        raise ValueError(f"{p} divides {d}")
    mod = p**M
    x = d % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y


def teichmuller(d: int, p: int, M: int) -> ZmodPk:
    """omega(d) mod p**M, by iterating x -> x**p until it stabilises."""
    return ZmodPk(p, M, teichmuller_residue(d, p, M))


@lru_cache(maxsize=None)
def factor_cyclotomic_mod_p(p: int) -> tuple[int, ...]:
    """Roots of Phi_{p-1} mod p in ascending order; Phi_{p-1} splits into X - d_i."""
    _require_odd_prime(p)
    phi = cyclotomic_polynomial(p - 1)
    roots = tuple(
        d for d in range(p) if sum(c * pow(d, i, p) for i, c in enumerate(phi)) % p == 0
    )
    assert len(roots) == euler_phi(p - 1)
    return roots


@dataclass(frozen=True)
class EmbeddingSigma:
    p: int
    index: int
    d: int
    prec: int = DEFAULT_PREC

    @classmethod
    def from_index(cls, p: int, index: int, prec: int = DEFAULT_PREC) -> "EmbeddingSigma":
        roots = factor_cyclotomic_mod_p(p)
        if not 1 <= index <= len(roots):
            raise ValueError(f"embedding index {index} out of range 1..{len(roots)} for p={p}")
        return cls(p, index, roots[index - 1], prec)

    @classmethod
    def parse(cls, spec: str, prec: int = DEFAULT_PREC) -> "EmbeddingSigma":
        """Parse ``"p:i"``."""
        try:
            p, i = (int(x) for x in spec.split(":"))
        except ValueError:
            raise ValueError(f"bad embedding spec {spec!r}, expected 'p:i'") from None
        _require_odd_prime(p)
        return cls.from_index(p, i, prec)

    def spec(self) -> str:
        return f"{self.p}:{self.index}"

    def with_prec(self, prec: int) -> "EmbeddingSigma":
        return EmbeddingSigma(self.p, self.index, self.d, prec)

    def image_of_zeta(self, M: int | None = None) -> ZmodPk:
        return teichmuller(self.d, self.p, M or self.prec)

    def __call__(self, x) -> PadicApprox:
        return embed(x, self)


def embeddings(p: int, prec: int = DEFAULT_PREC) -> list[EmbeddingSigma]:
    return [EmbeddingSigma.from_index(p, i + 1, prec) for i in range(len(factor_cyclotomic_mod_p(p)))]


def embed(x, sigma: EmbeddingSigma, relprec: int | None = None) -> PadicApprox:
    """Image of ``x`` in Q_p with ``relprec`` significant p-adic digits.

    The working precision is raised until the leading digit of the image is
    resolved, so cancellation against p-power denominators is handled exactly.
    """
    p = sigma.p
    M = relprec or sigma.prec
    if isinstance(x, (int, Fraction)):
        x = CyclotomicNumber.from_rational(p - 1, x)
    if x.conductor != p - 1:
        raise ValueError(f"conductor {x.conductor} does not match p - 1 = {p - 1}")
    if x.is_zero():
        return PadicApprox.exact_zero(p)
    den = lcm(*(c.denominator for c in x.coeffs))
    nums = [int(c * den) for c in x.coeffs]
    vden = _int_val(den, p)
    den_unit = den // p**vden
    W = M + 2
    while W <= MAX_WORKING_PREC:
        mod = p**W
        w = teichmuller_residue(sigma.d, p, W)
        s, power = 0, 1
        for c in nums:
            s = (s + c * power) % mod
            power = power * w % mod
        if s:
            v = _int_val(s, p)
            if W - v >= M:
                mod_m = p**M
                unit = (s // p**v) * pow(den_unit, -1, mod_m) % mod_m
                return PadicApprox(p, v - vden, unit, M)
        W *= 2
    raise PrecisionError(f"embedding lost all precision below {p}^{MAX_WORKING_PREC}")


def find_alpha(chi: DirichletCharacter, sigma: EmbeddingSigma) -> int:
    """alpha mod p-1 with chi^sigma = omega^alpha, verified on every unit class."""
    p = chi.p
    if sigma.p != p:
        raise ValueError("character and embedding use different primes")
    g = chi.g
    image = embed(chi(g), sigma)
    alpha = discrete_log(p, g, image.residue(1))
    M = sigma.prec
    for d in range(1, p):
        lhs = embed(chi(d), sigma).residue(M)
        rhs = pow(teichmuller_residue(d, p, M), alpha, p**M)
        if lhs != rhs:
            raise RuntimeError(f"chi^sigma != omega^{alpha} at d={d} mod {p}^{M}")
    return alpha


def select_a(alpha: int, p: int, parity: int | None = None) -> int:
    """Smallest a >= 2 with a = -alpha mod p-1; ``parity`` is chi(-1) if given."""
    a = (-alpha) % (p - 1)
    while a < 2:
        a += p - 1
    if parity is not None and (-1) ** a != parity:
        raise ValueError(f"a={a} has parity incompatible with chi(-1)={parity}")
    return a


@dataclass(frozen=True)
class WeightX:
    """A weight in Z_p x Z/(p-1): the p-adic part is kept mod p**prec."""

    p: int
    s_component: ZmodPk
    class_component: int

    @classmethod
    def of(cls, k: int, p: int, prec: int = DEFAULT_PREC) -> "WeightX":
        return cls(p, ZmodPk(p, prec, k), k % (p - 1))

    def as_dict(self) -> dict:
        return {
            "mod_p_power": str(self.s_component.residue),
            "p_power": self.s_component.k,
            "class_mod_p_minus_1": self.class_component,
        }

