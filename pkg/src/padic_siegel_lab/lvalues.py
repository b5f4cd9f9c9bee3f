"""Bernoulli numbers, generalized Bernoulli numbers, L(1-k, chi) and Cohen's H."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Union

from .arith import (
    CyclotomicNumber,
    PadicApprox,
    divisors,
    encode_cyclotomic,
    encode_rational,
    factorize,
    moebius,
    padic_of_rational,
    sigma,
    valuation,
)
from .cache import get_cache
from .characters import DirichletCharacter, KroneckerCharacter

Character = Union[DirichletCharacter, KroneckerCharacter]


class BernoulliCache:
    """Append-only table B_0, B_1, ..., B_n (B_1 = -1/2).

    Even-index values come from the tangent numbers (Brent-Harvey), which
    costs O(n^2) small-integer multiplications and no rational arithmetic.
    """

    def __init__(self):
        self._table: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
        self._lock = threading.Lock()
        self._scaled: dict[int, tuple[int, list[int]]] = {}

    def __len__(self):
        return len(self._table)

    def extend(self, n: int) -> None:
        if n < len(self._table):
            return
        with self._lock:
            if n < len(self._table):
                return
            target = max(n, 2 * len(self._table))
            half = target // 2
            tangent = _tangent_numbers(half)
            table = [Fraction(1), Fraction(-1, 2)]
            for k in range(2, target + 1):
                if k % 2:
                    table.append(Fraction(0))
                else:
                    j = k // 2
                    four = 4**j
                    sign = 1 if j % 2 else -1
                    table.append(Fraction(sign * k * tangent[j], four * (four - 1)))
            self._table = table

    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("Bernoulli index must be non-negative")
        self.extend(k)
        return self._table[k]

    def scaled(self, k: int) -> tuple[int, list[int]]:
        """``(L, [L*B_0, ..., L*B_k])`` with L the lcm of the denominators."""
        if k not in self._scaled:
            self.extend(k)
            bs = self._table[: k + 1]
            L = lcm(*(b.denominator for b in bs))
            self._scaled[k] = (L, [int(b * L) for b in bs])
        return self._scaled[k]


def _tangent_numbers(n: int) -> list[int]:
    """T_1..T_n (index 0 unused): 1, 2, 16, 272, ..."""
    T = [0] * (n + 1)
    if n == 0:
        return T
    T[1] = 1
    for k in range(2, n + 1):
        T[k] = (k - 1) * T[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            T[j] = (j - k) * T[j - 1] + (j - k + 2) * T[j]
    return T


BERNOULLI = BernoulliCache()


def bernoulli(k: int) -> Fraction:
    cache = get_cache()
    hit = cache.get("bernoulli", str(k))
    if hit is not None:
        return Fraction(hit)
    value = BERNOULLI[k]
    cache.put("bernoulli", str(k), encode_rational(value))
    return value


def bernoulli_poly_at(k: int, x) -> Fraction:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    x = Fraction(x)
    return sum((comb(k, j) * BERNOULLI[j] * x ** (k - j) for j in range(k + 1)), Fraction(0))


def _scaled_bernoulli_poly(k: int, a: int, f: int) -> Fraction:
    """f^(k-1) B_k(a/f), evaluated with integer arithmetic."""
    L, nums = BERNOULLI.scaled(k)
    s = 0
    binom = 1
    apow = [1] * (k + 1)
    for e in range(1, k + 1):
        apow[e] = apow[e - 1] * a
    fpow = 1
    for j in range(k + 1):
        if nums[j]:
            s += binom * nums[j] * apow[k - j] * fpow
        binom = binom * (k - j) // (j + 1)
        fpow *= f
    return Fraction(s, L * f)


def generalized_bernoulli(k: int, chi: Character):
    """B_{k,chi} = f^(k-1) sum_{a=1}^{f} chi(a) B_k(a/f).

    Returns a CyclotomicNumber in Q(zeta_{p-1}) for a character mod p and a
    Fraction for a Kronecker character.  For the modulus-1 character this is
    B_k itself, with B_1 = -1/2.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    cache = get_cache()
    if isinstance(chi, DirichletCharacter):
        key = f"{chi.spec()}:{k}"
        hit = cache.get("genbernoulli", key)
        if hit is not None:
            return CyclotomicNumber(chi.p - 1, [Fraction(c) for c in hit.split(",")])
        f = chi.p
        total = CyclotomicNumber.zero(f - 1)
        for a in range(1, f):
            total = total + chi(a) * _scaled_bernoulli_poly(k, a, f)
        cache.put("genbernoulli", key, ",".join(encode_cyclotomic(total)))
        return total
    f = chi.modulus
    key = f"D{chi.D}:{k}"
    hit = cache.get("genbernoulli", key)
    if hit is not None:
        return Fraction(hit)
    total = Fraction(0)
    # a = 0 .. f-1 agrees with a = 1 .. f when f > 1 and keeps B_1 = -1/2 at f = 1
    for a in range(f):
        c = chi(a)
        if c:
            total += c * _scaled_bernoulli_poly(k, a, f)
    cache.put("genbernoulli", key, encode_rational(total))
    return total


@dataclass(frozen=True)
class LValue:
    k: int
    chi: Character
    value: Union[CyclotomicNumber, Fraction]
    vanishes_by_parity: bool = False


def _parity_mismatch(k: int, chi: Character) -> bool:
    if isinstance(chi, DirichletCharacter):
        return not chi.is_trivial() and chi.parity() != (-1) ** k
    sign = -1 if chi.D < 0 else 1
    return chi.modulus > 1 and sign != (-1) ** k


def dirichlet_L_neg(k: int, chi: Character) -> LValue:
    """L(1-k, chi) = -B_{k,chi}/k.

    The value is always computed from the Bernoulli formula; on a parity
    mismatch it comes out as exact zero and the flag is set.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    value = -generalized_bernoulli(k, chi) / k
    return LValue(k, chi, value, _parity_mismatch(k, chi))


def fundamental_decomposition(disc: int) -> tuple[int, int]:
    """Write disc = D f^2 with D a fundamental discriminant (disc = 0, 1 mod 4, nonzero)."""
    if disc == 0 or disc % 4 not in (0, 1):
        raise ValueError(f"{disc} is not a nonzero discriminant")
    sign = -1 if disc < 0 else 1
    squarefree, root = 1, 1
    for q, e in factorize(disc).items():
        root *= q ** (e // 2)
        if e % 2:
            squarefree *= q
    D = sign * squarefree
    if D % 4 != 1:
        D *= 4
        root //= 2
    return D, root


def cohen_H(r: int, N: int) -> Fraction:
    """Cohen's H(r, N).

    H(r, 0) = zeta(1-2r); for N > 0 with (-1)^r N = D f^2 (D fundamental),
    H(r, N) = L(1-r, chi_D) sum_{d|f} mu(d) chi_D(d) d^(r-1) sigma_{2r-1}(f/d);
    zero when (-1)^r N = 2, 3 mod 4.
    """
    if r < 1 or N < 0:
        raise ValueError("need r >= 1 and N >= 0")
    cache = get_cache()
    key = f"{r}:{N}"
    hit = cache.get("cohenH", key)
    if hit is not None:
        return Fraction(hit)
    if N == 0:
        value = -bernoulli(2 * r) / (2 * r)
    else:
        disc = (-1) ** r * N
        if disc % 4 in (2, 3):
            value = Fraction(0)
        else:
            D, f = fundamental_decomposition(disc)
            chi = KroneckerCharacter(D)
            L = dirichlet_L_neg(r, chi).value
            s = sum(moebius(d) * chi(d) * d ** (r - 1) * sigma(2 * r - 1, f // d) for d in divisors(f))
            value = L * s
    cache.put("cohenH", key, encode_rational(value))
    return value


def constant_term_valuation(l: int, p: int) -> int:
    """v_p(B_l / 2l) for even l >= 2."""
    if l < 2 or l % 2:
        raise ValueError("l must be even and >= 2")
    return valuation(bernoulli(l), p) - valuation(2 * l, p)


@dataclass(frozen=True)
class KummerResult:
    congruent: bool
    value_k: PadicApprox
    value_k_prime: PadicApprox


def kummer_check(k: int, k_prime: int, p: int, M: int = 1) -> KummerResult:
    """Compare (1 - p^(k-1))(-B_k/k) and the same at k' modulo p^M."""
    period = (p - 1) * p ** (M - 1)
    if k % 2 or k_prime % 2 or min(k, k_prime) < 2:
        raise ValueError("k and k' must be even and >= 2")
    if (k - k_prime) % period:
        raise ValueError(f"k and k' must agree mod (p-1)p^(M-1) = {period}")
    if k % (p - 1) == 0:
        raise ValueError("pole branch: k = 0 mod p-1 is excluded")

    def euler_removed(n: int) -> Fraction:
        return (1 - Fraction(p) ** (n - 1)) * (-bernoulli(n) / n)

    x, y = euler_removed(k), euler_removed(k_prime)
    congruent = valuation(x - y, p) >= M
    return KummerResult(congruent, padic_of_rational(x, p, M), padic_of_rational(y, p, M))
