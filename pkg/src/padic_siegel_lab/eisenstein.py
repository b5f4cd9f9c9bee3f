"""Eisenstein series building blocks, as truncated expansions."""

from __future__ import annotations

from fractions import Fraction

from .arith import CyclotomicNumber, divisors, sigma
from .characters import DirichletCharacter
from .lvalues import bernoulli, cohen_H, dirichlet_L_neg
from .qseries import ELLIPTIC, JACOBI, EllipticSeries, FormMeta, JacobiSeries, constant_series


def eisenstein_level1(k: int, N: int) -> EllipticSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n; E_0 is the constant 1."""
    if k == 0:
        return constant_series(N, Fraction(1), FormMeta(0))
    if k < 4 or k % 2:
        raise ValueError(f"E_{k} is not a level-1 Eisenstein series (need k = 0 or even k >= 4)")
    factor = -Fraction(2 * k) / bernoulli(k)

    def coeff(n):
        return Fraction(1) if n == 0 else factor * sigma(k - 1, n)

    return EllipticSeries.from_function(N, coeff, FormMeta(k), "QQ")


def hecke_eisenstein_chi(k: int, chi: DirichletCharacter, N: int) -> EllipticSeries:
    """E_{k,chi} = 1 + 2 L(1-k, chi)^(-1) sum_n sum_{d|n} chi(d) d^(k-1) q^n."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if chi.is_trivial():
        raise ValueError("E_{k,chi} needs a nontrivial character")
    L = dirichlet_L_neg(k, chi)
    if L.vanishes_by_parity:
        raise ValueError(f"chi(-1) = {chi.parity()} does not match (-1)^{k}: L(1-k, chi) = 0")
    factor = 2 * L.value.inverse()
    m = chi.p - 1
    one = CyclotomicNumber.one(m)

    def coeff(n):
        if n == 0:
            return one
        s = CyclotomicNumber.zero(m)
        for d in divisors(n):
            s = s + chi(d) * d ** (k - 1)
        return factor * s

    return EllipticSeries.from_function(N, coeff, FormMeta(k, chi, chi.p, ELLIPTIC), "cyclo")


def jacobi_eisenstein(k: int, N: int) -> JacobiSeries:
    """Index-1 Jacobi Eisenstein series: c(n, r) = H(k-1, 4n - r^2) / H(k-1, 0)."""
    if k < 4 or k % 2:
        raise ValueError(f"E^J_{{{k},1}} needs even k >= 4")
    r = k - 1
    h0 = cohen_H(r, 0)
    return JacobiSeries.from_function(
        N, lambda n, s: cohen_H(r, 4 * n - s * s) / h0, FormMeta(k, kind=JACOBI), "QQ"
    )
