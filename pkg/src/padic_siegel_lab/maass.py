"""Maass lift of index-1 Jacobi forms with character to degree-2 expansions."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable

from .arith import divisors
from .characters import DirichletCharacter
from .lvalues import dirichlet_L_neg
from .qseries import SIEGEL, FormMeta, JacobiSeries, SiegelSeries, siegel_support, to_cyclotomic


class InsufficientTruncation(ValueError):
    pass


def maass_lift(
    phi: JacobiSeries,
    k: int,
    chi: DirichletCharacter,
    p: int,
    N: int,
    scalar_map: Callable | None = None,
) -> SiegelSeries:
    """Lift ``phi`` (weight k, index 1, character chi on Gamma_0(p)) to degree 2.

    l = 0:  a(0,0,0) = L(1-k, chi)/2 * c(0,0),
            a(n,0,0) = c(0,0) * sum_{d|n} chi(d) d^(k-1);
    l >= 1: a(n,r,l) = sum_{d | (n,r,l), p !| d} chi(d) d^(k-1) c(nl/d^2, r/d).

    ``phi`` must be known to order N^2.  Rational input is coerced into
    Q(zeta_{p-1}).  For input over another ring, ``scalar_map`` carries the
    cyclotomic scalars chi(d) d^(k-1) and L(1-k, chi)/2 into that ring.
    """
    if chi.p != p:
        raise ValueError("character modulus differs from p")
    if chi.parity() != (-1) ** k:
        raise ValueError(f"parity mismatch: chi(-1) = {chi.parity()} but k = {k}")
    if phi.trunc < N * N:
        raise InsufficientTruncation(f"Jacobi input known to order {phi.trunc}, lift needs {N * N}")
    m = p - 1
    if phi.ring == "QQ":
        phi = to_cyclotomic(phi, m)
    if phi.ring != "cyclo" and scalar_map is None:
        raise ValueError(f"lifting a {phi.ring} series needs a scalar_map")
    lift_scalar = scalar_map or (lambda x: x)

    weights: dict[int, object] = {}

    def w(d: int):
        if d not in weights:
            weights[d] = lift_scalar(chi(d) * d ** (k - 1))
        return weights[d]

    half_L = lift_scalar(dirichlet_L_neg(k, chi).value / 2)
    c00 = phi[(0, 0)]
    coeffs = {}
    for n, r, l in siegel_support(N):
        if l == 0:
            # only r = 0 is in the support
            if n == 0:
                coeffs[(n, r, l)] = half_L * c00
            else:
                acc = None
                for d in divisors(n):
                    if d % p:
                        acc = w(d) if acc is None else acc + w(d)
                coeffs[(n, r, l)] = acc * c00
            continue
        acc = None
        for d in divisors(gcd(gcd(n, abs(r)), l)):
            if d % p == 0:
                continue
            term = w(d) * phi[(n * l // (d * d), r // d)]
            acc = term if acc is None else acc + term
        coeffs[(n, r, l)] = acc
    return SiegelSeries(N, coeffs, FormMeta(k, chi, p, SIEGEL), phi.ring)


@dataclass
class MaassDefect:
    defects: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.defects


def maass_defect(
    F: SiegelSeries,
    phi: JacobiSeries,
    k: int,
    chi: DirichletCharacter,
    p: int,
    scalar_map: Callable | None = None,
) -> MaassDefect:
    """Recompute the lift of ``phi`` and list every index where ``F`` differs."""
    ref = maass_lift(phi, k, chi, p, F.trunc, scalar_map)
    out = MaassDefect()
    for idx in sorted(F.coeffs):
        diff = F[idx] - ref[idx]
        if not diff.is_zero():
            out.defects[idx] = diff
    return out
