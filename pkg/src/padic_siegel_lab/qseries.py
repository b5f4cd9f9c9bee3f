"""Truncated Fourier expansions: elliptic a(n), Jacobi index-1 c(n, r) and
degree-2 Siegel a(n, r, l), where (n, r, l) stands for the half-integral
matrix [[n, r/2], [r/2, l]].

Coefficients live in exactly one of three rings, tagged on the series:
``"QQ"`` (Fraction), ``"cyclo"`` (CyclotomicNumber) or ``"padic"`` (PadicApprox).
Storage is a dict over the full index set inside the truncation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Callable, Iterable, Mapping

from .arith import (
    INF,
    CyclotomicNumber,
    PadicApprox,
    decode_cyclotomic,
    decode_padic,
    encode_cyclotomic,
    encode_padic,
    encode_rational,
)
from .characters import DirichletCharacter

ELLIPTIC, JACOBI, SIEGEL = "elliptic", "jacobi-index-1", "siegel-2"
RINGS = ("QQ", "cyclo", "padic")


class RingMismatch(TypeError):
    pass


class MorphismError(ValueError):
    """A coefficient map failed; ``index`` names the offending coefficient."""

    def __init__(self, index, cause: Exception):
        super().__init__(f"coefficient map failed at index {index}: {cause}")
        self.index = index
        self.cause = cause


def ring_of(x) -> str:
    if isinstance(x, (int, Fraction)):
        return "QQ"
    if isinstance(x, CyclotomicNumber):
        return "cyclo"
    if isinstance(x, PadicApprox):
        return "padic"
    raise TypeError(f"{type(x).__name__} is not an admitted coefficient ring")


@dataclass(frozen=True)
class FormMeta:
    weight: int
    character: DirichletCharacter | None = None
    level: int = 1
    kind: str = ELLIPTIC

    def combine(self, other: "FormMeta", kind: str | None = None) -> "FormMeta":
        if self.character is None:
            chi = other.character
        elif other.character is None:
            chi = self.character
        else:
            chi = self.character * other.character
        return FormMeta(self.weight + other.weight, chi, lcm(self.level, other.level), kind or self.kind)

    def character_is_trivial(self) -> bool:
        return self.character is None or self.character.is_trivial()

    def to_dict(self) -> dict:
        return {
            "weight": self.weight,
            "character": self.character.spec() if self.character else None,
            "level": self.level,
            "kind": self.kind,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "FormMeta":
        chi = DirichletCharacter.parse(d["character"]) if d.get("character") else None
        return cls(int(d["weight"]), chi, int(d.get("level", 1)), d.get("kind", ELLIPTIC))


# ---------------------------------------------------------------------------
# index sets
# ---------------------------------------------------------------------------

def elliptic_support(N: int) -> list[int]:
    return list(range(N + 1))


def jacobi_support(N: int) -> list[tuple[int, int]]:
    out = []
    for n in range(N + 1):
        b = isqrt(4 * n)
        out.extend((n, r) for r in range(-b, b + 1))
    return out


def siegel_support(N: int) -> list[tuple[int, int, int]]:
    out = []
    for n in range(N + 1):
        for l in range(N + 1):
            b = isqrt(4 * n * l)
            out.extend((n, r, l) for r in range(-b, b + 1))
    return out


# ---------------------------------------------------------------------------
# series containers
# ---------------------------------------------------------------------------

class _Series:
    """Base for the three expansion types; treat instances as immutable."""

    __slots__ = ("trunc", "coeffs", "meta", "ring")

    @staticmethod
    def support(N: int) -> list:
        raise NotImplementedError

    def __init__(self, trunc: int, coeffs: dict, meta: FormMeta, ring: str):
        if ring not in RINGS:
            raise ValueError(f"unknown ring {ring!r}")
        if set(coeffs) != set(self.support(trunc)):
            raise ValueError("coefficients do not cover the index set of the truncation")
        self.trunc = trunc
        self.coeffs = dict(coeffs)
        self.meta = meta
        self.ring = ring

    @classmethod
    def from_function(cls, N: int, fn: Callable, meta: FormMeta, ring: str | None = None):
        coeffs = {}
        for idx in cls.support(N):
            coeffs[idx] = fn(*idx) if isinstance(idx, tuple) else fn(idx)
        if ring is None:
            ring = _common_ring(coeffs.values())
        return cls(N, coeffs, meta, ring)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.trunc, self.meta, self.ring, self.coeffs) == (
            other.trunc, other.meta, other.ring, other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(trunc={self.trunc}, ring={self.ring}, meta={self.meta})"

    def __getitem__(self, idx):
        return self.coeffs[idx]

    def get(self, idx, default=None):
        return self.coeffs.get(idx, default)

    def _same_ring(self, other: "_Series"):
        if self.ring != other.ring:
            raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def truncate(self, N: int):
        if N > self.trunc:
            raise ValueError(f"cannot extend truncation {self.trunc} to {N}")
        return type(self)(N, {k: self.coeffs[k] for k in self.support(N)}, self.meta, self.ring)

    def __add__(self, other):
        self._same_ring(other)
        N = min(self.trunc, other.trunc)
        coeffs = {k: self.coeffs[k] + other.coeffs[k] for k in self.support(N)}
        return type(self)(N, coeffs, self.meta, self.ring)

    def __sub__(self, other):
        self._same_ring(other)
        N = min(self.trunc, other.trunc)
        coeffs = {k: self.coeffs[k] - other.coeffs[k] for k in self.support(N)}
        return type(self)(N, coeffs, self.meta, self.ring)

    def scale(self, c):
        return type(self)(self.trunc, {k: v * c for k, v in self.coeffs.items()}, self.meta, self.ring)

    def with_meta(self, meta: FormMeta):
        return type(self)(self.trunc, self.coeffs, meta, self.ring)


def _common_ring(values: Iterable) -> str:
    rings = {ring_of(v) for v in values}
    if len(rings) > 1:
        rings.discard("QQ")  # integer literals such as 0 coexist with any ring
    if len(rings) != 1:
        raise RingMismatch(f"mixed coefficient rings {sorted(rings)}")
    return rings.pop()


class EllipticSeries(_Series):
    __slots__ = ()
    support = staticmethod(elliptic_support)


class JacobiSeries(_Series):
    __slots__ = ()
    support = staticmethod(jacobi_support)


class SiegelSeries(_Series):
    __slots__ = ()
    support = staticmethod(siegel_support)


def constant_series(N: int, value=Fraction(1), meta: FormMeta | None = None, kind=ELLIPTIC):
    """The expansion with a(O) = value and every other coefficient zero."""
    zero = value * 0
    cls = {ELLIPTIC: EllipticSeries, JACOBI: JacobiSeries, SIEGEL: SiegelSeries}[kind]
    meta = meta or FormMeta(0, kind=kind)
    origin = {ELLIPTIC: 0, JACOBI: (0, 0), SIEGEL: (0, 0, 0)}[kind]
    coeffs = {idx: (value if idx == origin else zero) for idx in cls.support(N)}
    return cls(N, coeffs, meta, ring_of(value))


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def elliptic_mul(f: EllipticSeries, g: EllipticSeries) -> EllipticSeries:
    f._same_ring(g)
    N = min(f.trunc, g.trunc)
    coeffs = {}
    for n in range(N + 1):
        acc = f[0] * g[n]
        for j in range(1, n + 1):
            acc = acc + f[j] * g[n - j]
        coeffs[n] = acc
    return EllipticSeries(N, coeffs, f.meta.combine(g.meta, ELLIPTIC), f.ring)


def jacobi_mul_elliptic(phi: JacobiSeries, f: EllipticSeries) -> JacobiSeries:
    """c_new(n, r) = sum_j f(j) c(n - j, r); terms outside 4n - r^2 >= 0 are zero."""
    phi._same_ring(f)
    N = min(phi.trunc, f.trunc)
    coeffs = {}
    for n, r in jacobi_support(N):
        acc = None
        for j in range(n + 1):
            c = phi.coeffs.get((n - j, r))
            if c is None:
                continue
            term = f[j] * c
            acc = term if acc is None else acc + term
        coeffs[(n, r)] = acc
    return JacobiSeries(N, coeffs, phi.meta.combine(f.meta, JACOBI), phi.ring)


def siegel_mul(F: SiegelSeries, G: SiegelSeries) -> SiegelSeries:
    """Cauchy product over half-integral indices T = T1 + T2 with T1, T2 >= 0."""
    F._same_ring(G)
    N = min(F.trunc, G.trunc)
    coeffs = {}
    for n, r, l in siegel_support(N):
        acc = None
        for n1 in range(n + 1):
            for l1 in range(l + 1):
                n2, l2 = n - n1, l - l1
                b1 = isqrt(4 * n1 * l1)
                for r1 in range(-b1, b1 + 1):
                    r2 = r - r1
                    if r2 * r2 > 4 * n2 * l2:
                        continue
                    term = F[(n1, r1, l1)] * G[(n2, r2, l2)]
                    acc = term if acc is None else acc + term
        coeffs[(n, r, l)] = acc
    return SiegelSeries(N, coeffs, F.meta.combine(G.meta, SIEGEL), F.ring)


# ---------------------------------------------------------------------------
# coefficient maps, Fourier-Jacobi rows, distances
# ---------------------------------------------------------------------------

def map_coefficients(s: _Series, morphism: Callable, ring: str | None = None):
    out = {}
    for idx, v in s.coeffs.items():
        try:
            out[idx] = morphism(v)
        except Exception as exc:
            raise MorphismError(idx, exc) from exc
    if ring is None:
        ring = _common_ring(out.values())
    return type(s)(s.trunc, out, s.meta, ring)


def to_cyclotomic(s: _Series, conductor: int):
    """Coerce a rational series into Q(zeta_conductor); cyclotomic input passes through."""
    if s.ring == "cyclo":
        return s
    if s.ring != "QQ":
        raise RingMismatch(f"cannot coerce {s.ring} into Q(zeta_{conductor})")
    return map_coefficients(s, lambda c: CyclotomicNumber.from_rational(conductor, c), "cyclo")


def fourier_jacobi_row(F: SiegelSeries, l: int) -> dict[tuple[int, int], object]:
    """The l-th Fourier-Jacobi coefficient as a table (n, r) -> a(n, r, l)."""
    if not 0 <= l <= F.trunc:
        raise IndexError(f"row {l} outside truncation {F.trunc}")
    return {(n, r): v for (n, r, ll), v in F.coeffs.items() if ll == l}


def siegel_from_rows(rows: Mapping[int, Mapping], N: int, meta: FormMeta, ring: str) -> SiegelSeries:
    coeffs = {(n, r, l): v for l, row in rows.items() for (n, r), v in row.items()}
    return SiegelSeries(N, coeffs, meta, ring)


def series_distance(s1: _Series, s2: _Series):
    """``(min_T v_p(s1(T) - s2(T)), argmin)`` over the stored indices.

    Zero-to-precision differences count with their precision bound, exact
    zeros as ``INF``; identical series give ``(INF, None)``.
    """
    if s1.ring != "padic" or s2.ring != "padic":
        raise RingMismatch("series_distance needs p-adic coefficients")
    if set(s1.coeffs) != set(s2.coeffs):
        raise ValueError("support mismatch")
    best, where = INF, None
    for idx in sorted(s1.coeffs, key=_sort_key):
        v = (s1[idx] - s2[idx]).valuation
        if v < best:
            best, where = v, idx
    return best, where


def _sort_key(idx):
    return idx if isinstance(idx, tuple) else (idx,)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

_KIND_CLASS = {ELLIPTIC: EllipticSeries, JACOBI: JacobiSeries, SIEGEL: SiegelSeries}


def _encode_value(v, ring):
    if ring == "QQ":
        return encode_rational(v)
    if ring == "cyclo":
        return encode_cyclotomic(v)
    return encode_padic(v)


def series_to_dict(s: _Series) -> dict:
    meta = s.meta.to_dict()
    meta["ring"] = s.ring
    sample = next(iter(s.coeffs.values()))
    if s.ring == "cyclo":
        meta["conductor"] = sample.conductor
    elif s.ring == "padic":
        meta["p"] = sample.p
    rows = []
    for idx in sorted(s.coeffs, key=_sort_key):
        rows.append([*_sort_key(idx), _encode_value(s.coeffs[idx], s.ring)])
    return {"meta": meta, "trunc": s.trunc, "coeffs": rows}


def series_to_json(s: _Series) -> str:
    return json.dumps(series_to_dict(s), sort_keys=True)


def series_from_dict(d: Mapping) -> _Series:
    meta_d = d["meta"]
    meta = FormMeta.from_dict(meta_d)
    ring = meta_d["ring"]
    cls = _KIND_CLASS[meta.kind]
    coeffs = {}
    for row in d["coeffs"]:
        *idx, raw = row
        if ring == "QQ":
            val = Fraction(raw)
        elif ring == "cyclo":
            val = decode_cyclotomic(int(meta_d["conductor"]), raw)
        else:
            val = decode_padic(int(meta_d["p"]), raw)
        key = idx[0] if meta.kind == ELLIPTIC else tuple(int(i) for i in idx)
        coeffs[key] = val
    return cls(int(d["trunc"]), coeffs, meta, ring)


def series_from_json(text: str) -> _Series:
    return series_from_dict(json.loads(text))
