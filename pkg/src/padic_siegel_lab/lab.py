"""Experiment pipelines.

The central object is the sequence of normalized lifts

    phi_{k_m} = E_{a(p-2),chi} * E_{l_m} * E^J_{2a,1},   l_m = a p (p^(m-1) - 1),
    F_{k_m}   = Maass lift of phi_{k_m},                  k_m = a p^m,
    G_{k_m}   = 2 L(1-k_m, chi)^(-1) F_{k_m},

computed exactly in Q(zeta_{p-1}) and embedded into Q_p only at the end.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .arith import INF, CyclotomicNumber, PadicApprox, is_odd_prime, valuation
from .characters import (
    DirichletCharacter,
    EmbeddingSigma,
    WeightX,
    embed,
    find_alpha,
    select_a,
    teichmuller_residue,
)
from .eisenstein import eisenstein_level1, hecke_eisenstein_chi, jacobi_eisenstein
from .lvalues import constant_term_valuation, dirichlet_L_neg
from .maass import maass_lift
from .qseries import (
    JacobiSeries,
    SiegelSeries,
    fourier_jacobi_row,
    jacobi_mul_elliptic,
    map_coefficients,
    siegel_mul,
    to_cyclotomic,
)

log = logging.getLogger(__name__)

PASS, FAIL, PRECISION = "PASS", "FAIL", "PRECISION"
DEFAULT_N, DEFAULT_M, DEFAULT_MMAX = 2, 10, 3
# largest Bernoulli index computed without --allow-large
BERNOULLI_CAP = 2500
PRECISION_STEP = 4


class ScaleError(ValueError):
    """The requested run needs weights beyond the default desk-scale cap."""


class CharacterMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Theorem2Config:
    p: int
    chi: DirichletCharacter
    sigma_index: int = 1
    a: int | None = None
    m_max: int = DEFAULT_MMAX
    N: int = DEFAULT_N
    M: int = DEFAULT_M
    alpha: int = field(init=False, default=0)

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")
        if self.chi.p != self.p:
            raise ValueError(f"character {self.chi.spec()} is not a character mod {self.p}")
        if self.chi.is_trivial():
            raise ValueError("the lift sequence needs a nontrivial character")
        if self.m_max < 1 or self.N < 0 or self.M < 1:
            raise ValueError("need m_max >= 1, N >= 0, M >= 1")
        alpha = find_alpha(self.chi, self.sigma)
        object.__setattr__(self, "alpha", alpha)
        a = self.a if self.a is not None else select_a(alpha, self.p, self.chi.parity())
        if a <= 0 or (a + alpha) % (self.p - 1):
            raise ValueError(f"a={a} is not a positive integer = -alpha = {-alpha % (self.p - 1)} mod {self.p - 1}")
        if (-1) ** a != self.chi.parity():
            raise ValueError(f"a={a} has the wrong parity for chi(-1)={self.chi.parity()}")
        if 2 * a < 4:
            raise ValueError("a >= 2 is needed for the Jacobi Eisenstein factor")
        object.__setattr__(self, "a", a)

    @property
    def sigma(self) -> EmbeddingSigma:
        return EmbeddingSigma.from_index(self.p, self.sigma_index, self.M)

    def k(self, m: int) -> int:
        return self.a * self.p**m

    def l(self, m: int) -> int:
        return self.a * self.p * (self.p ** (m - 1) - 1)

    def with_prec(self, M: int) -> "Theorem2Config":
        return Theorem2Config(self.p, self.chi, self.sigma_index, self.a, self.m_max, self.N, M)

    def largest_bernoulli_index(self) -> int:
        return max(self.k(self.m_max), self.l(self.m_max))

    def check_scale(self, allow_large: bool = False) -> None:
        if allow_large:
            return
        if self.m_max > 3:
            raise ScaleError("m_max > 3 is minutes-scale; pass allow_large to proceed")
        if self.largest_bernoulli_index() > BERNOULLI_CAP:
            raise ScaleError(
                f"needs Bernoulli numbers up to index {self.largest_bernoulli_index()} "
                f"(cap {BERNOULLI_CAP}); pass allow_large to proceed"
            )

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "chi": self.chi.spec(),
            "sigma": f"{self.p}:{self.sigma_index}",
            "alpha": self.alpha,
            "a": self.a,
            "m_max": self.m_max,
            "trunc": self.N,
            "prec": self.M,
        }


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _phi(p: int, chi: DirichletCharacter, a: int, m: int, order: int) -> JacobiSeries:
    l_m = a * p * (p ** (m - 1) - 1)
    rational = jacobi_mul_elliptic(jacobi_eisenstein(2 * a, order), eisenstein_level1(l_m, order))
    phi = jacobi_mul_elliptic(to_cyclotomic(rational, p - 1), hecke_eisenstein_chi(a * (p - 2), chi, order))
    k_m = a * p**m
    assert a * (p - 2) + l_m + 2 * a == k_m
    assert phi.meta.weight == k_m and phi.meta.character == chi
    return phi


def build_phi_km(cfg: Theorem2Config, m: int) -> JacobiSeries:
    """E_{a(p-2),chi} E_{l_m} E^J_{2a,1}, to the order N^2 the lift needs."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return _phi(cfg.p, cfg.chi, cfg.a, m, cfg.N * cfg.N)


@dataclass
class GkmResult:
    m: int
    k_m: int
    phi: JacobiSeries
    F: SiegelSeries
    half_L: CyclotomicNumber
    G: SiegelSeries


@lru_cache(maxsize=64)
def _G(p: int, chi: DirichletCharacter, a: int, m: int, N: int) -> GkmResult:
    phi = _phi(p, chi, a, m, N * N)
    k_m = a * p**m
    F = maass_lift(phi, k_m, chi, p, N)
    L = dirichlet_L_neg(k_m, chi)
    assert not L.vanishes_by_parity and not L.value.is_zero()
    G = F.scale(2 * L.value.inverse())
    assert G[(0, 0, 0)] == 1
    return GkmResult(m, k_m, phi, F, L.value / 2, G)


def build_G_km(cfg: Theorem2Config, m: int) -> GkmResult:
    """G_{k_m} = 2 L(1-k_m, chi)^(-1) * (Maass lift of phi_{k_m}), exact."""
    return _G(cfg.p, cfg.chi, cfg.a, m, cfg.N)


def sigma_image(series: SiegelSeries, sigma: EmbeddingSigma) -> SiegelSeries:
    return map_coefficients(series, lambda x: embed(x, sigma), "padic")


def _origin_indicator(idx) -> int:
    return 1 if idx == (0, 0, 0) else 0


def _delta_table(G: SiegelSeries, sigma: EmbeddingSigma) -> dict:
    """Exact v_p(sigma(G(T)) - [T = O]) for every stored T."""
    return {idx: embed(G[idx] - _origin_indicator(idx), sigma).valuation for idx in sorted(G.coeffs)}


def _capped(v, M: int):
    return v if v < M else f">={M}"


def _min_with_argmin(table: dict):
    best, where = INF, None
    for idx, v in table.items():
        if v < best:
            best, where = v, idx
    return best, where


def _strictly_increasing(values) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class Stage:
    m: int
    k_m: int
    min_val: object
    argmin: list | None
    table: list
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"m": self.m, "k_m": self.k_m, "min_val": self.min_val, "argmin": self.argmin, "table": self.table}
        d.update(self.extra)
        return d


@dataclass
class Report:
    kind: str
    config: dict
    stages: list[Stage]
    status: str
    label: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "config": self.config,
            "stages": [s.to_dict() for s in self.stages],
            "pass": self.passed,
            "status": self.status,
            "label": self.label,
            "details": self.details,
        }


def l0_row_formula(cfg: Theorem2Config, m: int, half_L: CyclotomicNumber) -> dict[int, PadicApprox]:
    """Row l = 0 of sigma(G_{k_m}) straight from the Eisenstein formula, without the lift.

    Constant term 1; the q^n coefficient is
    sigma(L/2)^(-1) sum_{p !| d | n} omega(d)^alpha d^(k_m - 1).
    """
    p, sigma, M = cfg.p, cfg.sigma, cfg.M
    k_m = cfg.k(m)
    inv = embed(half_L, sigma).inverse()
    W = M + 4
    mod = p**W
    out = {0: embed(CyclotomicNumber.one(p - 1), sigma)}
    for n in range(1, cfg.N + 1):
        s = 0
        for d in range(1, n + 1):
            if n % d == 0 and d % p:
                s += pow(teichmuller_residue(d, p, W), cfg.alpha, mod) * pow(d, k_m - 1, mod)
        term = PadicApprox.from_int_mod(p, s, W)
        out[n] = inv * term
    return out


def lemma2_subreport(cfg: Theorem2Config, n_max: int = 10) -> dict:
    """v_p(a_{l_{m+1}}(n) - a_{l_m}(n)) for the level-1 factor E_{l_m}, n <= n_max."""
    series = [eisenstein_level1(cfg.l(m), n_max) for m in range(1, cfg.m_max + 1)]
    rows = []
    mins = []
    for i in range(len(series) - 1):
        vals = [valuation(series[i + 1][n] - series[i][n], cfg.p) for n in range(1, n_max + 1)]
        rows.append({"m": i + 1, "valuations": [v if v != INF else "inf" for v in vals]})
        mins.append(min(vals))
    return {
        "n_max": n_max,
        "differences": rows,
        "min_valuations": [v if v != INF else "inf" for v in mins],
        "increasing": _strictly_increasing(mins),
    }


def _stage_for(cfg: Theorem2Config, res: GkmResult, deltas: dict) -> Stage:
    best, where = _min_with_argmin(deltas)
    table = [[*idx, _capped(v, cfg.M) if v != INF else "inf"] for idx, v in deltas.items()]
    weight = WeightX.of(res.k_m, cfg.p, cfg.M)
    return Stage(
        res.m,
        res.k_m,
        _capped(best, cfg.M) if best != INF else "inf",
        list(where) if where else None,
        table,
        {"weight_X": weight.as_dict()},
    )


def _resolve(values: list, M: int) -> str:
    if any(not isinstance(v, int) for v in values):
        return PRECISION
    return PASS if _strictly_increasing(values) else FAIL


def convergence_report(cfg: Theorem2Config, _retried: bool = False) -> Report:
    """Per-m valuations of G^sigma_{k_m} - 1 and the strict-increase verdict."""
    if cfg.m_max < 2:
        raise ValueError("m_max >= 2 is needed to observe convergence")
    sigma = cfg.sigma
    stages = []
    l0_agrees = True
    const_exact = True
    for m in range(1, cfg.m_max + 1):
        res = build_G_km(cfg, m)
        const_exact &= res.G[(0, 0, 0)] == 1
        deltas = _delta_table(res.G, sigma)
        stages.append(_stage_for(cfg, res, deltas))
        # the l = 0 row against the direct Eisenstein formula
        expected = l0_row_formula(cfg, m, res.half_L)
        row0 = fourier_jacobi_row(res.G, 0)
        for n in range(cfg.N + 1):
            got = embed(row0[(n, 0)], sigma)
            diff = got - expected[n]
            if not (diff.is_zero() or diff.valuation >= min(got.absprec, expected[n].absprec)):
                l0_agrees = False
                log.warning("l=0 row mismatch at n=%d, m=%d", n, m)
    mins = [s.min_val for s in stages]
    status = _resolve(mins, cfg.M)
    if status != PASS and not _retried:
        log.info("retrying with precision %d", cfg.M + PRECISION_STEP)
        return convergence_report(cfg.with_prec(cfg.M + PRECISION_STEP), _retried=True)
    if status == PASS and not (l0_agrees and const_exact):
        status = FAIL
    details = {
        "constant_term_exact_one": const_exact,
        "l0_row_matches_formula": l0_agrees,
        "limit_weight": {"s": 0, "class_mod_p_minus_1": (-cfg.alpha) % (cfg.p - 1)},
        "lemma2": lemma2_subreport(cfg),
    }
    label = f"consistent with G^sigma_(k_m) -> 1 to precision {cfg.M}, truncation {cfg.N}" if status == PASS else ""
    return Report("theorem2", cfg.to_dict(), stages, status, label, details)


def lemma2_check(p: int, a: int, m_max: int) -> Report:
    """v_p(l_m) = 1, (p-1) | l_m and v_p(B_{l_m} / 2 l_m) = -2 for 2 <= m <= m_max."""
    if m_max < 2:
        raise ValueError("m_max >= 2 is needed")
    stages = []
    ok = True
    for m in range(2, m_max + 1):
        l_m = a * p * (p ** (m - 1) - 1)
        v_l = valuation(l_m, p)
        divisible = l_m % (p - 1) == 0
        v_const = constant_term_valuation(l_m, p)
        good = v_l == 1 and divisible and v_const == -2
        ok &= good
        stages.append(
            Stage(m, a * p**m, v_const, None, [],
                  {"l_m": l_m, "v_p_l_m": v_l, "p_minus_1_divides": divisible, "ok": good})
        )
    return Report("lemma2", {"p": p, "a": a, "m_max": m_max}, stages, PASS if ok else FAIL)


def theorem1_product_run(
    F: SiegelSeries,
    cfg: Theorem2Config,
    sequence: Callable[[int], SiegelSeries] | None = None,
    _retried: bool = False,
) -> Report:
    """min_T v_p(sigma(F G_{k_m} - F)) over m, with G_{k_m} built for ``cfg.chi``.

    ``cfg.chi`` has to be the inverse of F's character.  ``sequence`` replaces
    the G_{k_m} (used for synthetic checks).
    """
    chi_F = F.meta.character
    if chi_F is None or not (chi_F * cfg.chi).is_trivial():
        raise CharacterMismatch(
            f"F has character {chi_F.spec() if chi_F else 'trivial'}; the sequence must use its inverse"
        )
    if F.ring == "QQ":
        F = to_cyclotomic(F, cfg.p - 1)
    sigma = cfg.sigma
    N = min(F.trunc, cfg.N)
    F = F.truncate(N)
    stages = []
    meta_ok = True
    for m in range(1, cfg.m_max + 1):
        G = sequence(m) if sequence else build_G_km(cfg, m).G
        P = siegel_mul(F, G.truncate(N) if G.trunc > N else G)
        trivial = P.meta.character_is_trivial()
        even = P.meta.weight % 2 == 0
        meta_ok &= trivial and even
        diff = P - F
        deltas = {idx: embed(diff[idx], sigma).valuation for idx in sorted(diff.coeffs)}
        best, where = _min_with_argmin(deltas)
        stages.append(Stage(
            m, G.meta.weight,
            _capped(best, cfg.M) if best != INF else "inf",
            list(where) if where else None,
            [[*idx, _capped(v, cfg.M) if v != INF else "inf"] for idx, v in deltas.items()],
            {"product_weight": P.meta.weight, "product_character_trivial": trivial},
        ))
    mins = [s.min_val for s in stages]
    if all(v == "inf" for v in mins):
        status = PASS
    else:
        status = _resolve(mins, cfg.M)
    if status != PASS and sequence is None and not _retried:
        return theorem1_product_run(F, cfg.with_prec(cfg.M + PRECISION_STEP), sequence, _retried=True)
    if not meta_ok:
        status = FAIL
    config = cfg.to_dict()
    config["F_weight"] = F.meta.weight
    config["F_character"] = chi_F.spec()
    return Report("theorem1", config, stages, status,
                  f"consistent with (F G_(k_m))^sigma -> F^sigma to precision {cfg.M}, truncation {N}"
                  if status == PASS else "",
                  {"product_meta_ok": meta_ok})


@dataclass
class UnitCongruence:
    holds: bool
    witness: tuple | None = None
    non_integral: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "witness": list(self.witness) if self.witness else None,
            "non_integral": list(self.non_integral) if self.non_integral else None,
        }


def unit_congruence_check(G: SiegelSeries, sigma: EmbeddingSigma, p: int) -> UnitCongruence:
    """Whether sigma(G) = 1 mod p coefficientwise on the stored indices."""
    if sigma.p != p:
        raise ValueError("embedding uses a different prime")
    if G.ring == "QQ":
        G = to_cyclotomic(G, p - 1)
    for idx in sorted(G.coeffs):
        image = embed(G[idx], sigma)
        if image.valuation < 0:
            return UnitCongruence(False, idx, non_integral=idx)
    for idx in sorted(G.coeffs):
        if embed(G[idx] - _origin_indicator(idx), sigma).valuation < 1:
            return UnitCongruence(False, idx)
    return UnitCongruence(True)
