from math import gcd

import pytest

from padic_siegel_lab.arith import CyclotomicNumber
from padic_siegel_lab.characters import DirichletCharacter, EmbeddingSigma, embed
from padic_siegel_lab.eisenstein import hecke_eisenstein_chi, jacobi_eisenstein
from padic_siegel_lab.lab import Theorem2Config, build_phi_km
from padic_siegel_lab.lvalues import dirichlet_L_neg
from padic_siegel_lab.maass import InsufficientTruncation, maass_defect, maass_lift
from padic_siegel_lab.qseries import SiegelSeries, fourier_jacobi_row, map_coefficients, series_distance

CHI = DirichletCharacter.parse("5:1")


@pytest.fixture(scope="module")
def flagship():
    cfg = Theorem2Config(5, CHI, 1, 3, 2, 2, 10)
    phi = build_phi_km(cfg, 1)
    return phi, maass_lift(phi, 15, CHI, 5, 2)


def test_formula_instances(flagship):
    phi, F = flagship
    for (n, r), c in phi.coeffs.items():
        if n <= 2:
            assert F[(n, r, 1)] == c
    assert F[(2, 2, 2)] == phi[(4, 2)] + CHI(2) * 2**14 * phi[(1, 1)]
    assert F[(0, 0, 0)] == dirichlet_L_neg(15, CHI).value / 2 * phi[(0, 0)]


def test_symmetries(flagship):
    _, F = flagship
    for (n, r, l), v in F.coeffs.items():
        assert F[(l, r, n)] == v
        assert F[(n, -r, l)] == v


def test_row_zero_is_hecke_eisenstein(flagship):
    phi, F = flagship
    half_L = dirichlet_L_neg(15, CHI).value / 2
    E = hecke_eisenstein_chi(15, CHI, 2)
    row = fourier_jacobi_row(F, 0)
    for n in range(3):
        assert row[(n, 0)] == phi[(0, 0)] * half_L * E[n]


def test_p_divisible_gcd_keeps_only_d_equal_one():
    k = 3
    phi = map_coefficients(jacobi_eisenstein(4, 25), lambda c: CyclotomicNumber.from_rational(4, c), "cyclo")
    chi = DirichletCharacter.parse("5:1")
    F = maass_lift(phi, k, chi, 5, 5)
    checked = 0
    for (n, r, l), v in F.coeffs.items():
        g = gcd(gcd(n, abs(r)), l)
        if g in (5, 25):
            assert v == phi[(n * l, r)]
            checked += 1
    assert checked >= 3


def test_defect_detects_perturbation(flagship):
    phi, F = flagship
    assert maass_defect(F, phi, 15, CHI, 5).ok
    coeffs = dict(F.coeffs)
    coeffs[(1, 1, 2)] = coeffs[(1, 1, 2)] + 1
    bad = SiegelSeries(F.trunc, coeffs, F.meta, F.ring)
    d = maass_defect(bad, phi, 15, CHI, 5)
    assert list(d.defects) == [(1, 1, 2)]
    assert d.defects[(1, 1, 2)] == 1


def test_lift_commutes_with_embedding(flagship):
    phi, F = flagship
    sigma = EmbeddingSigma.from_index(5, 1, 10)
    to_p = lambda x: embed(x, sigma)
    lifted_then_mapped = map_coefficients(F, to_p, "padic")
    mapped_then_lifted = maass_lift(map_coefficients(phi, to_p, "padic"), 15, CHI, 5, 2, scalar_map=to_p)
    v, _ = series_distance(lifted_then_mapped, mapped_then_lifted)
    assert v >= 8


def test_rational_input_is_coerced():
    F = maass_lift(jacobi_eisenstein(4, 4), 3, CHI, 5, 2)
    assert F.ring == "cyclo"
    assert F.meta.weight == 3 and F.meta.character == CHI


def test_errors(flagship):
    phi, _ = flagship
    with pytest.raises(ValueError, match="parity"):
        maass_lift(phi, 14, CHI, 5, 2)
    with pytest.raises(InsufficientTruncation):
        maass_lift(phi, 15, CHI, 5, 3)
    with pytest.raises(ValueError):
        maass_lift(phi, 15, DirichletCharacter.parse("7:1"), 5, 2)
    sigma = EmbeddingSigma.from_index(5, 1)
    with pytest.raises(ValueError, match="scalar_map"):
        maass_lift(map_coefficients(phi, sigma, "padic"), 15, CHI, 5, 2)
