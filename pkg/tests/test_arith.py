from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_siegel_lab.arith import (
    INF,
    CyclotomicNumber,
    PadicApprox,
    PrecisionError,
    ZmodPk,
    cyclo_inverse,
    cyclo_mul,
    cyclotomic_polynomial,
    decode_padic,
    decode_rational,
    discrete_log,
    divisors,
    encode_cyclotomic,
    encode_padic,
    encode_rational,
    euler_phi,
    factorize,
    is_prime,
    kronecker_symbol,
    moebius,
    padic_arith,
    padic_of_rational,
    primitive_root,
    sigma,
    valuation,
)

Z = CyclotomicNumber


def small_fractions(max_num=50, max_den=20):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def cyclo(m):
    return st.lists(small_fractions(), min_size=euler_phi(m), max_size=euler_phi(m)).map(lambda cs: Z(m, cs))


# --- elementary number theory ---------------------------------------------

def test_small_helpers():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert [euler_phi(n) for n in (1, 4, 6, 10, 12)] == [1, 2, 2, 4, 4]
    assert [moebius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert sigma(5, 2) == 33
    assert valuation(Fraction(-691, 2730), 5) == -1
    assert valuation(0, 7) == INF


@pytest.mark.parametrize("m, coeffs", [(4, (1, 0, 1)), (6, (1, -1, 1)), (10, (1, -1, 1, -1, 1)), (12, (1, 0, -1, 0, 1))])
def test_cyclotomic_polynomial(m, coeffs):
    assert cyclotomic_polynomial(m) == coeffs


@pytest.mark.parametrize("p, g", [(5, 2), (7, 3), (11, 2), (13, 2), (23, 5), (41, 6)])
def test_primitive_root(p, g):
    assert primitive_root(p) == g


def test_primitive_root_rejects_non_odd_prime():
    with pytest.raises(ValueError):
        primitive_root(4)


def test_discrete_log_examples():
    assert discrete_log(5, 2, 3) == 3
    assert discrete_log(5, 2, 1) == 0
    assert discrete_log(7, 3, 5) == 5
    with pytest.raises(ValueError):
        discrete_log(7, 3, 14)


@pytest.mark.parametrize("p", [q for q in range(3, 50) if is_prime(q)])
def test_discrete_log_round_trip(p):
    g = primitive_root(p)
    for x in range(1, p):
        e = discrete_log(p, g, x)
        assert 0 <= e <= p - 2
        assert pow(g, e, p) == x


def _legendre(a, q):
    a %= q
    if a == 0:
        return 0
    return 1 if any(x * x % q == a for x in range(1, q)) else -1


def test_kronecker_examples():
    assert kronecker_symbol(-3, 2) == -1
    assert kronecker_symbol(-4, 3) == -1
    assert all(kronecker_symbol(D, 1) == 1 for D in range(-20, 20))
    for q in (3, 5, 7, 11, 13):
        for D in range(-30, 30):
            assert kronecker_symbol(D, q) == _legendre(D, q)


@given(st.integers(-200, 200), st.integers(1, 60), st.integers(1, 60))
def test_kronecker_multiplicative(D, m, n):
    assert kronecker_symbol(D, m * n) == kronecker_symbol(D, m) * kronecker_symbol(D, n)


def test_zmodpk():
    x = ZmodPk(5, 2, 7)
    assert x**4 == 1
    assert int(x * 2 + 1) == 15
    assert ZmodPk(5, 2, 30).residue == 5


# --- cyclotomic field -------------------------------------------------------

def test_cyclo_examples():
    i = Z.zeta(4)
    assert cyclo_mul(i, i) == -1
    assert cyclo_mul(Z(4, [3, 1]), Z(4, [3, -1])) == 10
    z6 = Z.zeta(6)
    assert cyclo_mul(z6, z6) == z6 - 1
    assert cyclo_inverse(i) == -i
    assert cyclo_inverse(Z(4, [3, 1])) == Z(4, [Fraction(3, 10), Fraction(-1, 10)])
    assert cyclo_mul(z6, cyclo_inverse(z6)) == 1
    assert cyclo_inverse(z6) == 1 - z6


def test_cyclo_errors():
    with pytest.raises(ZeroDivisionError):
        cyclo_inverse(Z.zero(4))
    with pytest.raises(ValueError):
        Z.zeta(4) + Z.zeta(6)


def test_zeta_order():
    for m in (4, 6, 10, 12):
        z = Z.zeta(m)
        assert z**m == 1
        assert all(z**j != 1 for j in range(1, m))


@pytest.mark.parametrize("m", [4, 6, 10])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_cyclo_field_axioms(m, data):
    x, y, z = (data.draw(cyclo(m)) for _ in range(3))
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if not x.is_zero():
        assert x.inverse() * x == 1


# --- p-adics ----------------------------------------------------------------

def test_padic_examples():
    x = PadicApprox(5, 0, 2, 6)
    y = PadicApprox(5, 1, 3, 6)
    prod = padic_arith(x, y, "mul")
    assert (prod.valuation, prod.unit, prod.relprec) == (1, 6, 6)

    one = PadicApprox(5, 0, 1, 4)
    minus_one = PadicApprox(5, 0, 5**4 - 1, 4)
    s = padic_arith(one, minus_one, "add")
    assert s.is_zero() and not s.is_exact_zero() and s.valuation >= 4

    z = PadicApprox(5, -2, 3, 6)
    inv = padic_arith(padic_of_rational(1, 5, 6), z, "div")
    assert inv.valuation == 2 and inv.unit == pow(3, -1, 5**6)


def test_padic_of_rational_examples():
    x = padic_of_rational(Fraction(10, 3), 5, 8)
    assert x.valuation == 1 and x.unit == 2 * pow(3, -1, 5**8) % 5**8
    assert padic_of_rational(Fraction(-691, 2730), 5).valuation == -1
    assert padic_of_rational(0, 5).is_exact_zero()


def test_padic_zero_handling():
    with pytest.raises(ZeroDivisionError):
        padic_of_rational(1, 5) / PadicApprox.exact_zero(5)
    with pytest.raises(PrecisionError):
        PadicApprox.zero_to(5, 3).inverse()
    with pytest.raises(ValueError):
        padic_of_rational(1, 5) + padic_of_rational(1, 7)


def _exact_agree(approx: PadicApprox, q: Fraction) -> bool:
    """approx represents q to its stated absolute precision."""
    if q == 0:
        return approx.is_zero()
    ref = padic_of_rational(q, approx.p, 40)
    if approx.is_zero():
        return ref.valuation >= approx.valuation
    if ref.valuation != approx.valuation:
        return False
    return (ref.unit - approx.unit) % approx.p**approx.relprec == 0


nonzero_fracs = small_fractions(10**6, 10**6).filter(lambda q: q != 0)


@settings(max_examples=1000, deadline=None)
@given(nonzero_fracs, nonzero_fracs, st.sampled_from([3, 5, 7]), st.sampled_from(["add", "mul", "div"]))
def test_padic_matches_rational(a, b, p, op):
    x, y = padic_of_rational(a, p), padic_of_rational(b, p)
    got = padic_arith(x, y, op)
    exact = {"add": a + b, "mul": a * b, "div": a / b}[op]
    assert _exact_agree(got, exact)
    if op == "mul":
        assert got.valuation == x.valuation + y.valuation
    if op == "div":
        assert got.valuation == x.valuation - y.valuation


# --- encodings --------------------------------------------------------------

def test_encodings_round_trip():
    assert encode_rational(Fraction(-691, 2730)) == "-691/2730"
    assert encode_rational(3) == "3/1"
    assert decode_rational("-691/2730") == Fraction(-691, 2730)
    assert encode_cyclotomic(Z(4, [3, 1]) / 5) == ["3/5", "1/5"]
    x = padic_of_rational(Fraction(7, 25), 5, 6)
    assert decode_padic(5, encode_padic(x)) == x
    assert encode_padic(PadicApprox.exact_zero(5))["v"] == "inf"
    assert decode_padic(5, {"v": "inf", "unit": "0", "relprec": 0}).is_exact_zero()
