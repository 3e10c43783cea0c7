import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quasisubfield.algebra import (
    ExtField,
    FpPoly,
    Matrix,
    PrimeField,
    companion,
    ext_field_make,
    format_poly,
    fp_matrix,
    is_irreducible,
    is_prime,
    kernel_dimension_fp,
    matrix_order,
    parse_poly,
    poly_companion,
    poly_gcd,
    powmod,
    x_power_order,
)
from quasisubfield.errors import CapExceededError, DomainError, PolyParseError, UsageError

PRIMES = [2, 3, 5, 7]


def sympy_poly(f: FpPoly) -> sympy.Poly:
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(f.coeffs)) or [0], x, modulus=f.p)


def polys(p: int, max_degree: int = 8):
    return st.lists(st.integers(0, p - 1), max_size=max_degree + 1).map(lambda c: FpPoly(p, c))


# ---------------------------------------------------------------- integers


def test_is_prime_matches_sympy_below_10000():
    assert [n for n in range(10_000) if is_prime(n)] == list(sympy.primerange(0, 10_000))


@given(st.integers(2**63, 2**80))
@settings(max_examples=50)
def test_is_prime_large_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


# ---------------------------------------------------------------- F_p[X]


def test_gcd_of_x2_x_1_and_x3_minus_1():
    assert poly_gcd(parse_poly("X^2+X+1", 2), parse_poly("X^3-1", 2)) == parse_poly("X^2+X+1", 2)


def test_square_of_x_plus_1_in_char_2():
    f = FpPoly(2, [1, 1])
    assert f * f == parse_poly("X^2+1", 2)


def test_powmod_matches_repeated_squaring():
    m = parse_poly("X^3+X+1", 2)
    h = FpPoly.x(2)
    for _ in range(7):
        h = (h * h) % m
    assert powmod(FpPoly.x(2), 2**7, m) == h
    assert h == FpPoly.x(2) ** 128 % m


@pytest.mark.parametrize("p", PRIMES)
def test_arithmetic_matches_sympy(p):
    rng = random.Random(p)
    for _ in range(60):
        f = FpPoly(p, [rng.randrange(p) for _ in range(rng.randrange(1, 9))])
        g = FpPoly(p, [rng.randrange(p) for _ in range(rng.randrange(1, 7))] + [1])
        q, r = divmod(f, g)
        sq, sr = sympy.div(sympy_poly(f), sympy_poly(g))
        assert sympy_poly(q) == sq and sympy_poly(r) == sr
        assert sympy_poly(f * g) == sympy_poly(f) * sympy_poly(g)
        gcd = poly_gcd(f, g)
        assert sympy_poly(gcd) == sympy.gcd(sympy_poly(f), sympy_poly(g)).monic()


@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(polys(p), polys(p), polys(p))))
def test_ring_axioms(fgh):
    f, g, h = fgh
    assert f + g == g + f
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f - g) + g == f


@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(polys(p), polys(p, 5))))
def test_division_identity(fg):
    f, g = fg
    if g.is_zero:
        return
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


@pytest.mark.parametrize("p,degree", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_matches_sympy(p, degree):
    for tail in itertools.product(range(p), repeat=degree):
        f = FpPoly(p, list(tail) + [1])
        assert is_irreducible(f) == sympy_poly(f).is_irreducible, f


def test_x_power_order_matches_brute_force():
    rng = random.Random(1)
    for p in (2, 3, 5):
        for _ in range(40):
            d = rng.randrange(1, 5)
            f = FpPoly(p, [rng.randrange(1, p)] + [rng.randrange(p) for _ in range(d - 1)] + [1])
            brute = next((k for k in range(1, 200) if powmod(FpPoly.x(p), k, f) == FpPoly(p, [1]) % f), None)
            assert x_power_order(f, 199) == brute


def test_x_power_order_rejects_zero_constant():
    with pytest.raises(DomainError):
        x_power_order(parse_poly("X^2+X", 2), 10)


# ---------------------------------------------------------------- text I/O


@pytest.mark.parametrize(
    "text,p,expected",
    [
        ("X^2+X+1", 2, (1, 1, 1)),
        ("1 + X + X^2", 2, (1, 1, 1)),
        ("X**3 - X", 3, (0, 2, 0, 1)),
        ("2*X^2+3", 5, (3, 0, 2)),
        ("-X", 7, (0, 6)),
    ],
)
def test_parse(text, p, expected):
    assert parse_poly(text, p).coeffs == expected


def test_parse_list_form():
    assert parse_poly("[1, 1, 0, 1] mod 2") == FpPoly(2, [1, 1, 0, 1])


@pytest.mark.parametrize(
    "text,column",
    [("X^2 + + X", 7), ("X^", 3), ("X^2 $ 1", 5), ("", 1), ("X^2 X", 5)],
)
def test_parse_errors_report_column(text, column):
    with pytest.raises(PolyParseError) as err:
        parse_poly(text, 2)
    assert f"column {column}" in str(err.value)


def test_parse_needs_characteristic():
    with pytest.raises(PolyParseError):
        parse_poly("X+1")


@pytest.mark.parametrize(
    "coeffs,p,text",
    [((1, 1, 0, 0, 1), 2, "X^4+X+1"), ((2, 1, 1, 2, 0, 1), 3, "X^5-X^3+X^2+X-1"), ((0, 0, 2), 5, "2*X^2"), ((), 3, "0")],
)
def test_format(coeffs, p, text):
    assert format_poly(FpPoly(p, coeffs)) == text


@given(st.sampled_from(PRIMES).flatmap(polys))
def test_format_parse_round_trip(f):
    if f.is_zero:
        return
    assert parse_poly(format_poly(f), f.p) == f


# ---------------------------------------------------------------- fields


def test_ext_field_moduli():
    assert ext_field_make(2, 3).modulus == parse_poly("X^3+X+1", 2)
    assert ext_field_make(5, 1).modulus.degree == 1
    m = ext_field_make(3, 2).modulus
    assert m.degree == 2 and all(m(x) for x in range(3))


def test_first_cubic_over_f2_by_exhaustive_scan():
    first = next(
        f for f in (FpPoly(2, [a, b, c, 1]) for c in range(2) for b in range(2) for a in range(2))
        if is_irreducible(f)
    )
    assert ext_field_make(2, 3).modulus == first


def test_field_cap():
    with pytest.raises(CapExceededError):
        ext_field_make(2, 50, cap=2**40)


def test_reducible_modulus_rejected():
    with pytest.raises(DomainError):
        ExtField(2, 2, parse_poly("X^2+1", 2))


def test_frobenius_n_is_identity():
    fld = ext_field_make(2, 3)
    rng = random.Random(0)
    for _ in range(20):
        x = fld.random(rng)
        assert x.frobenius(3) == x
        assert x.frobenius(1) == x**2


def test_inverses_in_f9():
    fld = ext_field_make(3, 2)
    for x in fld.elements():
        if x:
            assert x * x.inv() == 1
    with pytest.raises(DomainError):
        fld.zero.inv()


def test_fermat_in_f125():
    fld = ext_field_make(5, 3)
    assert all(x ** (fld.order - 1) == 1 for x in fld.elements() if x)


@given(st.integers(0, 26), st.integers(0, 26), st.integers(0, 26))
def test_field_axioms_f27(a, b, c):
    fld = ext_field_make(3, 3)
    x, y, z = fld.from_int(a), fld.from_int(b), fld.from_int(c)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert (x + y).frobenius() == x.frobenius() + y.frobenius()
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()
    assert fld.from_int(x.to_int()) == x


def test_mixed_fields_rejected():
    a = ext_field_make(2, 3).one
    b = ext_field_make(2, 4).one
    with pytest.raises(UsageError):
        a + b


# ---------------------------------------------------------------- matrices


def test_identity_power():
    i3 = Matrix.identity(PrimeField(5), 3)
    assert i3**7 == i3
    assert (i3 - i3).rank() == 0


def test_companion_of_x2_x_1_cubes_to_identity():
    c = poly_companion(parse_poly("X^2+X+1", 2))
    assert (c**3).is_identity()
    assert matrix_order(c, 4) == 3


@pytest.mark.parametrize("text,p,bound,order", [("X^3+X+1", 3, 9, 8), ("X^4+X+1", 2, 16, 15)])
def test_companion_orders(text, p, bound, order):
    f = parse_poly(text, p)
    assert matrix_order(poly_companion(f), bound) == order == x_power_order(f, bound)


def test_companion_last_column():
    c = companion([1, 2, 0], PrimeField(5))
    assert [c[i, 2] for i in range(3)] == [4, 3, 0]
    assert [c[1, 0], c[2, 1]] == [1, 1]


def test_singular_matrix_has_no_order():
    with pytest.raises(DomainError):
        matrix_order(fp_matrix(3, [[1, 0], [0, 0]]), 5)


def test_rank_matches_row_space_size():
    rng = random.Random(3)
    for p in (2, 3, 5):
        for _ in range(20):
            rows = [[rng.randrange(p) for _ in range(4)] for _ in range(4)]
            span = {
                tuple(sum(c * r[j] for c, r in zip(combo, rows)) % p for j in range(4))
                for combo in itertools.product(range(p), repeat=4)
            }
            rank = fp_matrix(p, rows).rank()
            assert p**rank == len(span)
            assert kernel_dimension_fp(rows, p) == 4 - rank
