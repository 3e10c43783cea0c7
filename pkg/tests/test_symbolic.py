import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quasisubfield.algebra import PrimeField, companion, ext_field_make
from quasisubfield.errors import DomainError
from quasisubfield.qsp import LinearizedQsp, companion_of, min_n
from quasisubfield.symbolic import (
    APow,
    One,
    Star,
    SymEntry,
    Zero,
    abstract_value,
    bound_report,
    chen_louck_entry,
    consistent,
    identity_representable,
    sym_add,
    sym_companion,
    sym_mul,
    sym_pow,
    sym_powers,
    witness_index,
)

symbols = st.sampled_from(list(SymEntry))


def test_tables():
    assert (sym_add(APow, APow), sym_mul(APow, APow)) == (Star, APow)
    for x in SymEntry:
        assert sym_add(Zero, x) is x and sym_mul(Zero, x) is Zero
        assert sym_mul(One, x) is x
    assert sym_add(One, One) is Star


@given(symbols, symbols, symbols)
def test_semiring_laws(x, y, z):
    assert x + y is y + x and x * y is y * x
    assert (x + y) + z is x + (y + z)
    assert (x * y) * z is x * (y * z)
    assert x * (y + z) is (x * y) + (x * z)


def test_companion_shape():
    assert sym_companion(2, 1) == ((Zero, Star), (One, APow))
    assert [row[-1] for row in sym_companion(3, 1)] == [Star, APow, Zero]
    with pytest.raises(DomainError):
        sym_companion(3, 3)


def test_concrete_companion_abstracts_to_symbolic():
    rng = random.Random(0)
    for _ in range(30):
        fld = ext_field_make(3, rng.randrange(1, 4))
        n_prime = rng.randrange(2, 5)
        ell = rng.randrange(1, n_prime)
        lam = [fld.random(rng) for _ in range(ell)] + [fld.random(rng) or fld.one]
        c = companion([-a for a in lam] + [fld.zero] * (n_prime - ell - 1), fld)
        m = sym_companion(n_prime, ell)
        top = lam[-1]
        for i in range(n_prime):
            for j in range(n_prime):
                assert consistent(m[i][j], c[i, j], top)


def test_abstraction_is_sound_for_prime_field_powers():
    # With coefficients in F_p the Frobenius twists vanish and A_L = C_L^n.
    rng = random.Random(1)
    for _ in range(40):
        p = rng.choice([3, 5, 7])
        n_prime = rng.randrange(2, 5)
        ell = rng.randrange(1, n_prime)
        lam = [rng.randrange(p) for _ in range(ell)] + [rng.randrange(1, p)]
        q = LinearizedQsp(p, 1, n_prime, tuple(lam))
        c = companion_of(q)
        fld = PrimeField(p)
        top = lam[-1]
        power = c
        for n, sym in enumerate(sym_powers(sym_companion(n_prime, ell), 12), start=1):
            for i in range(n_prime):
                for j in range(n_prime):
                    x = power[i, j]
                    if sym is not None:
                        _check_prime(sym[i][j], x, top, fld)
            power = power * c


def _check_prime(symbol, x, top, fld):
    if symbol is Zero:
        assert x == 0
    elif symbol is One:
        assert x == 1
    elif symbol is APow:
        assert x != 0 and any(pow(top, k, fld.p) == x for k in range(1, fld.p))


def test_abstract_value_over_extension():
    fld = ext_field_make(2, 4)
    top = fld.gen
    assert abstract_value(fld.zero, top) is Zero
    assert abstract_value(fld.one, top) is One
    assert abstract_value(top**5, top) is APow


def test_sym_pow_basics():
    m = sym_companion(2, 1)
    assert sym_pow(m, 1) == m
    assert not identity_representable(sym_pow(m, 2))
    assert identity_representable(sym_pow(m, 3))
    assert sym_pow(m, 3)[0][0] is not Zero


def test_small_powers_are_not_identity():
    m = sym_companion(3, 1)
    for n in range(3, 7):
        assert not identity_representable(sym_pow(m, n))
    assert min_n(3, 1) == 7


def test_identity_representable_cases():
    star = tuple(tuple(Star for _ in range(3)) for _ in range(3))
    assert identity_representable(star)
    with_a = tuple(tuple(APow if (i, j) == (1, 0) else Star for j in range(3)) for i in range(3))
    assert not identity_representable(with_a)
    with_zero = tuple(tuple(Zero if (i, j) == (0, 0) else Star for j in range(3)) for i in range(3))
    assert not identity_representable(with_zero)


def test_chen_louck_unit_diagonal():
    assert chen_louck_entry(4, 1, 2, 3, 1) is One


@pytest.mark.parametrize("n_prime", range(2, 7))
def test_chen_louck_matches_sym_pow(n_prime):
    for ell in range(1, n_prime):
        for n, power in enumerate(sym_powers(sym_companion(n_prime, ell), n_prime * n_prime), start=1):
            for i in range(n_prime):
                for j in range(n_prime):
                    assert chen_louck_entry(n_prime, ell, n, i + 1, j + 1) is power[i][j], (n_prime, ell, n, i, j)


@pytest.mark.parametrize("n,expected", [(3, (2, APow)), (2, (3, One)), (6, (3, APow))])
def test_witness_index(n, expected):
    assert witness_index(n, 3, 1) == expected
    i, sym = expected
    assert sym_pow(sym_companion(3, 1), n)[i - 1][0] is sym
    assert chen_louck_entry(3, 1, n, i, 1) is sym


def test_witness_beyond_bound_is_refused():
    with pytest.raises(DomainError):
        witness_index(7, 3, 1)


def test_bound_report():
    report = bound_report(3, 1)
    assert report["min_n"] == 7
    assert report["symbolic_bound"] == report["chen_louck_oracle"] == "PASS"
    assert [t["witness_row"] for t in report["trace"] if 3 <= t["n"] <= 6] == [2, 3, 2, 3]
