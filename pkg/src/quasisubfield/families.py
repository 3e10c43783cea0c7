"""Explicit QSP families: additive Types 1, 1bis, 2, 3, multiplicative families 1-3,
and divisor counting of X^n - 1 over F_2 for Mersenne-prime n."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any

from .algebra import ExtElem, FpPoly, ext_field_make, is_irreducible, is_prime
from .errors import CapExceededError, DomainError, UsageError, VerificationError
from .qsp import (
    distinct_roots_in_extension,
    invert_qsp,
    linearize,
    split_test_div,
)

ADDITIVE_DEGREE_CAP = 1 << 16
MULT_ROOT_CHECK_CAP = 1 << 14


@dataclass(frozen=True)
class AdditiveMember:
    """A verified member of an additive family: L_f splits over F_{p^n}."""

    family: str
    p: int
    n: int
    f: FpPoly
    beta: Fraction
    params: dict[str, int] = field(default_factory=dict)

    @property
    def n_prime(self) -> int:
        return self.f.degree

    def to_json(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "p": self.p,
            "n": self.n,
            "n_prime": self.n_prime,
            "f": list(self.f.coeffs),
            "beta_num": self.beta.numerator,
            "beta_den": self.beta.denominator,
            "tags": [self.family],
            "inverse": None,
            "params": self.params,
        }


def _finish(family: str, f: FpPoly, n: int, params: dict[str, int]) -> AdditiveMember:
    if not split_test_div(f, n):
        raise VerificationError(f"{family} member {f} does not split over F_{f.p}^{n}")
    return AdditiveMember(family, f.p, n, f, linearize(f, n).beta(), params)


def type1_closed_form_beta(p: int, r: int, a_index: int) -> Fraction:
    """1 - (1/p_a)(1 - 1/p^r + 1/(p^r p_a))."""
    q = p**r
    p_a = sum(q**i for i in range(a_index + 1))
    return 1 - Fraction(1, p_a) * (1 - Fraction(1, q) + Fraction(1, q * p_a))


def gen_type1(p: int, r: int, a_index: int) -> AdditiveMember:
    """h = X^{p_a} + ... + X^{p_0} + 1 with p_i = 1 + q + ... + q^i, n = p_{a+1}."""
    if r < 0 or a_index < 1:
        raise UsageError("Type 1 needs r >= 0 and a >= 1")
    q = p**r
    chain = [sum(q**i for i in range(j + 1)) for j in range(a_index + 2)]
    if chain[a_index] > ADDITIVE_DEGREE_CAP:
        raise CapExceededError("Type 1 degree above cap")
    coeffs = [0] * (chain[a_index] + 1)
    coeffs[0] = 1
    for e in chain[: a_index + 1]:
        coeffs[e] = 1
    member = _finish("T1", FpPoly(p, coeffs), chain[a_index + 1], {"r": r, "q": q, "a": a_index})
    if member.beta != type1_closed_form_beta(p, r, a_index):
        raise VerificationError("Type 1 beta disagrees with its closed form")
    return member


def gen_type1bis(p: int, n: int) -> AdditiveMember:
    """X^{n-1} + ... + X + 1 over F_{p^n}, beta = 1 - 1/(n-1)^2."""
    if n < 3:
        raise UsageError("Type 1bis needs n >= 3")
    member = _finish("T1bis", FpPoly(p, [1] * n), n, {"n": n})
    if member.beta != 1 - Fraction(1, (n - 1) ** 2):
        raise VerificationError("Type 1bis beta disagrees with its closed form")
    return member


def type2_closed_form_beta(q: int, d: int, a_param: int) -> Fraction:
    if a_param == 0:
        return 1 - Fraction(q ** (d - 1), sum(q**i for i in range(d)) ** 2)
    return 1 - Fraction(1, q ** (d + 1))


def _type2_coeffs(q: int, d: int, a_param: Any, zero: Any, one: Any) -> list:
    if a_param == 0:
        coeffs = [zero] * q**d
        for i in range(d + 1):
            coeffs[q**i - 1] = one
        return coeffs
    coeffs = [zero] * (q**d + 1)
    for i in range(d + 1):
        coeffs[q**i] = one
    coeffs[0] = a_param
    return coeffs


def gen_type2(p: int, r: int, d: int, a_param: int) -> AdditiveMember:
    """f_0 = X^{q^d-1} + ... + X^{q-1} + 1 or f_a = X^{q^d} + ... + X^q + X + a; n = q^{d+1} - 1."""
    if r < 1 or d < 1:
        raise UsageError("Type 2 needs r >= 1 and d >= 1")
    q = p**r
    if q**d > ADDITIVE_DEGREE_CAP:
        raise CapExceededError("Type 2 degree above cap")
    a_param %= p
    f = FpPoly(p, _type2_coeffs(q, d, a_param, 0, 1))
    if f.degree < 2:
        raise DomainError("Type 2 with these parameters has ell = 0")
    member = _finish("T2", f, q ** (d + 1) - 1, {"r": r, "q": q, "d": d, "a": a_param})
    if member.beta != type2_closed_form_beta(q, d, a_param):
        raise VerificationError("Type 2 beta disagrees with its closed form")
    return member


def _ext_poly_mul(a: list[ExtElem], b: list[ExtElem]) -> list[ExtElem]:
    zero = a[0].field.zero
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def gen_type3(member: AdditiveMember) -> AdditiveMember:
    """Inverse of a Type 1 or Type 2 member, built from the family identity."""
    p, n, f = member.p, member.n, member.f
    if member.family == "T1":
        q = member.params["q"]
        g = FpPoly.x(p) * f ** (q - 1) - 1
    elif member.family == "T2":
        q, d, a_param = member.params["q"], member.params["d"], member.params["a"]
        fq = ext_field_make(p, member.params["r"])
        prod = [fq.one]
        for b in fq.elements():
            if b == fq(a_param):
                continue
            prod = _ext_poly_mul(prod, _type2_coeffs(q, d, b, fq.zero, fq.one))
        if not all(c.in_prime_field() for c in prod):
            raise VerificationError("Type 2 inverse left the prime field")
        g = FpPoly(p, [c.rep[0] for c in prod])
    else:
        raise UsageError("Type 3 is defined for T1 and T2 members only")
    inv, beta_g = invert_qsp(f, n)
    if inv != g:
        raise VerificationError(f"family inverse {g} differs from (X^n-1)/f = {inv}")
    return AdditiveMember("T3", p, n, g, beta_g, {**member.params, "of": member.family})


def invert_member(member: AdditiveMember) -> AdditiveMember:
    """Generic inverse, usable on any member (including Type 3 itself)."""
    g, beta_g = invert_qsp(member.f, member.n)
    return AdditiveMember("T3", member.p, member.n, g, beta_g, dict(member.params))


# ---------------------------------------------------------------- multiplicative


@dataclass(frozen=True)
class MultiplicativeQsp:
    """X^{p^{n'}} - X^a over F_{p^n}, together with the modulus r that defines a."""

    family: int
    p: int
    n: int
    n_prime: int
    r: int
    a: int
    params: dict[str, int] = field(default_factory=dict)

    @property
    def root_count(self) -> int:
        return self.p**self.n_prime - self.a + 1

    @property
    def beta(self) -> float:
        return self.n * math.log(self.a) / (self.n_prime**2 * math.log(self.p))

    @property
    def root_ratio(self) -> float:
        """root_count / p^{n'}; near 1 only when the family's size hypothesis holds."""
        return self.root_count / self.p**self.n_prime

    def poly(self) -> FpPoly:
        """X^{p^{n'}} - X^a as a polynomial over F_p."""
        coeffs = [0] * (self.p**self.n_prime + 1)
        coeffs[-1] = 1
        coeffs[self.a] = -1
        return FpPoly(self.p, coeffs)

    def to_json(self) -> dict[str, Any]:
        return {
            "family": f"M{self.family}",
            "p": self.p,
            "n": self.n,
            "n_prime": self.n_prime,
            "r": self.r,
            "a": self.a,
            "root_count": self.root_count,
            "root_ratio": self.root_ratio,
            "beta": self.beta,
            "params": self.params,
        }


def _family_params(family: int, params: dict[str, int]) -> tuple[int, int, int, int, int]:
    if family == 1:
        p, i, k = params["p"], params["i"], params["k"]
        if not is_prime(p) or k < 2 or i < 1:
            raise UsageError("family 1 needs p prime, k >= 2, i >= 1")
        n, n_prime = 2 * i * k, i * (2 * k - 1)
        r = (p**n - 1) // (p ** (2 * i) - 1)
        closed = (p ** (i * (2 * k - 1)) + 1) // (p**i + 1)
        return p, n, n_prime, r, closed
    if family == 2:
        k, n = params["k"], params["n"]
        if k < 2 or n < 1:
            raise UsageError("family 2 needs k >= 2, n >= 1")
        p = k**n + k - 1
        if not is_prime(p):
            note = " (k^2-k+1 divides k^n+k-1 when n = 5 mod 6)" if n % 6 == 5 else ""
            raise DomainError(f"k^n+k-1 = {p} is not prime{note}")
        return p, n, 1, (p - k) // (k - 1), k
    if family == 3:
        k, n = params["k"], params["n"]
        if k < 2 or n < 3:
            raise UsageError("family 3 needs k > 1, n > 2")
        sign = (-1) ** n
        p = k**n - k - sign
        if not is_prime(p):
            note = " (k^2-k+1 divides k^n-k+1 when n = 2 mod 6)" if n % 6 == 2 else ""
            raise DomainError(f"k^n-k-(-1)^n = {p} is not prime{note}")
        num = (p**n - 1) * (k - sign)
        den = (k**n - k) * (k**n - sign)
        if num % den:
            raise VerificationError("family 3 modulus r is not an integer")
        if n % 2 == 0:
            closed_num, closed_den = p ** (n - 1) + 1, k**n - k
        else:
            closed_num, closed_den = p ** (n - 1) * k + 1, k**n + 1
        if closed_num % closed_den:
            raise VerificationError("family 3 closed form for a is not an integer")
        return p, n, n - 1, num // den, closed_num // closed_den
    raise UsageError(f"unknown multiplicative family {family}")


def gen_mult(family: int, **params: int) -> MultiplicativeQsp:
    """Build and verify a multiplicative QSP from family parameters."""
    p, n, n_prime, r, closed_a = _family_params(family, params)
    if (p**n - 1) % r:
        raise VerificationError("r does not divide p^n - 1")
    a = pow(p, n_prime, r)
    if a != closed_a:
        raise DomainError(f"a = p^n' mod r = {a} differs from the closed form {closed_a}; size hypothesis fails")
    if a < 2:
        raise DomainError("a < 2 gives beta <= 0")
    if (p**n - 1) % (p**n_prime - a):
        raise VerificationError("p^n' - a does not divide p^n - 1")
    if family == 1 and p**n_prime - a != (p**n - 1) // (p ** params["i"] + 1):
        raise VerificationError("family 1 identity p^n' - a = (p^{2ik}-1)/(p^i+1) fails")
    m = MultiplicativeQsp(family, p, n, n_prime, r, a, dict(params))
    # beta <= 1 iff a^n <= p^{n'^2}, decided in exact integers.
    if a**n > p ** (n_prime**2):
        raise DomainError(f"beta = {m.beta:.6f} > 1 for these parameters")
    return m


def mult_root_count(m: MultiplicativeQsp, *, cap: int = MULT_ROOT_CHECK_CAP) -> int:
    """Distinct roots of X^{p^{n'}} - X^a in F_{p^n} via gcd with X^{p^n} - X."""
    if m.p**m.n_prime > cap:
        raise CapExceededError(f"degree p^n' = {m.p ** m.n_prime} above the gcd cap {cap}")
    return distinct_roots_in_extension(m.poly(), m.n)


# ---------------------------------------------------------------- Mersenne


def _mersenne_n(k: int) -> int:
    n = 2**k - 1
    if not is_prime(n):
        raise DomainError(f"2^{k}-1 = {n} is not a Mersenne prime")
    return n


def mersenne_divisor_count(k: int, n_prime: int) -> int:
    """N(k, n') = C(floor(n/k), floor(n'/k)) if n' mod k in {0, 1}, else 0."""
    n = _mersenne_n(k)
    if not 0 <= n_prime <= n:
        raise UsageError("need 0 <= n' <= n")
    if n_prime % k in (0, 1):
        return comb(n // k, n_prime // k)
    return 0


def mersenne_divisor_table(k: int) -> dict[int, int]:
    n = _mersenne_n(k)
    return {m: mersenne_divisor_count(k, m) for m in range(n + 1)}


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _bits_to_poly(x: int) -> FpPoly:
    return FpPoly(2, [(x >> i) & 1 for i in range(x.bit_length())])


def mersenne_factors(k: int) -> list[FpPoly]:
    """X - 1 followed by the (n-1)/k irreducible degree-k factors of X^n - 1 over F_2."""
    n = _mersenne_n(k)
    factors = [FpPoly(2, [1, 1])]
    for tail in range(2**k):
        cand = FpPoly(2, [(tail >> i) & 1 for i in range(k)] + [1])
        if cand[0] and is_irreducible(cand):
            factors.append(cand)
    if len(factors) - 1 != (n - 1) // k:
        raise VerificationError("unexpected number of irreducible factors")
    return factors


def mersenne_divisors(k: int, n_prime: int | None = None, *, cap: int = 1 << 20) -> list[FpPoly]:
    """All monic divisors of X^{2^k-1} - 1 over F_2 (of degree n' if given)."""
    factors = mersenne_factors(k)
    m = len(factors)
    if n_prime is None and 2**m > cap:
        raise CapExceededError(f"2^{m} subsets exceed the cap")
    if n_prime is not None and comb(m - 1, n_prime // k) > cap:
        raise CapExceededError("subset count exceeds the cap")
    bits = [sum(c << i for i, c in enumerate(f.coeffs)) for f in factors]
    degs = [f.degree for f in factors]
    out = []
    # Products over subsets, reusing the product without the lowest set bit.
    prods = [1] * (2**m) if n_prime is None or 2**m <= cap else None
    if prods is not None:
        deg = [0] * (2**m)
        for mask in range(1, 2**m):
            low = (mask & -mask).bit_length() - 1
            rest = mask & (mask - 1)
            prods[mask] = _clmul(prods[rest], bits[low])
            deg[mask] = deg[rest] + degs[low]
        for mask in range(2**m):
            if n_prime is None or deg[mask] == n_prime:
                out.append(prods[mask])
    else:
        from itertools import combinations

        base = n_prime % k
        for with_one in (0, 1) if base in (0, 1) else ():
            chosen = n_prime // k
            if with_one != base:
                continue
            for combo in combinations(range(1, m), chosen):
                x = bits[0] if with_one else 1
                for idx in combo:
                    x = _clmul(x, bits[idx])
                out.append(x)
    return sorted((_bits_to_poly(x) for x in out), key=lambda f: (f.degree, f.coeffs[::-1]))


def sparsity(f: FpPoly) -> int:
    """deg(f - X^{deg f}); -1 if f is a monomial."""
    return max((i for i in range(f.degree) if f[i]), default=-1)


def mersenne_sparse_enumerate(k: int, ell_max: int, n_prime: int | None = None) -> list[FpPoly]:
    """Divisors X^{n'} - lambda of X^n - 1, 1 <= n' < n, with 1 <= deg lambda <= ell_max."""
    if k > 7:
        raise CapExceededError("Mersenne enumeration is capped at k <= 7")
    n = _mersenne_n(k)
    return [
        f
        for f in mersenne_divisors(k, n_prime)
        if 1 <= f.degree < n and 1 <= sparsity(f) <= ell_max
    ]


def heuristic_density(n: int, n_prime: int, k: int, ell: int) -> tuple[float, bool]:
    """(N(k,n') 2^{ell-n'}, ell > n' - (n'/k) log2(n/n')): count and existence predicted
    under the assumption that divisors are as sparse as random polynomials."""
    if n != 2**k - 1:
        raise UsageError("heuristic frame needs n = 2^k - 1")
    count = mersenne_divisor_count(k, n_prime) * 2.0 ** (ell - n_prime)
    exists = ell > n_prime - (n_prime / k) * math.log2(n / n_prime)
    return count, exists


def sparse_divisor_counts(k: int, n_prime: int) -> dict[int, int]:
    """Exact number of degree-n' divisors with deg lambda <= ell, for each ell."""
    n = _mersenne_n(k)
    divs = [f for f in mersenne_divisors(k, n_prime) if f.degree < n]
    return {ell: sum(1 for f in divs if sparsity(f) <= ell) for ell in range(n_prime)}
