"""Linearized quasi-subfield polynomials: quality, splitting tests, bounds and search.

A monic f = X^{n'} + c_{n'-1}X^{n'-1} + ... + c_0 over F_p linearizes to
L_f = sum c_i X^{p^i}.  Writing L = X^{p^{n'}} - lambda(X), the coefficients
of lambda are a_i = -c_i and ell is the largest index with a_i != 0.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .algebra import (
    DEFAULT_FIELD_CAP,
    ExtElem,
    ExtField,
    FpPoly,
    Matrix,
    PrimeField,
    companion,
    ext_field_make,
    format_poly,
    poly_gcd,
    rank_mod_p,
    x_power_order,
)
from .errors import CapExceededError, DomainError, UsageError

THREE_QUARTERS = Fraction(3, 4)
GCD_ORACLE_DEGREE_CAP = 256
INVERSE_DISPLAY_CAP = 64

Coeff = int | ExtElem


@dataclass(frozen=True)
class LinearizedQsp:
    """X^{p^{n'}} - (a_ell X^{p^ell} + ... + a_0 X) over F_{p^n}.

    ``lam`` holds a_0..a_ell, either as residues mod p or as elements of
    F_{p^n}; trailing zeros are dropped on construction.
    """

    p: int
    n: int
    n_prime: int
    lam: tuple[Coeff, ...]

    def __post_init__(self):
        if self.n < 1 or self.n_prime < 1:
            raise UsageError("n and n' must be positive")
        lam = [c % self.p if isinstance(c, int) else c for c in self.lam]
        while lam and not lam[-1]:
            lam.pop()
        if len(lam) > self.n_prime:
            raise UsageError("lambda must have degree below p^{n'}")
        object.__setattr__(self, "lam", tuple(lam))

    @property
    def ell(self) -> int:
        """log_p deg lambda; -1 when lambda is zero."""
        return len(self.lam) - 1

    @property
    def field(self) -> ExtField | None:
        return next((c.field for c in self.lam if isinstance(c, ExtElem)), None)

    @property
    def in_prime_subfield(self) -> bool:
        return all(isinstance(c, int) or c.in_prime_field() for c in self.lam)

    def prime_lam(self) -> list[int]:
        if not self.in_prime_subfield:
            raise DomainError("coefficients are not in the prime subfield")
        return [c if isinstance(c, int) else c.rep[0] for c in self.lam]

    @property
    def a0_nonzero(self) -> bool:
        return bool(self.lam) and bool(self.lam[0])

    def beta(self) -> Fraction:
        return beta(self)

    def linearized_poly(self) -> FpPoly:
        """L as an ordinary polynomial of degree p^{n'} (prime-subfield coefficients only)."""
        coeffs = [0] * (self.p**self.n_prime + 1)
        coeffs[-1] = 1
        for i, a in enumerate(self.prime_lam()):
            coeffs[self.p**i] = (coeffs[self.p**i] - a) % self.p
        return FpPoly(self.p, coeffs)

    def exponents(self) -> list[int]:
        """Exponents of the nonzero monomials of L, descending."""
        return [self.p**self.n_prime] + [self.p**i for i in range(self.ell, -1, -1) if self.lam[i]]

    def __str__(self) -> str:
        if self.in_prime_subfield:
            return _linear_text(delinearize(self))
        return f"L(n'={self.n_prime}, ell={self.ell}) over F_{self.p}^{self.n}"


def _linear_text(f: FpPoly) -> str:
    parts = []
    for i in range(f.degree, -1, -1):
        c = f[i]
        if not c:
            continue
        c = c - f.p if c > f.p // 2 else c
        mono = "X" if i == 0 else f"X^{f.p ** i}"
        body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+") + body)
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def beta(q: LinearizedQsp) -> Fraction:
    """Exact quality ell*n/n'^2."""
    if q.ell < 1:
        raise DomainError("subfield polynomial (ell = 0), out of scope")
    return Fraction(q.ell * q.n, q.n_prime**2)


def beta_of(n: int, n_prime: int, ell: int) -> Fraction:
    if ell < 1:
        raise DomainError("subfield polynomial (ell = 0), out of scope")
    return Fraction(ell * n, n_prime**2)


def linearize(f: FpPoly | Sequence[ExtElem], n: int) -> LinearizedQsp:
    """L_f over F_{p^n} for a monic f of degree n' >= 1."""
    if isinstance(f, FpPoly):
        if f.degree < 1 or not f.is_monic:
            raise UsageError(f"linearize needs a monic polynomial of degree >= 1, got {f}")
        return LinearizedQsp(f.p, n, f.degree, tuple((-c) % f.p for c in f.coeffs[:-1]))
    coeffs = list(f)
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise UsageError("linearize needs a monic coefficient vector of degree >= 1")
    fld = coeffs[-1].field
    if fld.n != n:
        raise UsageError(f"coefficients live in F_{fld.p}^{fld.n}, not F_{fld.p}^{n}")
    return LinearizedQsp(fld.p, n, len(coeffs) - 1, tuple(-c for c in coeffs[:-1]))


def delinearize(q: LinearizedQsp) -> FpPoly | list[ExtElem]:
    """Inverse of :func:`linearize`."""
    if q.field is None:
        c = [(-a) % q.p for a in q.lam] + [0] * (q.n_prime - len(q.lam)) + [1]
        return FpPoly(q.p, c)
    fld = q.field
    c = [-(fld(a)) for a in q.lam] + [fld.zero] * (q.n_prime - len(q.lam)) + [fld.one]
    return c


# ---------------------------------------------------------------- splitting


def _check_f0(f: FpPoly) -> None:
    if f.degree < 1:
        raise UsageError("need deg f >= 1")
    if f[0] == 0:
        raise DomainError("f(0) = 0: zero is a repeated root of L_f")


def split_test_div(f: FpPoly, n: int) -> bool:
    """True iff f divides X^n - 1, i.e. L_f splits completely over F_{p^n}."""
    from .algebra import powmod

    _check_f0(f)
    return powmod(FpPoly.x(f.p), n, f) == FpPoly(f.p, [1]) % f


def split_test_div_linearized(q: LinearizedQsp) -> bool:
    """True iff L divides X^{p^n} - X in F_{p^n}[X], for any coefficient field.

    X^{p^j} mod L stays linearized, so the remainder is carried as its n'
    coefficients: raising to the p-th power twists them by Frobenius and
    shifts them up one slot, and the overflow X^{p^{n'}} is replaced by lambda.
    """
    if not q.a0_nonzero:
        raise DomainError("a_0 = 0: zero is a repeated root of L")
    fld = _coeff_field(q)
    lam = [fld(a) if isinstance(a, int) else a for a in q.lam]
    lam += [fld.zero] * (q.n_prime - len(lam))
    # X^p mod L; for n' = 1 it already overflows into lambda.
    rem = [fld.zero] * q.n_prime
    if q.n_prime == 1:
        rem[0] = lam[0]
    else:
        rem[1] = fld.one
    for _ in range(q.n - 1):
        twisted = [fld.frob(c) for c in rem]
        top = twisted[-1]
        rem = [fld.zero] + twisted[:-1]
        if top:
            rem = [fld.add(r, fld.mul(top, a)) for r, a in zip(rem, lam)]
    return rem == [fld.one] + [fld.zero] * (q.n_prime - 1)


def _coeff_field(q: LinearizedQsp) -> PrimeField | ExtField:
    return q.field if q.field is not None else PrimeField(q.p)


def companion_of(q: LinearizedQsp) -> Matrix:
    """Companion matrix C_L whose last column holds a_0..a_{n'-1}."""
    fld = _coeff_field(q)
    lam = list(q.lam) + [fld.zero] * (q.n_prime - len(q.lam))
    return companion([fld.neg(fld(a) if isinstance(a, int) else a) for a in lam], fld)


def frobenius_twisted_product(q: LinearizedQsp) -> Matrix:
    """A_L = C_L * C_L^sigma * ... * C_L^{sigma^{n-1}} with sigma the p-Frobenius."""
    c = companion_of(q)
    acc = c
    twisted = c
    for _ in range(1, q.n):
        twisted = twisted.frobenius(1)
        acc = acc * twisted
    return acc


def split_test_companion(q: LinearizedQsp) -> int:
    """Number of roots of L in F_{p^n}, as p^{n' - rank(A_L - I)}."""
    if not q.a0_nonzero:
        raise DomainError("a_0 = 0: zero is a repeated root of L")
    a = frobenius_twisted_product(q)
    n1 = q.n_prime - (a - Matrix.identity(a.field, a.dim)).rank()
    return q.p**n1


def _x_pow_p_tower(m: FpPoly, steps: int) -> FpPoly:
    """X^{p^steps} mod m for m in F_p[X], using h^p = h(X^p) over F_p."""
    h = FpPoly.x(m.p) % m
    for _ in range(steps):
        h = h.compose_xk(m.p) % m
    return h


def distinct_roots_in_extension(f: FpPoly, n: int) -> int:
    """deg gcd(f, X^{p^n} - X): the number of distinct roots of f in F_{p^n}."""
    if f.is_zero:
        raise DomainError("the zero polynomial has every element as a root")
    h = _x_pow_p_tower(f, n)
    return poly_gcd(f, h - FpPoly.x(f.p)).degree


def _kernel_root_count(q: LinearizedQsp, cap: int) -> int:
    """p^{dim ker L} with L viewed as an F_p-linear map on F_{p^n}."""
    fld = q.field if q.field is not None else ext_field_make(q.p, q.n, cap=cap)
    lam = [fld(a) for a in q.lam]
    rows = []
    for j in range(q.n):
        x = fld([0] * j + [1])
        pows = [x]
        for _ in range(q.n_prime):
            pows.append(pows[-1].frobenius(1))
        val = pows[-1]
        for a, xp in zip(lam, pows):
            if a:
                val = val - a * xp
        rows.append(list(val.rep))
    return q.p ** (q.n - rank_mod_p(rows, q.p))


def root_count_oracle(q: LinearizedQsp, *, cap: int = DEFAULT_FIELD_CAP) -> int:
    """Exact number of distinct roots of L in F_{p^n}, independent of the companion test.

    Uses deg gcd(L, X^{p^n} - X) in F_p[X] when the coefficients lie in F_p
    and deg L is at most ``GCD_ORACLE_DEGREE_CAP``; otherwise counts the
    kernel of L acting F_p-linearly on F_{p^n}.
    """
    return root_count_with_route(q, cap=cap)[0]


def root_count_with_route(q: LinearizedQsp, *, cap: int = DEFAULT_FIELD_CAP) -> tuple[int, str]:
    if q.in_prime_subfield and q.p**q.n_prime <= GCD_ORACLE_DEGREE_CAP:
        return distinct_roots_in_extension(q.linearized_poly(), q.n), "gcd"
    if q.field is None and q.p**q.n > cap:
        raise CapExceededError(f"root count over F_{q.p}^{q.n} exceeds the cap")
    return _kernel_root_count(q, cap), "kernel"


def is_quasi_subfield(q: LinearizedQsp, min_root_fraction: float = 1.0) -> bool:
    """Near-split acceptance: at least ``min_root_fraction * p^{n'}`` roots (default exact)."""
    if not 0 < min_root_fraction <= 1:
        raise UsageError("min_root_fraction must lie in (0, 1]")
    return root_count_oracle(q) >= min_root_fraction * q.p**q.n_prime


# ---------------------------------------------------------------- bounds


def lemma_mc_check(n: int, n_prime: int, ell: int) -> bool:
    """Necessary condition floor(n/n')*ell + (n mod n') >= n' for complete splitting."""
    if n_prime < 1 or n < 0 or ell < 0:
        raise UsageError("need n' >= 1 and n, ell >= 0")
    return (n // n_prime) * ell + n % n_prime >= n_prime


def min_n(n_prime: int, ell: int) -> int:
    """Smallest extension degree allowed by the lower bound n' + (n'-ell)*floor((n'-1)/ell)."""
    if not 1 <= ell < n_prime:
        raise DomainError(f"need 1 <= ell < n', got ell={ell}, n'={n_prime}")
    return n_prime + (n_prime - ell) * ((n_prime - 1) // ell)


def low_bound_check(n: int, n_prime: int, ell: int) -> bool:
    return n >= min_n(n_prime, ell)


def theorem_beta_bound(n: int, n_prime: int, ell: int) -> bool:
    """True iff ell*n/n'^2 >= 3/4."""
    return beta_of(n, n_prime, ell) >= THREE_QUARTERS


# ---------------------------------------------------------------- trinomials


@dataclass
class TrinomialReport:
    p: int
    k: int
    d: int
    n_tilde: int
    in_classified_range: bool
    splitting: list[tuple[ExtElem, ExtElem]] = field(default_factory=list)
    violations: list[tuple[ExtElem, ExtElem]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.splitting)

    @property
    def consistent(self) -> bool:
        """Every splitting trinomial satisfies the second bullet (only meaningful in range)."""
        return not self.violations


def _is_power_of(x: int, p: int) -> bool:
    while x > 1 and x % p == 0:
        x //= p
    return x == 1


def trinomial_bullet2(a: ExtElem, b: ExtElem, q: int, d: int, n_tilde: int) -> bool:
    """Second classification bullet for X^{q^d} - bX^q - aX with b != 0."""
    p = a.field.p
    if n_tilde != (d - 1) * d + 1 or not _is_power_of(d - 1, p):
        return False
    norm_exp = sum(q**i for i in range((d - 1) * d + 1))
    if a**norm_exp != a.field((-1) ** (d - 1)):
        return False
    e1 = sum(q ** (i * d) for i in range(d))
    return b == -(a ** (q * e1))


def trinomial_classification_check(
    p: int, k: int, d: int, n_tilde: int, *, cap: int = 2**16
) -> TrinomialReport:
    """Enumerate X^{q^d} - bX^q - aX, b != 0, over F_{q^n~} with q = p^k; keep the split ones."""
    if d < 2 or k < 1 or n_tilde < 1:
        raise UsageError("need d >= 2, k >= 1, n~ >= 1")
    n = k * n_tilde
    if p**n > cap:
        raise CapExceededError(f"F_{p}^{n} too large to enumerate")
    fld = ext_field_make(p, n, cap=max(cap, p**n))
    q = p**k
    # Each element x contributes images x^{q^d}, x^q, x under the map.
    basis = [fld([0] * j + [1]) for j in range(n)]
    hi = [x.frobenius(k * d) for x in basis]
    mid = [x.frobenius(k) for x in basis]
    elems = list(fld.elements())
    report = TrinomialReport(p, k, d, n_tilde, n_tilde <= (d - 1) * d + 1)
    target = p ** (k * d)
    for b in elems[1:]:
        bm = [hv - b * m for hv, m in zip(hi, mid)]
        for a in elems:
            rows = [list((v - a * x).rep) for v, x in zip(bm, basis)]
            if p ** (n - rank_mod_p(rows, p)) == target:
                report.splitting.append((a, b))
                if report.in_classified_range and not trinomial_bullet2(a, b, q, d, n_tilde):
                    report.violations.append((a, b))
    return report


# ---------------------------------------------------------------- inversion and transforms


def invert_qsp(f: FpPoly, n: int) -> tuple[FpPoly, Fraction]:
    """(g, beta_g) with g = (X^n - 1)/f and beta_g = 1 - (n'/(n-n'))^2 (1 - beta_f)."""
    if f.degree >= n:
        raise DomainError("need deg f < n")
    if not split_test_div(f, n):
        raise DomainError(f"{f} does not divide X^{n}-1")
    xn1 = FpPoly.monomial(f.p, n) - 1
    g, r = divmod(xn1, f)
    assert r.is_zero
    npr = f.degree
    # ell = 0 is allowed here so that X - 1 inverts to the all-ones family.
    beta_f = Fraction(max(linearize(f.monic(), n).ell, 0) * n, npr**2)
    beta_g = 1 - Fraction(npr, n - npr) ** 2 * (1 - beta_f)
    if not split_test_div(g, n):
        raise DomainError("inverse failed to split")
    return g, beta_g


def substitute_xk(f: FpPoly, k: int) -> FpPoly:
    """f(X^k): splits over F_{p^{kn}} iff f splits over F_{p^n}."""
    if k < 1:
        raise UsageError("k must be >= 1")
    return f.compose_xk(k)


def scale_alpha(f: FpPoly, alpha: int, n: int) -> FpPoly:
    """alpha^{-n'} f(alpha X) for alpha in F_p with alpha^n = 1."""
    p = f.p
    if alpha % p == 0 or pow(alpha, n, p) != 1:
        raise DomainError(f"alpha={alpha} does not satisfy alpha^{n} = 1 in F_{p}")
    inv = pow(alpha, -1, p)
    d = f.degree
    return FpPoly(p, [c * pow(alpha, i, p) * pow(inv, d, p) for i, c in enumerate(f.coeffs)])


def conjugate_gamma(q: LinearizedQsp, gamma: ExtElem) -> LinearizedQsp:
    """gamma^{-p^{n'}} L(gamma X): same splitting field, same beta."""
    if gamma.is_zero:
        raise DomainError("gamma must be nonzero")
    fld = gamma.field
    if fld.p != q.p or fld.n != q.n:
        raise UsageError("gamma must live in F_{p^n}")
    top = gamma.frobenius(q.n_prime).inv()
    new = []
    g_pow = gamma
    for a in q.lam:
        new.append(fld(a) * g_pow * top)
        g_pow = g_pow.frobenius(1)
    return LinearizedQsp(q.p, q.n, q.n_prime, tuple(new))


def canonical_representative(f: FpPoly, n: int) -> tuple[FpPoly, int]:
    """Strip a common substitution X -> X^d, d = gcd(support without 0, n)."""
    d = n
    for i in f.support():
        if i >= 1:
            d = gcd(d, i)
    if d <= 1:
        return f, n
    return FpPoly(f.p, f.coeffs[::d]), n // d


# ---------------------------------------------------------------- family matching


def _geometric_chain(q: int, top: int) -> list[int]:
    """p_0, p_1, ... with p_i = 1 + q + ... + q^i, up to and including the first >= top."""
    chain = [1]
    while chain[-1] < top:
        chain.append(chain[-1] * q + 1)
    return chain


def _prime_powers(p: int, limit: int) -> Iterable[tuple[int, int]]:
    r, q = 1, p
    while q <= limit:
        yield r, q
        r, q = r + 1, q * p


def _has_positive_ell(f: FpPoly) -> bool:
    return any(f[i] for i in range(1, f.degree))


def match_type1(f: FpPoly, n: int) -> tuple[int, int] | None:
    """(r, a) if f = X^{p_a} + ... + X^{p_0} + 1 with n = p_{a+1}, q = p^r, a >= 1."""
    if not _has_positive_ell(f) or any(c not in (0, 1) for c in f.coeffs):
        return None
    support = f.support()
    deg = f.degree
    if deg >= 2 and support == list(range(deg + 1)) and n == deg + 1:
        return 0, deg - 1
    for r, q in _prime_powers(f.p, deg):
        chain = _geometric_chain(q, deg)
        if chain[-1] == deg and len(chain) >= 2 and support == [0] + chain and n == chain[-1] * q + 1:
            return r, len(chain) - 1
    return None


def match_type2(f: FpPoly, n: int) -> tuple[int, int, int] | None:
    """(r, d, a) if f is f_a over F_p with q = p^r and n = q^{d+1} - 1."""
    p, deg = f.p, f.degree
    if not _has_positive_ell(f):
        return None
    for r, q in _prime_powers(p, deg + 1):
        d = 0
        while q ** (d + 1) <= deg + 1:
            d += 1
        for dd in (d, d - 1):
            if dd < 1 or n != q ** (dd + 1) - 1:
                continue
            if deg == q**dd - 1:
                exps = {q**i - 1 for i in range(1, dd + 1)} | {0}
                if set(f.support()) == exps and all(f[e] == 1 for e in exps):
                    return r, dd, 0
            if deg == q**dd:
                exps = {q**i for i in range(dd + 1)}
                a = f[0]
                if a and set(f.support()) - {0} == exps and all(f[e] == 1 for e in exps):
                    return r, dd, a
    return None


def classify_family(f: FpPoly, n: int, inverse: FpPoly | None = None) -> list[str]:
    """Structural family tags among T1, T1bis, T2, T3.

    T3 marks f as the inverse of a T1 or T2 member of smaller degree, which
    is how inverse pairs are listed in the published classification.
    """
    tags = []
    t1 = match_type1(f, n)
    if t1 is not None:
        tags.append("T1")
        if t1[0] == 0:
            tags.append("T1bis")
    if match_type2(f, n) is not None:
        tags.append("T2")
    if inverse is None and f.degree < n:
        inverse = (FpPoly.monomial(f.p, n) - 1) // f
    if inverse is not None and 1 <= inverse.degree < f.degree:
        if match_type1(inverse, n) is not None or match_type2(inverse, n) is not None:
            tags.append("T3")
    return tags


def table_columns(p: int, tags: Sequence[str]) -> tuple[bool, bool, bool]:
    """(T1, T2, T3) checkmark columns of the published table for a record's tags.

    Over F_2 the table also ticks T1 for every inverse-pair row; this
    reproduces that convention.
    """
    t1 = "T1" in tags or ("T3" in tags and p == 2)
    return t1, "T2" in tags, "T3" in tags


# ---------------------------------------------------------------- search


@dataclass(frozen=True)
class SearchRecord:
    """One equivalence-class representative found by the search."""

    p: int
    n: int
    f: FpPoly
    beta: Fraction
    tags: tuple[str, ...] = ()
    inverse: FpPoly | None = None

    @property
    def n_prime(self) -> int:
        return self.f.degree

    @property
    def ell(self) -> int:
        return max(i for i in range(self.n_prime) if self.f[i])

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "n_prime": self.n_prime,
            "f": list(self.f.coeffs),
            "beta_num": self.beta.numerator,
            "beta_den": self.beta.denominator,
            "tags": list(self.tags),
            "inverse": list(self.inverse.coeffs) if self.inverse is not None else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> SearchRecord:
        p = data["p"]
        inv = data.get("inverse")
        return cls(
            p=p,
            n=data["n"],
            f=FpPoly(p, data["f"]),
            beta=Fraction(data["beta_num"], data["beta_den"]),
            tags=tuple(data.get("tags", ())),
            inverse=FpPoly(p, inv) if inv is not None else None,
        )

    def csv_row(self) -> dict:
        t1, t2, t3 = table_columns(self.p, self.tags)
        return {
            "f": format_poly(self.f),
            "n": self.n,
            "beta": f"{float(self.beta):.2f}",
            "p": self.p,
            "T1": "x" if t1 else "",
            "T2": "x" if t2 else "",
            "T3": format_poly(self.inverse) if t3 and self.inverse is not None else "",
        }

    def sort_key(self) -> tuple:
        return (self.n_prime, self.f.coeffs[::-1], self.n)


def _coefficient_values(p: int, coeff_set: Iterable[int] | None) -> list[int]:
    if coeff_set is None:
        return list(range(p))
    return sorted({c % p for c in coeff_set})


def _scan_chunk(args: tuple[int, int, tuple[int, ...], int, int, Fraction]) -> list[tuple[tuple[int, ...], int]]:
    p, n_prime, values, start, stop, beta_max = args
    hits = []
    base = len(values)
    nonzero_a0 = [v for v in values if v]
    for idx in range(start, stop):
        # c_0 ranges over nonzero values; c_1..c_{n'-1} over all values.
        a0_idx, rest = divmod(idx, base ** (n_prime - 1))
        coeffs = [nonzero_a0[a0_idx]]
        for _ in range(n_prime - 1):
            rest, digit = divmod(rest, base)
            coeffs.append(values[digit])
        ell = max(i for i, c in enumerate(coeffs) if c)
        if ell < 1:
            continue
        bound = int(beta_max * n_prime * n_prime / ell)
        f = FpPoly._raw(p, coeffs + [1])
        k = x_power_order(f, bound)
        if k is not None:
            hits.append((tuple(coeffs), k))
    return hits


def search_representatives(
    p: int,
    n_prime_max: int,
    coeff_set: Iterable[int] | None = (0, 1, -1),
    beta_max: Fraction | int = 1,
    *,
    n_prime_min: int = 2,
    workers: int = 1,
    chunk: int = 4096,
) -> list[SearchRecord]:
    """All canonical representatives f with L_f splitting over F_{p^n}, beta <= beta_max.

    ``coeff_set=None`` means every residue.  The order k of X modulo f is the
    minimal splitting degree; it is searched up to floor(beta_max*n'^2/ell).
    Output is sorted and independent of ``workers``.
    """
    beta_max = Fraction(beta_max)
    values = _coefficient_values(p, coeff_set)
    if not any(values):
        return []
    tasks = []
    for n_prime in range(max(n_prime_min, 2), n_prime_max + 1):
        total = sum(1 for v in values if v) * len(values) ** (n_prime - 1)
        for start in range(0, total, chunk):
            tasks.append((p, n_prime, tuple(values), start, min(total, start + chunk), beta_max))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk, tasks))
    else:
        results = [_scan_chunk(t) for t in tasks]
    seen: dict[tuple[tuple[int, ...], int], SearchRecord] = {}
    for hits in results:
        for coeffs, k in hits:
            f = FpPoly(p, list(coeffs) + [1])
            g, m = canonical_representative(f, k)
            key = (g.coeffs, m)
            if key not in seen:
                seen[key] = make_record(g, m)
    return sorted(seen.values(), key=SearchRecord.sort_key)


def make_record(f: FpPoly, n: int) -> SearchRecord:
    """Verified record for f splitting (minimally) over F_{p^n}, with tags and inverse."""
    q = linearize(f, n)
    inverse = (FpPoly.monomial(f.p, n) - 1) // f if f.degree < n else None
    tags = tuple(classify_family(f, n, inverse))
    shown = inverse if inverse is not None and inverse.degree <= INVERSE_DISPLAY_CAP else None
    return SearchRecord(p=f.p, n=n, f=f, beta=q.beta(), tags=tags, inverse=shown)
