"""Index-calculus discrete logarithms on small curves with a QSP factor base.

Curves are short Weierstrass ``y^2 = x^3 + A x + B`` over F_{p^n} with
p >= 5.  The factor base consists of the curve points whose x-coordinate is a
root of a quasi-subfield polynomial; relations ``aP + bQ = P_1 + ... + P_m``
are found by brute force over the root set (with the third summation
polynomial for m = 2) and solved by Gaussian elimination modulo the prime
group order.  Baby-step giant-step serves as the baseline oracle.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, Sequence

from .algebra import ExtElem, ExtField, FpPoly, ext_field_make, format_poly, is_prime, prime_factors
from .errors import CapExceededError, DomainError, UsageError, VerificationError
from .families import MultiplicativeQsp, mult_root_count
from .qsp import LinearizedQsp, linearize, root_count_oracle

POINT_COUNT_CAP = 2**22
BSGS_CAP = 2**40
DIRECT_ENUM_CAP = 2**20
DEFAULT_C = 4.876


# ---------------------------------------------------------------- points and curves


@dataclass(frozen=True)
class CurvePoint:
    """Affine point, or the point at infinity when ``x`` is None."""

    x: Any = None
    y: Any = None

    @classmethod
    def infinity(cls) -> CurvePoint:
        return cls()

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def key(self) -> tuple[int, int]:
        """Sort key for points over an :class:`ExtField`; infinity first."""
        if self.is_infinity:
            return (-1, -1)
        return (self.x.to_int(), self.y.to_int())

    def to_json(self) -> Any:
        if self.is_infinity:
            return "O"
        return [self.x.to_int(), self.y.to_int()]


O = CurvePoint.infinity()


@dataclass(frozen=True, eq=False)
class Curve:
    """y^2 = x^3 + A x + B.  ``field`` may be None for curves over helper rings."""

    field: ExtField | None
    A: Any
    B: Any

    def __post_init__(self):
        if self.field is not None and self.field.p < 5:
            raise DomainError("short Weierstrass arithmetic needs characteristic >= 5")
        if not (4 * self.A**3 + 27 * self.B**2):
            raise DomainError("singular curve: 4A^3 + 27B^2 = 0")

    def rhs(self, x: Any) -> Any:
        return x * x * x + self.A * x + self.B

    def contains(self, pt: CurvePoint) -> bool:
        return pt.is_infinity or pt.y * pt.y == self.rhs(pt.x)

    def check(self, pt: CurvePoint) -> CurvePoint:
        if not self.contains(pt):
            raise DomainError(f"point {pt} is not on the curve")
        return pt

    def neg(self, pt: CurvePoint) -> CurvePoint:
        return pt if pt.is_infinity else CurvePoint(pt.x, -pt.y)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if not (P.y + Q.y):
                return O
            slope = (3 * P.x * P.x + self.A) / (2 * P.y)
        else:
            slope = (Q.y - P.y) / (Q.x - P.x)
        x3 = slope * slope - P.x - Q.x
        return CurvePoint(x3, slope * (P.x - x3) - P.y)

    def double(self, P: CurvePoint) -> CurvePoint:
        return self.add(P, P)

    def sub(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        return self.add(P, self.neg(Q))

    def mul(self, k: int, P: CurvePoint) -> CurvePoint:
        if k < 0:
            return self.mul(-k, self.neg(P))
        acc, base = O, P
        while k:
            if k & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            k >>= 1
        return acc

    def sum(self, points: Iterable[CurvePoint]) -> CurvePoint:
        acc = O
        for pt in points:
            acc = self.add(acc, pt)
        return acc

    # the remaining methods need a concrete finite field

    def _field(self) -> ExtField:
        if self.field is None:
            raise UsageError("operation needs a curve over an ExtField")
        return self.field

    @cached_property
    def _sqrt_table(self) -> dict[tuple[int, ...], ExtElem]:
        fld = self._field()
        if fld.order > POINT_COUNT_CAP:
            raise CapExceededError(f"field order {fld.order} exceeds the point-count cap {POINT_COUNT_CAP}")
        table: dict[tuple[int, ...], ExtElem] = {}
        for y in fld.elements():
            table.setdefault((y * y).rep, y)
        return table

    def lift_x(self, x: ExtElem) -> list[CurvePoint]:
        """All points with the given x-coordinate, ordered by y."""
        root = self._sqrt_table.get(self.rhs(x).rep)
        if root is None:
            return []
        if not root:
            return [CurvePoint(x, root)]
        return sorted([CurvePoint(x, root), CurvePoint(x, -root)], key=CurvePoint.key)

    @cached_property
    def point_count(self) -> int:
        """|E| by an x-scan with the quadratic character."""
        fld = self._field()
        q = fld.order
        if q > POINT_COUNT_CAP:
            raise CapExceededError(f"point count needs p^n <= {POINT_COUNT_CAP}, got {q}")
        half = (q - 1) // 2
        total = 1
        for x in fld.elements():
            r = self.rhs(x)
            if not r:
                total += 1
            elif r**half == 1:
                total += 2
        assert (total - q - 1) ** 2 <= 4 * q, f"Hasse bound violated: |E|={total}, q={q}"
        return total

    @cached_property
    def order_factors(self) -> list[int]:
        return prime_factors(self.point_count)

    def points(self) -> Iterator[CurvePoint]:
        """Affine points in (x, y) order."""
        for x in self._field().elements():
            yield from self.lift_x(x)

    def random_point(self, rng: random.Random) -> CurvePoint:
        fld = self._field()
        while True:
            pts = self.lift_x(fld.random(rng))
            if pts:
                return pts[rng.randrange(len(pts))]

    def to_json(self) -> dict[str, Any]:
        fld = self._field()
        return {
            "p": fld.p,
            "n": fld.n,
            "modulus": format_poly(fld.modulus),
            "A": self.A.to_int(),
            "B": self.B.to_int(),
            "order": self.point_count,
        }


def find_prime_order_curve(fld: ExtField, *, start: int = 0) -> Curve:
    """First nonsingular (A, B), in base-p integer order from ``start``, with prime |E|."""
    q = fld.order
    for idx in range(start, q * q):
        a_int, b_int = divmod(idx, q)
        A, B = fld.from_int(a_int), fld.from_int(b_int)
        if not (4 * A**3 + 27 * B**2):
            continue
        curve = Curve(fld, A, B)
        if is_prime(curve.point_count):
            return curve
    raise DomainError(f"no prime-order curve over F_{fld.p}^{fld.n}")


# ---------------------------------------------------------------- multivariate polynomials


@dataclass(frozen=True)
class MPoly:
    """Sparse polynomial in ``nvars`` variables; terms map exponent tuples to coefficients."""

    nvars: int
    terms: dict[tuple[int, ...], Any]

    @classmethod
    def constant(cls, nvars: int, c: Any) -> MPoly:
        return cls(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int, one: Any) -> MPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): one})

    def _lift(self, other: MPoly | Any) -> MPoly:
        return other if isinstance(other, MPoly) else MPoly.constant(self.nvars, other)

    def __add__(self, other: MPoly | Any) -> MPoly:
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out[e] + c if e in out else c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: MPoly | Any) -> MPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> MPoly:
        return self._lift(other) - self

    def __mul__(self, other: MPoly | Any) -> MPoly:
        other = self._lift(other)
        out: dict[tuple[int, ...], Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return MPoly(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MPoly:
        if k < 0:
            raise UsageError("negative power of a polynomial")
        one = next(iter(self.terms.values())) ** 0 if self.terms else 1
        acc = MPoly.constant(self.nvars, one)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __call__(self, *values: Any) -> Any:
        if len(values) != self.nvars:
            raise UsageError(f"expected {self.nvars} values, got {len(values)}")
        acc = None
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = t * v**k
            acc = t if acc is None else acc + t
        return acc if acc is not None else 0

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def permute(self, perm: Sequence[int]) -> MPoly:
        """Rename variable i to variable perm[i]."""
        out = {}
        for e, c in self.terms.items():
            new = [0] * self.nvars
            for i, k in enumerate(e):
                new[perm[i]] = k
            out[tuple(new)] = c
        return MPoly(self.nvars, out)

    def specialize(self, fixed: dict[int, Any]) -> list[Any]:
        """Univariate coefficient list in the single free variable after fixing the others."""
        free = [i for i in range(self.nvars) if i not in fixed]
        if len(free) != 1:
            raise UsageError("specialize must leave exactly one free variable")
        (j,) = free
        coeffs: list[Any] = [0] * (self.degree_in(j) + 1)
        for e, c in self.terms.items():
            t = c
            for i, v in fixed.items():
                if e[i]:
                    t = t * v ** e[i]
            coeffs[e[j]] = coeffs[e[j]] + t
        return coeffs


def eval_univariate(coeffs: Sequence[Any], x: Any) -> Any:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def semaev_s3(curve: Curve) -> MPoly:
    """Third summation polynomial of a short Weierstrass curve."""
    if curve.field is not None and curve.field.p < 5:
        raise DomainError("summation polynomial closed form needs characteristic >= 5")
    one = curve.A**0
    x1, x2, x3 = (MPoly.var(3, i, one) for i in range(3))
    A, B = curve.A, curve.B
    return (
        (x1 - x2) ** 2 * x3**2
        - 2 * ((x1 + x2) * (x1 * x2 + A) + 2 * B) * x3
        + ((x1 * x2 - A) ** 2 - 4 * B * (x1 + x2))
    )


# ---------------------------------------------------------------- lift-sum oracle


@dataclass(frozen=True)
class QuadElem:
    """a + b*sqrt(delta) in the quadratic extension of a finite field by a non-square."""

    a: Any
    b: Any
    delta: Any

    def _wrap(self, other: Any) -> QuadElem:
        if isinstance(other, QuadElem):
            return other
        return QuadElem(self.a * 0 + other, self.a * 0, self.delta)

    def __add__(self, other: Any) -> QuadElem:
        o = self._wrap(other)
        return QuadElem(self.a + o.a, self.b + o.b, self.delta)

    __radd__ = __add__

    def __neg__(self) -> QuadElem:
        return QuadElem(-self.a, -self.b, self.delta)

    def __sub__(self, other: Any) -> QuadElem:
        return self + (-self._wrap(other))

    def __rsub__(self, other: Any) -> QuadElem:
        return self._wrap(other) - self

    def __mul__(self, other: Any) -> QuadElem:
        o = self._wrap(other)
        return QuadElem(self.a * o.a + self.delta * self.b * o.b, self.a * o.b + self.b * o.a, self.delta)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QuadElem:
        acc = self._wrap(1)
        for _ in range(k):
            acc = acc * self
        return acc

    def inv(self) -> QuadElem:
        norm = self.a * self.a - self.delta * self.b * self.b
        if not norm:
            raise DomainError("inverse of zero")
        ninv = norm.inv()
        return QuadElem(self.a * ninv, -self.b * ninv, self.delta)

    def __truediv__(self, other: Any) -> QuadElem:
        return self * self._wrap(other).inv()

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadElem):
            other = self._wrap(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))


def lift_sum_table(curve: Curve) -> dict[tuple[int, int], set[int]]:
    """For every (x1, x2) in F_q^2, the x-coordinates in F_q of P1 +- P2 over all lifts.

    Lifts are taken in the quadratic extension of F_q, where every x has one.
    ``x3`` satisfies the lift-sum condition for (x1, x2) iff it is in the set.
    """
    fld = curve._field()
    squares = curve._sqrt_table
    delta = next(x for x in fld.elements() if x and x.rep not in squares)
    zero = fld.zero
    qcurve = Curve(None, QuadElem(curve.A, zero, delta), QuadElem(curve.B, zero, delta))

    def lift(x: ExtElem) -> CurvePoint:
        r = curve.rhs(x)
        root = squares.get(r.rep)
        if root is not None:
            y = QuadElem(root, zero, delta)
        else:
            y = QuadElem(zero, squares[(r / delta).rep], delta)
        return CurvePoint(QuadElem(x, zero, delta), y)

    elems = list(fld.elements())
    lifts = [lift(x) for x in elems]
    table: dict[tuple[int, int], set[int]] = {}
    for i, P1 in enumerate(lifts):
        for j, P2 in enumerate(lifts):
            xs = set()
            # The other lift of P1 only swaps the two sums up to sign.
            for T in (qcurve.add(P1, P2), qcurve.sub(P1, P2)):
                if not T.is_infinity and not T.x.b:
                    xs.add(T.x.a.to_int())
            table[(i, j)] = xs
    return table


def validate_s3(curve: Curve) -> dict[str, int]:
    """Compare S_3 = 0 with the lift-sum condition on every x-triple."""
    s3 = semaev_s3(curve)
    fld = curve._field()
    elems = list(fld.elements())
    table = lift_sum_table(curve)
    mismatches = 0
    zeros = 0
    for i, x1 in enumerate(elems):
        for j, x2 in enumerate(elems):
            uni = s3.specialize({0: x1, 1: x2})
            expected = table[(i, j)]
            for k, x3 in enumerate(elems):
                vanishes = not eval_univariate(uni, x3)
                zeros += vanishes
                mismatches += vanishes != (k in expected)
    return {"triples": len(elems) ** 3, "zeros": zeros, "mismatches": mismatches}


# ---------------------------------------------------------------- phi map and factor base

Qsp = LinearizedQsp | MultiplicativeQsp


def lambda_terms(qsp: Qsp, fld: ExtField) -> list[tuple[int, ExtElem]]:
    """lambda(X) as (exponent, coefficient) pairs in F_{p^n}."""
    if isinstance(qsp, MultiplicativeQsp):
        return [(qsp.a, fld.one)]
    return [(qsp.p**i, fld(c) if isinstance(c, int) else c) for i, c in enumerate(qsp.lam) if c]


def lambda_eval(qsp: Qsp, x: ExtElem) -> ExtElem:
    acc = x.field.zero
    for e, c in lambda_terms(qsp, x.field):
        acc = acc + c * x**e
    return acc


def phi_map(poly: MPoly, qsp: Qsp, fld: ExtField) -> MPoly:
    """Raise coefficients to the p^{n'} and substitute x_i -> lambda(x_i)."""
    q_prime = qsp.p**qsp.n_prime
    terms = lambda_terms(qsp, fld)
    images = []
    for i in range(poly.nvars):
        img = MPoly(poly.nvars, {})
        for e, c in terms:
            ex = [0] * poly.nvars
            ex[i] = e
            img = img + MPoly(poly.nvars, {tuple(ex): c})
        images.append(img)
    power_cache: dict[tuple[int, int], MPoly] = {}

    def power(i: int, k: int) -> MPoly:
        if (i, k) not in power_cache:
            power_cache[(i, k)] = images[i] ** k
        return power_cache[(i, k)]

    out = MPoly(poly.nvars, {})
    for e, c in poly.terms.items():
        term = MPoly.constant(poly.nvars, c**q_prime)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def qsp_roots(qsp: Qsp, fld: ExtField) -> list[ExtElem]:
    """Roots of X^{p^{n'}} - lambda(X) in F_{p^n}, in integer order."""
    q_prime = qsp.p**qsp.n_prime
    return [x for x in fld.elements() if x**q_prime == lambda_eval(qsp, x)]


@dataclass(frozen=True, eq=False)
class FactorBase:
    qsp: Qsp
    curve: Curve
    V: tuple[ExtElem, ...]
    F: tuple[CurvePoint, ...]

    @cached_property
    def index(self) -> dict[CurvePoint, int]:
        return {pt: i for i, pt in enumerate(self.F)}

    @cached_property
    def by_x(self) -> dict[tuple[int, ...], list[int]]:
        out: dict[tuple[int, ...], list[int]] = {}
        for i, pt in enumerate(self.F):
            out.setdefault(pt.x.rep, []).append(i)
        return out

    @cached_property
    def s3(self) -> MPoly:
        return semaev_s3(self.curve)

    def x_multiplicities(self) -> dict[int, int]:
        """How many elements of V carry 0, 1 or 2 curve points."""
        hist = {0: 0, 1: 0, 2: 0}
        for x in self.V:
            hist[len(self.by_x.get(x.rep, []))] += 1
        return hist


def build_factor_base(curve: Curve, qsp: Qsp) -> FactorBase:
    fld = curve._field()
    if qsp.p != fld.p or qsp.n != fld.n:
        raise UsageError("the QSP and the curve live over different fields")
    V = qsp_roots(qsp, fld)
    expected = mult_root_count(qsp) if isinstance(qsp, MultiplicativeQsp) else root_count_oracle(qsp)
    if len(V) != expected:
        raise VerificationError(f"root enumeration found {len(V)} roots, the qsp module reports {expected}")
    F = [pt for x in V for pt in curve.lift_x(x)]
    fb = FactorBase(qsp, curve, tuple(V), tuple(F))
    assert all(curve.neg(pt) in fb.index for pt in F), "factor base must be closed under negation"
    return fb


# ---------------------------------------------------------------- decomposition


def decompose(R: CurvePoint, fb: FactorBase, m: int = 2, mode: str = "semaev") -> list[int] | None:
    """Indices i_1 <= ... <= i_m into F with F[i_1] + ... + F[i_m] = R, or None."""
    curve = fb.curve
    if mode == "semaev":
        if m != 2:
            raise UsageError("semaev mode supports m = 2 only")
        return _decompose_semaev(R, fb)
    if mode != "direct":
        raise UsageError(f"unknown decomposition mode {mode!r}")
    if m < 1:
        raise UsageError("m must be >= 1")
    if len(fb.F) ** m > DIRECT_ENUM_CAP:
        raise CapExceededError(f"|F|^m = {len(fb.F)}^{m} exceeds the enumeration cap {DIRECT_ENUM_CAP}")
    for combo in itertools.combinations_with_replacement(range(len(fb.F)), m):
        if curve.sum(fb.F[i] for i in combo) == R:
            return list(combo)
    return None


def _decompose_semaev(R: CurvePoint, fb: FactorBase) -> list[int] | None:
    curve = fb.curve
    if R.is_infinity:
        return sorted([0, fb.index[curve.neg(fb.F[0])]]) if fb.F else None
    xs = [x for x in fb.V if x.rep in fb.by_x]
    for x1 in xs:
        row = fb.s3.specialize({0: R.x, 1: x1})
        for x2 in xs:
            if eval_univariate(row, x2):
                continue
            # S_3 only sees x-coordinates; pick the signs that give R itself.
            for i in fb.by_x[x1.rep]:
                for j in fb.by_x[x2.rep]:
                    if curve.add(fb.F[i], fb.F[j]) == R:
                        return sorted([i, j])
    return None


# ---------------------------------------------------------------- relations and linear algebra


@dataclass(frozen=True)
class Relation:
    """a P + b Q = sum of F[i] over ``indices`` (with repetition)."""

    a: int
    b: int
    indices: tuple[int, ...]

    def to_json(self) -> dict[str, Any]:
        return {"a": self.a, "b": self.b, "indices": list(self.indices)}


def make_relation(a: int, b: int, indices: Sequence[int], P: CurvePoint, Q: CurvePoint, fb: FactorBase) -> Relation:
    """Build a relation, re-verifying it by point arithmetic."""
    curve = fb.curve
    lhs = curve.add(curve.mul(a, P), curve.mul(b, Q))
    if lhs != curve.sum(fb.F[i] for i in indices):
        raise VerificationError(f"relation a={a}, b={b}, indices={list(indices)} does not hold")
    return Relation(a, b, tuple(sorted(indices)))


@dataclass
class GatherStats:
    trials: int = 0
    successes: int = 0

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def gather_relations(
    P: CurvePoint,
    Q: CurvePoint,
    fb: FactorBase,
    *,
    m: int = 2,
    target: int | None = None,
    seed: int = 0,
    mode: str = "semaev",
    trials_cap: int = 100_000,
    stats: GatherStats | None = None,
) -> list[Relation]:
    """Collect ``target`` verified relations (default |F| + 10) from seeded random (a, b)."""
    curve = fb.curve
    N = curve.point_count
    target = len(fb.F) + 10 if target is None else target
    stats = stats if stats is not None else GatherStats()
    rng = random.Random(seed)
    out: list[Relation] = []
    while len(out) < target:
        if stats.trials >= trials_cap:
            raise CapExceededError(f"found {len(out)} of {target} relations within {trials_cap} trials")
        stats.trials += 1
        a, b = rng.randrange(N), rng.randrange(1, N)
        R = curve.add(curve.mul(a, P), curve.mul(b, Q))
        found = decompose(R, fb, m, mode)
        if found is None:
            continue
        stats.successes += 1
        out.append(make_relation(a, b, found, P, Q, fb))
    return out


def solve_dlog(relations: Sequence[Relation], fb_size: int, N: int) -> list[int]:
    """Candidate k from each dependency a + b k = 0 (mod N) among the relations.

    Rows are (multiplicity vector | a | b); eliminating the factor-base columns
    leaves rows whose factor-base part vanishes.  Candidates come in row order
    of the canonically sorted relation list.
    """
    if not is_prime(N):
        raise DomainError(f"group order {N} is not prime")
    rows = []
    for rel in sorted(relations, key=lambda r: (r.a, r.b, r.indices)):
        row = [0] * (fb_size + 2)
        for i in rel.indices:
            row[i] += 1
        row[fb_size], row[fb_size + 1] = rel.a % N, rel.b % N
        rows.append([v % N for v in row])
    pivot_row = 0
    for col in range(fb_size):
        sel = next((r for r in range(pivot_row, len(rows)) if rows[r][col]), None)
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        inv = pow(rows[pivot_row][col], -1, N)
        rows[pivot_row] = [v * inv % N for v in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [(v - factor * w) % N for v, w in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
    candidates = []
    for row in rows[pivot_row:]:
        a_sum, b_sum = row[fb_size], row[fb_size + 1]
        if b_sum:
            candidates.append(-a_sum * pow(b_sum, -1, N) % N)
    return candidates


def index_calculus(
    P: CurvePoint,
    Q: CurvePoint,
    fb: FactorBase,
    *,
    m: int = 2,
    seed: int = 0,
    mode: str = "semaev",
    trials_cap: int = 100_000,
    stats: GatherStats | None = None,
) -> tuple[int, list[Relation]]:
    """Gather relations and solve; asks for ten more relations while the system is degenerate."""
    curve = fb.curve
    N = curve.point_count
    stats = stats if stats is not None else GatherStats()
    target = len(fb.F) + 10
    relations: list[Relation] = []
    round_seed = seed
    while True:
        relations += gather_relations(
            P, Q, fb, m=m, target=target - len(relations), seed=round_seed,
            mode=mode, trials_cap=trials_cap, stats=stats,
        )
        for k in solve_dlog(relations, len(fb.F), N):
            if curve.mul(k, P) == Q:
                return k, relations
        target += 10
        round_seed += 1_000_003


def bsgs(P: CurvePoint, Q: CurvePoint, N: int, curve: Curve) -> int:
    """Smallest k >= 0 with kP = Q, in O(sqrt N) group operations."""
    if N > BSGS_CAP:
        raise CapExceededError(f"group order {N} exceeds the BSGS cap {BSGS_CAP}")
    step = math.isqrt(N - 1) + 1 if N > 1 else 1
    baby: dict[CurvePoint, int] = {}
    cur = O
    for j in range(step):
        baby.setdefault(cur, j)
        cur = curve.add(cur, P)
    giant = curve.neg(curve.mul(step, P))
    cur = Q
    for i in range(step + 1):
        if cur in baby:
            return (i * step + baby[cur]) % N if N else i * step + baby[cur]
        cur = curve.add(cur, giant)
    raise DomainError("Q is not in the subgroup generated by P")


# ---------------------------------------------------------------- complexity model


@dataclass(frozen=True)
class ComplexityEstimate:
    beta: float
    c: float
    m: int | None
    alpha: float
    exponent: float
    beats_bruteforce: bool
    beats_generic: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "beta": self.beta,
            "c": self.c,
            "m": "inf" if self.m is None else self.m,
            "alpha": self.alpha,
            "exponent": self.exponent,
            "beats_bruteforce": self.beats_bruteforce,
            "beats_generic": self.beats_generic,
        }


def alpha_of(beta: float, c: float = DEFAULT_C) -> float:
    if beta <= 0 or c <= 0:
        raise DomainError("beta and c must be positive")
    return 1 / (2 * c * beta)


def exponent_at(alpha: float, m: int) -> float:
    """e(m) = max(2 alpha / m, 1 - alpha (1/2 - 1/m))."""
    return max(2 * alpha / m, 1 - alpha * (0.5 - 1 / m))


def asymptotic_exponent(alpha: float) -> float:
    """Limit of e(m) as m grows, for alpha < 2."""
    if alpha >= 2:
        raise DomainError("the limit 1 - alpha/2 only applies for alpha < 2")
    return 1 - alpha / 2


def generic_threshold(c: float = DEFAULT_C) -> float:
    """beta below which the estimate beats generic algorithms (alpha > 1)."""
    return 1 / (2 * c)


def complexity_estimate(beta: float, c: float = DEFAULT_C, m: int | None = None) -> ComplexityEstimate:
    """Exponent e with cost p^{e n}; ``m=None`` reports the m -> infinity limit."""
    alpha = alpha_of(beta, c)
    if m is None:
        exponent = asymptotic_exponent(alpha)
        bruteforce = True
    else:
        if m < 2:
            raise UsageError("m must be >= 2")
        exponent = exponent_at(alpha, m)
        bruteforce = m > max(2 * alpha, 2)
    return ComplexityEstimate(beta, c, m, alpha, exponent, bruteforce, alpha > 1)


def optimal_m(beta: float, c: float = DEFAULT_C, *, m_max: int = 10_000) -> tuple[int, float]:
    """Integer m in [2, m_max] minimizing e(m), and that minimum."""
    alpha = alpha_of(beta, c)
    best = min(range(2, m_max + 1), key=lambda m: (exponent_at(alpha, m), m))
    return best, exponent_at(alpha, best)


TABLE_BETAS = (1.0, 0.8, 0.6, 0.4, 0.2, 0.15, 0.1)


def exponent_table(betas: Sequence[float] = TABLE_BETAS, c: float = DEFAULT_C) -> list[dict[str, float]]:
    return [{"beta": b, "alpha": alpha_of(b, c), "exponent": asymptotic_exponent(alpha_of(b, c))} for b in betas]


# ---------------------------------------------------------------- end-to-end demo


def default_demo_qsp(p: int = 5, n: int = 3, f: FpPoly | None = None) -> LinearizedQsp:
    f = f if f is not None else FpPoly(p, [1, 1, 1])
    return linearize(f, n)


@dataclass
class DemoReport:
    curve: dict[str, Any]
    qsp: str
    V_size: int
    F_size: int
    x_multiplicities: dict[int, int]
    instances: list[dict[str, Any]] = field(default_factory=list)
    trials: int = 0
    relations_found: int = 0
    success_rate: float = 0.0
    predicted_rate: float = 0.0
    agreement: int = 0
    seconds: float = 0.0

    def to_json(self) -> dict[str, Any]:
        return {
            "curve": self.curve,
            "qsp": self.qsp,
            "V_size": self.V_size,
            "F_size": self.F_size,
            "x_multiplicities": {str(k): v for k, v in self.x_multiplicities.items()},
            "half_of_V_with_two_points": self.x_multiplicities[2] / self.V_size if self.V_size else 0.0,
            "instances": self.instances,
            "relations_tried": self.trials,
            "relations_found": self.relations_found,
            "measured_success_rate": self.success_rate,
            "predicted_success_rate": self.predicted_rate,
            "bsgs_agreement": f"{self.agreement}/{len(self.instances)}",
            "seconds": self.seconds,
        }


def predicted_success_rate(F_size: int, q: int, m: int = 2) -> float:
    """|F|^m / (m! q)."""
    return F_size**m / (math.factorial(m) * q)


def generator(curve: Curve) -> CurvePoint:
    """First affine point in (x, y) order; generates the group when |E| is prime."""
    return next(curve.points())


def run_demo(
    *,
    p: int = 5,
    n: int = 3,
    f: FpPoly | None = None,
    seed: int = 0,
    m: int = 2,
    mode: str = "semaev",
    instances: int = 20,
    trials_cap: int = 100_000,
) -> DemoReport:
    """Seeded index-calculus runs cross-checked against BSGS."""
    started = time.perf_counter()
    if p < 5:
        raise DomainError("the demo needs p >= 5")
    fld = ext_field_make(p, n)
    curve = find_prime_order_curve(fld)
    qsp = default_demo_qsp(p, n, f)
    fb = build_factor_base(curve, qsp)
    N = curve.point_count
    P = generator(curve)
    rng = random.Random(seed)
    stats = GatherStats()
    report = DemoReport(
        curve=curve.to_json(),
        qsp=str(qsp),
        V_size=len(fb.V),
        F_size=len(fb.F),
        x_multiplicities=fb.x_multiplicities(),
        predicted_rate=predicted_success_rate(len(fb.F), fld.order, m),
    )
    for inst in range(instances):
        k_true = 1 if inst == 0 else rng.randrange(1, N)
        Q = curve.mul(k_true, P)
        k, rels = index_calculus(P, Q, fb, m=m, seed=seed * 1_000 + inst, mode=mode, trials_cap=trials_cap, stats=stats)
        k_bsgs = bsgs(P, Q, N, curve)
        agree = k == k_bsgs == k_true % N
        report.agreement += agree
        report.relations_found += len(rels)
        report.instances.append({"k": k, "bsgs": k_bsgs, "relations": len(rels), "agree": agree})
    report.trials = stats.trials
    report.success_rate = stats.success_rate
    report.seconds = time.perf_counter() - started
    return report
