"""Exact arithmetic over F_p, F_p[X], F_{p^n} and square matrices over either.

Polynomials store coefficients least degree first.  Field elements of
F_{p^n} are residues modulo a deterministically chosen irreducible modulus,
so two runs with the same ``(p, n)`` always agree bit for bit.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd as int_gcd
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError, DomainError, PolyParseError, UsageError

MAX_CHARACTERISTIC = 2**31
DEFAULT_FIELD_CAP = 2**40

_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int, *, rounds: int = 32, seed: int = 0) -> bool:
    """Miller-Rabin; deterministic below 2^64, seeded random bases above."""
    if n < 2:
        return False
    for small in _MR_BASES_64:
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 2**64:
        bases: Iterable[int] = _MR_BASES_64
    else:
        rng = random.Random(seed)
        bases = [rng.randrange(2, n - 1) for _ in range(rounds)]
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of a small positive integer, by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _check_characteristic(p: int) -> None:
    if not isinstance(p, int) or p < 2 or p > MAX_CHARACTERISTIC or not is_prime(p):
        raise UsageError(f"characteristic must be a prime in [2, 2^31], got {p!r}")


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


# ---------------------------------------------------------------- F_p[X]


@dataclass(frozen=True)
class FpPoly:
    """Dense polynomial over F_p, least degree coefficient first."""

    p: int
    coeffs: tuple[int, ...]

    def __init__(self, p: int, coeffs: Iterable[int] = ()):
        _check_characteristic(p)
        reduced = _trim([int(c) % p for c in coeffs])
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(reduced))

    @classmethod
    def _raw(cls, p: int, coeffs: list[int]) -> FpPoly:
        # Skips validation; caller guarantees reduced, trimmed input.
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    @classmethod
    def x(cls, p: int) -> FpPoly:
        return cls(p, (0, 1))

    @classmethod
    def monomial(cls, p: int, degree: int, coeff: int = 1) -> FpPoly:
        return cls(p, [0] * degree + [coeff])

    @classmethod
    def constant(cls, p: int, c: int) -> FpPoly:
        return cls(p, (c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def _coerce(self, other: FpPoly | int) -> FpPoly:
        if isinstance(other, int):
            return FpPoly(self.p, (other,))
        if not isinstance(other, FpPoly):
            return NotImplemented
        if other.p != self.p:
            raise UsageError(f"characteristic mismatch: {self.p} vs {other.p}")
        return other

    def __add__(self, other: FpPoly | int) -> FpPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self.coeffs, other.coeffs, self.p
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return FpPoly._raw(p, _trim(out))

    __radd__ = __add__

    def __neg__(self) -> FpPoly:
        p = self.p
        return FpPoly._raw(p, [(-c) % p for c in self.coeffs])

    def __sub__(self, other: FpPoly | int) -> FpPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: int) -> FpPoly:
        return (-self) + other

    def __mul__(self, other: FpPoly | int) -> FpPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self.coeffs, other.coeffs, self.p
        if not a or not b:
            return FpPoly._raw(p, [])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return FpPoly._raw(p, _trim([c % p for c in out]))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FpPoly:
        if e < 0:
            raise UsageError("negative polynomial exponent")
        result, base = FpPoly._raw(self.p, [1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: FpPoly) -> tuple[FpPoly, FpPoly]:
        other = self._coerce(other)
        if other.is_zero:
            raise UsageError("division by the zero polynomial")
        p = self.p
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) <= db:
            return FpPoly._raw(p, []), self
        inv_lead = pow(other.leading, -1, p)
        terms = [(j, b) for j, b in enumerate(other.coeffs[:db]) if b]
        quot = [0] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i] % p * inv_lead % p
            if c:
                quot[i - db] = c
                shift = i - db
                rem[i] = 0
                for j, b in terms:
                    rem[shift + j] -= c * b
        rem = [c % p for c in rem[:db]]
        return FpPoly._raw(p, _trim(quot)), FpPoly._raw(p, _trim(rem[:db]))

    def __floordiv__(self, other: FpPoly) -> FpPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: FpPoly) -> FpPoly:
        return divmod(self, other)[1]

    def monic(self) -> FpPoly:
        if self.is_zero:
            return self
        inv = pow(self.leading, -1, self.p)
        return FpPoly._raw(self.p, [c * inv % self.p for c in self.coeffs])

    def derivative(self) -> FpPoly:
        return FpPoly(self.p, [i * c for i, c in enumerate(self.coeffs)][1:])

    def compose_xk(self, k: int) -> FpPoly:
        """f(X^k)."""
        out = [0] * (self.degree * k + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return FpPoly._raw(self.p, out)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def to_text(self) -> str:
        return format_poly(self)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"FpPoly({format_poly(self)!r} mod {self.p})"


def poly_gcd(f: FpPoly, g: FpPoly) -> FpPoly:
    """Monic gcd, zero if both inputs are zero."""
    f._coerce(g)
    while not g.is_zero:
        f, g = g, f % g
    return f.monic()


def powmod(f: FpPoly, e: int, m: FpPoly) -> FpPoly:
    """f^e mod m by square and multiply; e may be a big integer."""
    if e < 0:
        raise UsageError("negative exponent in powmod")
    if m.is_zero:
        raise UsageError("powmod modulus is zero")
    result = FpPoly._raw(f.p, [1]) % m
    base = f % m
    while e:
        if e & 1:
            result = result * base % m
        base = base * base % m
        e >>= 1
    return result


def x_power_order(f: FpPoly, bound: int) -> int | None:
    """Multiplicative order of X modulo f, if it is at most ``bound``.

    Equal to the order of the companion matrix of f.  Steps X^k one
    multiplication by X at a time, so the cost is O(bound * deg f).
    """
    if f.degree < 1 or f[0] == 0:
        raise DomainError("order of X needs deg f >= 1 and f(0) != 0")
    p, d = f.p, f.degree
    inv = pow(f.leading, -1, p)
    tail = [c * inv % p for c in f.coeffs[:d]]
    if p == 2:
        mask = sum(1 << i for i, c in enumerate(tail) if c)
        top = 1 << (d - 1)
        state = 1
        for k in range(1, bound + 1):
            carry = state & top
            state = (state << 1) & ((1 << d) - 1)
            if carry:
                state ^= mask
            if state == 1:
                return k
        return None
    state = [1] + [0] * (d - 1)
    one = list(state)
    for k in range(1, bound + 1):
        t = state[-1]
        state = [0] + state[:-1]
        if t:
            state = [(s - t * c) % p for s, c in zip(state, tail)]
        if state == one:
            return k
    return None


def is_irreducible(f: FpPoly) -> bool:
    """Rabin-style test: X^{p^n} = X mod f and gcd(X^{p^i} - X, f) = 1 for proper i | n."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    x = FpPoly.x(f.p)
    proper = {i for i in divisors(n) if i < n}
    h = x
    for i in range(1, n + 1):
        h = powmod(h, f.p, f)
        if i in proper and poly_gcd(h - x, f).degree != 0:
            return False
    return h == x % f


# ---------------------------------------------------------------- text I/O


def _signed(c: int, p: int) -> int:
    return c - p if c > p // 2 else c


def format_poly(f: FpPoly, *, var: str = "X") -> str:
    """Descending sparse text, e.g. ``X^16+X^4+X+1``; residues shown symmetrically."""
    if f.is_zero:
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = _signed(f.coeffs[i], f.p)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    return text + "".join(s + b for s, b in parts[1:])


_LIST_FORM = re.compile(r"^\s*\[(?P<body>[^\]]*)\]\s*mod\s+(?P<p>\d+)\s*$")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[Xx])|(?P<op>\*\*|[-+*^]))")


def parse_poly(text: str, p: int | None = None) -> FpPoly:
    """Parse ``"1 + X + X^2"``/``"X^2+X+1"`` (needs ``p``) or ``"[1,1,1] mod 2"``.

    Raises :class:`PolyParseError` naming the offending column.
    """
    m = _LIST_FORM.match(text)
    if m:
        modulus = int(m.group("p"))
        if p is not None and p != modulus:
            raise PolyParseError(f"modulus {modulus} conflicts with p={p}", text, m.start("p"))
        body = m.group("body")
        coeffs = []
        offset = m.start("body")
        for piece in body.split(","):
            stripped = piece.strip()
            if not re.fullmatch(r"-?\d+", stripped):
                col = offset + (len(piece) - len(piece.lstrip()))
                raise PolyParseError("expected an integer coefficient", text, col)
            coeffs.append(int(stripped))
            offset += len(piece) + 1
        try:
            return FpPoly(modulus, coeffs)
        except UsageError as exc:
            raise PolyParseError(str(exc), text, m.start("p")) from None
    if p is None:
        raise PolyParseError("text form needs an explicit characteristic p", text, 0)
    return FpPoly(p, _parse_terms(text))


def _parse_terms(text: str) -> list[int]:
    pos = 0
    n = len(text)
    acc: dict[int, int] = {}

    def peek() -> tuple[str | None, str, int]:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            return None, "", pos
        kind = m.lastgroup
        return kind, m.group(kind), m.start(kind)

    def advance() -> None:
        nonlocal pos
        m = _TOKEN.match(text, pos)
        pos = m.end()

    expect_term = True
    sign = 1
    saw_sign = False
    saw_term = False
    while True:
        if text[pos:].strip() == "":
            break
        kind, tok, col = peek()
        if kind is None:
            col = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PolyParseError(f"unexpected character {text[col]!r}", text, col)
        if not expect_term:
            if kind == "op" and tok in "+-":
                sign = 1 if tok == "+" else -1
                saw_sign = True
                advance()
                expect_term = True
                continue
            raise PolyParseError("expected '+' or '-'", text, col)
        if kind == "op" and tok in "+-":
            if saw_sign:
                raise PolyParseError("expected a term", text, col)
            sign *= 1 if tok == "+" else -1
            saw_sign = True
            advance()
            continue
        coeff, degree = 1, 0
        if kind == "num":
            coeff = int(tok)
            advance()
            kind, tok, col = peek()
            if kind == "op" and tok == "*":
                advance()
                kind, tok, col = peek()
                if kind != "var":
                    raise PolyParseError("expected 'X' after '*'", text, col)
            if kind == "var":
                advance()
                degree = 1
                kind, tok, col = peek()
                if kind == "op" and tok in ("^", "**"):
                    advance()
                    kind, tok, col = peek()
                    if kind != "num":
                        raise PolyParseError("expected an exponent", text, col)
                    degree = int(tok)
                    advance()
        elif kind == "var":
            advance()
            degree = 1
            kind, tok, col = peek()
            if kind == "op" and tok in ("^", "**"):
                advance()
                kind, tok, col = peek()
                if kind != "num":
                    raise PolyParseError("expected an exponent", text, col)
                degree = int(tok)
                advance()
        else:
            raise PolyParseError("expected a term", text, col)
        acc[degree] = acc.get(degree, 0) + sign * coeff
        sign = 1
        saw_sign = False
        expect_term = False
        saw_term = True
    if expect_term:
        raise PolyParseError("expected a term", text, n if saw_term or n else 0)
    top = max(acc) if acc else -1
    return [acc.get(i, 0) for i in range(top + 1)]


# ---------------------------------------------------------------- F_p and F_{p^n}


class PrimeField:
    """F_p with plain ints as elements; shares the field protocol with ExtField."""

    def __init__(self, p: int):
        _check_characteristic(p)
        self.p = p
        self.n = 1
        self.zero = 0
        self.one = 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __call__(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise DomainError("inverse of zero")
        return pow(a, -1, self.p)

    def frob(self, a: int, i: int = 1) -> int:
        return a


class ExtField:
    """F_{p^n} = F_p[X]/(modulus)."""

    def __init__(self, p: int, n: int, modulus: FpPoly):
        _check_characteristic(p)
        if modulus.p != p or modulus.degree != n or not modulus.is_monic:
            raise UsageError("modulus must be monic of degree n over F_p")
        if not is_irreducible(modulus):
            raise DomainError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.n = n
        self.modulus = modulus
        self._tail = [(-c) % p for c in modulus.coeffs[:n]]
        self.order = p**n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExtField) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return f"ExtField({self.p}^{self.n}, modulus={self.modulus})"

    # element construction

    def __call__(self, value: int | Sequence[int] | FpPoly | ExtElem) -> ExtElem:
        if isinstance(value, ExtElem):
            if value.field != self:
                raise UsageError("element belongs to another field")
            return value
        if isinstance(value, int):
            return ExtElem(self, self._reduce([value % self.p]))
        if isinstance(value, FpPoly):
            value = value.coeffs
        return ExtElem(self, self._reduce([c % self.p for c in value]))

    @cached_property
    def zero(self) -> ExtElem:
        return ExtElem(self, (0,) * self.n)

    @cached_property
    def one(self) -> ExtElem:
        return self(1)

    @cached_property
    def gen(self) -> ExtElem:
        """The class of X."""
        return self([0, 1])

    def from_int(self, k: int) -> ExtElem:
        """Element whose base-p digits (least significant first) are its coefficients."""
        digits = []
        for _ in range(self.n):
            k, d = divmod(k, self.p)
            digits.append(d)
        return ExtElem(self, tuple(digits))

    def elements(self) -> Iterator[ExtElem]:
        for k in range(self.order):
            yield self.from_int(k)

    def random(self, rng: random.Random) -> ExtElem:
        return self.from_int(rng.randrange(self.order))

    def embed(self, c: int) -> ExtElem:
        return self(c)

    # arithmetic core

    def _reduce(self, coeffs: list[int]) -> tuple[int, ...]:
        n, p, tail = self.n, self.p, self._tail
        for i in range(len(coeffs) - 1, n - 1, -1):
            c = coeffs[i]
            if c:
                base = i - n
                for j, t in enumerate(tail):
                    if t:
                        coeffs[base + j] = (coeffs[base + j] + c * t) % p
        coeffs = coeffs[:n]
        coeffs.extend([0] * (n - len(coeffs)))
        return tuple(coeffs)

    def add(self, a: ExtElem, b: ExtElem) -> ExtElem:
        return a + b

    def sub(self, a: ExtElem, b: ExtElem) -> ExtElem:
        return a - b

    def mul(self, a: ExtElem, b: ExtElem) -> ExtElem:
        return a * b

    def neg(self, a: ExtElem) -> ExtElem:
        return -a

    def inv(self, a: ExtElem) -> ExtElem:
        return a.inv()

    def frob(self, a: ExtElem, i: int = 1) -> ExtElem:
        return a.frobenius(i)

    @cached_property
    def _frob_images(self) -> list[tuple[int, ...]]:
        # x -> x^p is F_p-linear, so it is fixed by the images of t^j.
        return [(ExtElem(self, self._reduce([0] * j + [1])) ** self.p).rep for j in range(self.n)]

    def _frob_once(self, x: ExtElem) -> ExtElem:
        p = self.p
        out = [0] * self.n
        for c, img in zip(x.rep, self._frob_images):
            if c:
                for j, v in enumerate(img):
                    out[j] += c * v
        return ExtElem(self, tuple(v % p for v in out))


class ExtElem:
    """Element of an :class:`ExtField`; ``rep`` has exactly ``n`` coefficients."""

    __slots__ = ("field", "rep")

    def __init__(self, field: ExtField, rep: tuple[int, ...]):
        self.field = field
        self.rep = rep

    def _other(self, other: ExtElem | int) -> ExtElem:
        if isinstance(other, int):
            return self.field(other)
        if not isinstance(other, ExtElem):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            raise UsageError("operands belong to different fields")
        return other

    def __add__(self, other: ExtElem | int) -> ExtElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return ExtElem(self.field, tuple((a + b) % p for a, b in zip(self.rep, other.rep)))

    __radd__ = __add__

    def __sub__(self, other: ExtElem | int) -> ExtElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return ExtElem(self.field, tuple((a - b) % p for a, b in zip(self.rep, other.rep)))

    def __rsub__(self, other: int) -> ExtElem:
        return self.field(other) - self

    def __neg__(self) -> ExtElem:
        p = self.field.p
        return ExtElem(self.field, tuple((-a) % p for a in self.rep))

    def __mul__(self, other: ExtElem | int) -> ExtElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        field = self.field
        a, b = self.rep, other.rep
        out = [0] * (2 * field.n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        p = field.p
        return ExtElem(field, field._reduce([c % p for c in out]))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> ExtElem:
        if e < 0:
            return self.inv() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> ExtElem:
        if self.is_zero:
            raise DomainError("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other: ExtElem | int) -> ExtElem:
        return self * self._other(other).inv()

    def frobenius(self, i: int = 1) -> ExtElem:
        """x -> x^{p^i}; the identity when n divides i."""
        field = self.field
        x = self
        for _ in range(i % field.n):
            x = field._frob_once(x)
        return x

    @property
    def is_zero(self) -> bool:
        return not any(self.rep)

    def in_prime_field(self) -> bool:
        return not any(self.rep[1:])

    def to_int(self) -> int:
        k = 0
        for c in reversed(self.rep):
            k = k * self.field.p + c
        return k

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.rep == self.field(other).rep
        return isinstance(other, ExtElem) and self.rep == other.rep and self.field == other.field

    def __hash__(self) -> int:
        return hash(self.rep)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"ExtElem({format_poly(FpPoly(self.field.p, self.rep), var='t')})"


def ext_field_make(p: int, n: int, *, cap: int = DEFAULT_FIELD_CAP) -> ExtField:
    """F_{p^n} with the first irreducible monic modulus in graded-lex order."""
    _check_characteristic(p)
    if n < 1:
        raise UsageError("extension degree must be >= 1")
    if p**n > cap:
        raise CapExceededError(f"p^n = {p}^{n} exceeds the field cap {cap}")
    return ExtField(p, n, _first_irreducible(p, n))


_MODULUS_CACHE: dict[tuple[int, int], FpPoly] = {}


def _first_irreducible(p: int, n: int) -> FpPoly:
    key = (p, n)
    if key not in _MODULUS_CACHE:
        for k in range(p**n):
            digits = []
            for _ in range(n):
                k, d = divmod(k, p)
                digits.append(d)
            cand = FpPoly(p, digits + [1])
            if is_irreducible(cand):
                _MODULUS_CACHE[key] = cand
                break
    return _MODULUS_CACHE[key]


# ---------------------------------------------------------------- matrices


class Matrix:
    """Square matrix over a PrimeField or ExtField, stored as a tuple of row tuples."""

    __slots__ = ("field", "rows")

    def __init__(self, field: PrimeField | ExtField, rows: Sequence[Sequence]):
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise UsageError("matrix must be square")
        self.field = field
        self.rows = tuple(tuple(field(x) if isinstance(x, int) else x for x in r) for r in rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, field: PrimeField | ExtField, dim: int) -> Matrix:
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(dim)] for i in range(dim)])

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other: Matrix) -> None:
        if other.dim != self.dim:
            raise UsageError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        add = self.field.add
        return Matrix(self.field, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        sub = self.field.sub
        return Matrix(self.field, [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __mul__(self, other: Matrix) -> Matrix:
        self._check(other)
        f = self.field
        if isinstance(f, PrimeField):
            p = f.p
            cols = list(zip(*other.rows))
            return Matrix(f, [[sum(a * b for a, b in zip(r, c)) % p for c in cols] for r in self.rows])
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = f.zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(f, out)

    def __pow__(self, e: int) -> Matrix:
        if e < 0:
            raise UsageError("negative matrix power")
        result, base = Matrix.identity(self.field, self.dim), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def map(self, fn) -> Matrix:
        return Matrix(self.field, [[fn(x) for x in r] for r in self.rows])

    def frobenius(self, i: int = 1) -> Matrix:
        """Entrywise x -> x^{p^i}."""
        frob = self.field.frob
        return self.map(lambda x: frob(x, i))

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.field, self.dim)

    def rank(self) -> int:
        f = self.field
        m = [list(r) for r in self.rows]
        dim = self.dim
        rank = 0
        for col in range(dim):
            pivot = next((r for r in range(rank, dim) if m[r][col]), None)
            if pivot is None:
                continue
            m[rank], m[pivot] = m[pivot], m[rank]
            inv = f.inv(m[rank][col])
            m[rank] = [f.mul(inv, x) for x in m[rank]]
            for r in range(dim):
                if r != rank and m[r][col]:
                    factor = m[r][col]
                    m[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(m[r], m[rank])]
            rank += 1
        return rank

    def __repr__(self) -> str:
        return f"Matrix({[list(r) for r in self.rows]!r})"


def fp_matrix(p: int, rows: Sequence[Sequence[int]]) -> Matrix:
    return Matrix(PrimeField(p), rows)


def companion(coeffs: Sequence, field: PrimeField | ExtField) -> Matrix:
    """Companion matrix of the monic X^d + c_{d-1}X^{d-1} + ... + c_0.

    ``coeffs`` lists c_0..c_{d-1}; ones sit on the subdiagonal and the last
    column holds -c_0..-c_{d-1}.
    """
    d = len(coeffs)
    z, o = field.zero, field.one
    rows = [[z] * d for _ in range(d)]
    for i in range(d - 1):
        rows[i + 1][i] = o
    for i, c in enumerate(coeffs):
        rows[i][d - 1] = field.neg(field(c) if isinstance(c, int) else c)
    return Matrix(field, rows)


def poly_companion(f: FpPoly) -> Matrix:
    if not f.is_monic or f.degree < 1:
        raise UsageError("companion matrix needs a monic polynomial of degree >= 1")
    return companion(list(f.coeffs[:-1]), PrimeField(f.p))


def matrix_order(a: Matrix, bound: int) -> int | None:
    """Smallest k <= bound with A^k = I, computed incrementally; None if there is none."""
    if bound < 1:
        raise UsageError("bound must be >= 1")
    if a.rank() < a.dim:
        raise DomainError("matrix is singular, so it has no multiplicative order")
    power = a
    for k in range(1, bound + 1):
        if power.is_identity():
            return k
        power = power * a
    return None


def kernel_dimension_fp(images: Sequence[Sequence[int]], p: int) -> int:
    """Kernel dimension of the F_p-linear map whose basis images are ``images``."""
    return len(images) - rank_mod_p(images, p)


def _rank_rect(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] % p), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] % p:
                c = m[r][col]
                m[r] = [(x - c * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of a rectangular integer matrix reduced mod p."""
    return _rank_rect(rows, p) if rows else 0


def int_lcm(a: int, b: int) -> int:
    return a // int_gcd(a, b) * b
