"""Four-symbol abstraction of companion-matrix powers.

Every entry of a product of Frobenius-twisted companion matrices is tracked
only as one of: zero, one, a nonzero power of the top lambda coefficient, or
unknown.  Powers of the abstract companion matrix can then rule out the
identity for small extension degrees, independently of the coefficients.
"""

from __future__ import annotations

from enum import Enum
from math import comb
from typing import Sequence

from .errors import DomainError, UsageError
from .qsp import min_n


class SymEntry(Enum):
    ZERO = "0"
    ONE = "1"
    APOW = "a"
    STAR = "*"

    def __str__(self) -> str:
        return self.value

    def __add__(self, other: SymEntry) -> SymEntry:
        return sym_add(self, other)

    def __mul__(self, other: SymEntry) -> SymEntry:
        return sym_mul(self, other)


Zero, One, APow, Star = SymEntry.ZERO, SymEntry.ONE, SymEntry.APOW, SymEntry.STAR


def sym_add(x: SymEntry, y: SymEntry) -> SymEntry:
    if x is Zero:
        return y
    if y is Zero:
        return x
    return Star


def sym_mul(x: SymEntry, y: SymEntry) -> SymEntry:
    if x is Zero or y is Zero:
        return Zero
    if x is One:
        return y
    if y is One:
        return x
    if x is APow and y is APow:
        return APow
    return Star


def sym_tables(x: SymEntry, y: SymEntry) -> tuple[SymEntry, SymEntry]:
    """(x + y, x * y) under the abstraction."""
    return sym_add(x, y), sym_mul(x, y)


SymMatrix = tuple[tuple[SymEntry, ...], ...]


def sym_companion(n_prime: int, ell: int) -> SymMatrix:
    """Abstract companion matrix: ones below the diagonal, last column (*,...,*, a, 0,...,0)."""
    if not 1 <= ell < n_prime:
        raise DomainError(f"need 1 <= ell < n', got ell={ell}, n'={n_prime}")
    rows = [[Zero] * n_prime for _ in range(n_prime)]
    for i in range(n_prime - 1):
        rows[i + 1][i] = One
    for r in range(ell):
        rows[r][-1] = Star
    rows[ell][-1] = APow
    return tuple(tuple(r) for r in rows)


def sym_matmul(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    if len(a) != len(b):
        raise UsageError("dimension mismatch")
    cols = list(zip(*b))
    out = []
    for row in a:
        new_row = []
        for col in cols:
            acc = Zero
            for x, y in zip(row, col):
                acc = sym_add(acc, sym_mul(x, y))
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def sym_pow(m: SymMatrix, n: int) -> SymMatrix:
    """n-fold symbolic product M * M * ... * M."""
    if n < 1:
        raise UsageError("n must be >= 1")
    acc = m
    for _ in range(n - 1):
        acc = sym_matmul(acc, m)
    return acc


def sym_powers(m: SymMatrix, n_max: int) -> list[SymMatrix]:
    """[M^1, ..., M^n_max] computed incrementally."""
    out = [m]
    for _ in range(n_max - 1):
        out.append(sym_matmul(out[-1], m))
    return out


def identity_representable(m: SymMatrix) -> bool:
    """False iff a diagonal entry is 0 or an off-diagonal entry is 1 or a."""
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            if i == j and x is Zero:
                return False
            if i != j and x in (One, APow):
                return False
    return True


def abstract_value(x, top) -> SymEntry:
    """Most precise symbol for a concrete field element given the top lambda coefficient."""
    if not x:
        return Zero
    if x == 1:
        return One
    y = top
    for _ in range(top.field.order):
        if y == x:
            return APow
        y = y * top
        if y == top:
            break
    return Star


def consistent(symbol: SymEntry, x, top) -> bool:
    """True iff concrete x is compatible with ``symbol`` (top = the abstracted coefficient)."""
    if symbol is Zero:
        return not x
    if symbol is One:
        return x == 1
    if symbol is APow:
        return abstract_value(x, top) in (APow, One) and bool(x)
    return True


def _multinomial(ks: Sequence[int]) -> int:
    total, out = 0, 1
    for k in ks:
        total += k
        out *= comb(total, k)
    return out


def chen_louck_entry(n_prime: int, ell: int, n: int, i: int, j: int, p: int | None = None) -> SymEntry:
    """Entry (i, j) (1-based) of M^n from the closed-form multinomial sum.

    Each vector k with sum(iota * k_iota) = n - i + j contributes w_k copies
    of a^{k_{n'-ell}} * (*)^{k_{n'-ell+1} + ... + k_{n'}}; vectors touching
    the zero rows of the last column are skipped.  With ``p`` the weights are
    read in F_p, otherwise as repeated symbolic sums.
    """
    if not 1 <= ell < n_prime:
        raise DomainError(f"need 1 <= ell < n', got ell={ell}, n'={n_prime}")
    if not (1 <= i <= n_prime and 1 <= j <= n_prime):
        raise UsageError(f"index ({i}, {j}) out of range for dimension {n_prime}")
    if n < 1:
        raise UsageError("n must be >= 1")
    if n == i - j:
        return One
    target = n - i + j
    if target <= 0:
        return Zero
    lo = n_prime - ell
    weight_from = n_prime - i + 1
    parts = list(range(n_prime, lo - 1, -1))
    ks = {iota: 0 for iota in parts}
    acc = Zero

    def leaf() -> SymEntry:
        total = sum(ks.values())
        partial = sum(ks[iota] for iota in parts if iota >= weight_from)
        num = partial * _multinomial(list(ks.values()))
        w, rem = divmod(num, total)
        assert rem == 0, "Chen-Louck weight must be an integer"
        if p is not None:
            w %= p
        if w == 0:
            return Zero
        stars = sum(ks[iota] for iota in parts if iota > lo)
        base = Star if stars else (APow if ks[lo] else One)
        if w == 1:
            return base
        # w copies of a nonzero symbol (or a scalar outside {0, 1}) are unknown.
        return Star

    def dfs(idx: int, remaining: int, weighted: bool) -> bool:
        # Returns True once the accumulated sum is Star, which absorbs everything.
        nonlocal acc
        if remaining == 0:
            if not weighted:
                return False
            acc = sym_add(acc, leaf())
            return acc is Star
        if idx == len(parts):
            return False
        iota = parts[idx]
        if iota < weight_from and not weighted:
            # Every completion has zero weight.
            return False
        for k in range(remaining // iota, -1, -1):
            ks[iota] = k
            if dfs(idx + 1, remaining - k * iota, weighted or (k > 0 and iota >= weight_from)):
                ks[iota] = 0
                return True
        ks[iota] = 0
        return False

    dfs(0, target, False)
    return acc


def witness_index(n: int, n_prime: int, ell: int) -> tuple[int, SymEntry]:
    """Row i (1-based) such that M^n[i, 1] is provably 1 or a, for n below the bound."""
    bound = min_n(n_prime, ell)
    if n < 1:
        raise UsageError("n must be >= 1")
    if n < n_prime:
        return n + 1, One
    if n < bound:
        i_n = n - (n_prime - ell) * ((n - ell) // (n_prime - ell)) + 1
        assert 2 <= i_n <= n_prime, (n, n_prime, ell, i_n)
        return i_n, APow
    raise DomainError(f"n={n} is not below the bound {bound}; no witness is claimed")


def format_sym_matrix(m: SymMatrix) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m)


def bound_report(n_prime: int, ell: int, n_max: int | None = None) -> dict:
    """Per-n trace of the symbolic certification and the Chen-Louck cross-check."""
    bound = min_n(n_prime, ell)
    n_max = n_max or bound
    m = sym_companion(n_prime, ell)
    trace = []
    sym_ok = True
    oracle_ok = True
    for n, power in enumerate(sym_powers(m, n_max), start=1):
        entry: dict = {"n": n, "identity_representable": identity_representable(power)}
        if n < bound:
            i_n, expected = witness_index(n, n_prime, ell)
            got = power[i_n - 1][0]
            entry.update(witness_row=i_n, expected=str(expected), found=str(got))
            sym_ok &= got is expected and not entry["identity_representable"]
        agree = all(
            chen_louck_entry(n_prime, ell, n, i + 1, j + 1) is power[i][j]
            for i in range(n_prime)
            for j in range(n_prime)
        )
        entry["chen_louck_agrees"] = agree
        oracle_ok &= agree
        trace.append(entry)
    return {
        "n_prime": n_prime,
        "ell": ell,
        "min_n": bound,
        "trace": trace,
        "symbolic_bound": "PASS" if sym_ok else "FAIL",
        "chen_louck_oracle": "PASS" if oracle_ok else "FAIL",
    }
