"""Exact integer/rational arithmetic and local symbols.

Integers are Python ints and rationals are :class:`fractions.Fraction`; both
are canonical on construction, so equality is structural.  On top of them this
module provides desk-scale factorization, places of Q, Legendre and Hilbert
symbols, and square tests over Q and its completions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .config import DEFAULT_BUDGETS, Budgets
from .errors import BudgetError, DomainError

RationalLike = Union[int, Fraction, str]

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def Q(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"n"``/``"n/d"`` strings to a Fraction.

    Floats are refused: exactness is the whole point.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        m = _RAT_RE.match(x)
        if not m:
            raise DomainError(f"not a rational literal: {x!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise DomainError(f"zero denominator in {x!r}")
        return Fraction(num, den)
    raise DomainError(f"cannot interpret {type(x).__name__} as a rational")


def fmt(q: RationalLike) -> str:
    """Serialize as ``n`` or ``n/d`` in lowest terms with ``d > 0``."""
    return str(Q(q))


def height(q: Fraction) -> int:
    return max(abs(q.numerator), q.denominator)


# -- primes and factorization ------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases.

    Deterministic below 3.3e24, which covers every desk-scale input.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


@dataclass(frozen=True)
class PrimeFactorization:
    """Signed unit times a product of prime powers (exponents may be negative)."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> Fraction:
        out = Fraction(self.sign)
        for p, e in self.factors:
            out *= Fraction(p) ** e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return str(self.sign)
        body = "*".join(f"{p}^{e}" if e != 1 else str(p) for p, e in self.factors)
        return body if self.sign > 0 else f"-{body}"


def _pollard_rho(n: int, budget: int) -> int | None:
    if n % 2 == 0:
        return 2
    spent = 0
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
            spent += 1
            if spent > budget:
                return None
        if d != n:
            return d
    return None


def _factor_positive(n: int, budgets: Budgets) -> dict[int, int]:
    out: dict[int, int] = {}
    bound = budgets.trial_division_bound
    p = 2
    while p * p <= n and p <= bound:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m) or m < (p * p):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m, budgets.factor_budget)
        if d is None:
            raise BudgetError(f"could not split {m} within {budgets.factor_budget} rho steps",
                              partial={"cofactor": m, "found": dict(out)})
        stack += [d, m // d]
    return out


def factor(n: RationalLike, budgets: Budgets = DEFAULT_BUDGETS) -> PrimeFactorization:
    """Factor a nonzero integer (or rational, giving negative exponents)."""
    q = Q(n)
    if q == 0:
        raise DomainError("cannot factor zero")
    exps: dict[int, int] = {}
    for part, sgn in ((abs(q.numerator), 1), (q.denominator, -1)):
        for p, e in _factor_positive(part, budgets).items():
            exps[p] = exps.get(p, 0) + sgn * e
    return PrimeFactorization(1 if q > 0 else -1,
                              tuple(sorted((p, e) for p, e in exps.items() if e)))


def valuation(q: RationalLike, p: int) -> int:
    q = Q(q)
    if q == 0:
        raise DomainError("valuation of zero")
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def squarefree_integer(q: RationalLike, budgets: Budgets = DEFAULT_BUDGETS) -> int:
    """The squarefree integer in the square class of ``q`` (q * Q^2 ∩ Z, minimal)."""
    f = factor(q, budgets)
    out = f.sign
    for p, e in f.factors:
        if e % 2:
            out *= p
    return out


# -- places -------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: ``Place(p)`` for a prime p, ``Place(0)`` for the real place."""

    prime: int

    def __post_init__(self):
        if self.prime != 0 and not is_prime(self.prime):
            raise DomainError(f"{self.prime} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.prime == 0

    def __str__(self) -> str:
        return "inf" if self.is_infinite else str(self.prime)

    @classmethod
    def parse(cls, s: str) -> "Place":
        s = s.strip()
        if s in ("inf", "oo", "∞", "infinity"):
            return INF
        return cls(int(s))


INF = Place(0)


def finite(p: int) -> Place:
    return Place(p)


def bad_places(*qs: RationalLike, budgets: Budgets = DEFAULT_BUDGETS) -> list[Place]:
    """∞, 2 and every prime dividing a numerator or denominator of ``qs``."""
    primes = {2}
    for q in qs:
        primes.update(factor(q, budgets).primes())
    return [INF] + [Place(p) for p in sorted(primes)]


# -- symbols ----------------------------------------------------------------

def legendre_symbol(a: int, p: int) -> int:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise DomainError(f"legendre_symbol needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _unit_split(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a: RationalLike, b: RationalLike, v: Place) -> int:
    """(a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution over Q_v."""
    a, b = Q(a), Q(b)
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol of zero")
    if v.is_infinite:
        return -1 if (a < 0 and b < 0) else 1
    # multiplying by denominator squares does not change the symbol
    ai = a.numerator * a.denominator
    bi = b.numerator * b.denominator
    p = v.prime
    alpha, u = _unit_split(ai, p)
    beta, w = _unit_split(bi, p)
    if p != 2:
        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        return sign * legendre_symbol(u, p) ** beta * legendre_symbol(w, p) ** alpha

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
    return -1 if e % 2 else 1


# -- squares ------------------------------------------------------------------

def rational_sqrt(q: RationalLike) -> Fraction | None:
    q = Q(q)
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def is_square(q: RationalLike) -> bool:
    return rational_sqrt(q) is not None


def is_local_square(q: RationalLike, v: Place) -> bool:
    """Is the nonzero rational ``q`` a square in Q_v?"""
    q = Q(q)
    if q == 0:
        raise DomainError("square test on zero")
    if v.is_infinite:
        return q > 0
    p = v.prime
    val = valuation(q, p)
    if val % 2:
        return False
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
    while d % p == 0:
        d //= p
    unit = n * d  # same square class as the unit part
    if p == 2:
        return unit % 8 == 1
    return legendre_symbol(unit, p) == 1


def iter_rationals(max_height: int) -> Iterator[Fraction]:
    """Every rational of height <= max_height, ordered by height then value order 0, +, -."""
    yield Fraction(0)
    for h in range(1, max_height + 1):
        seen = []
        for d in range(1, h + 1):
            n = h
            if math.gcd(n, d) == 1:
                seen.append(Fraction(n, d))
        for n in range(1, h):
            if math.gcd(n, h) == 1:
                seen.append(Fraction(n, h))
        for x in sorted(seen):
            yield x
            yield -x
