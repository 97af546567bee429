"""Divisor algebra of a square-free level N.

Divisors are bit-vectors over the sorted prime list.  The total order is
omega-major with an anti-lexicographic tie break, so d_1 = 1, d_s = N and
d_i * d_{s+1-i} = N throughout.  The tables built here (24*Lambda and A)
satisfy (24*Lambda) * A = phi(N)*psi(N) * I exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .exactnum import IntMatrix, factor_squarefree, phi_psi_omega

MAX_PRIME_COUNT = 20  # table size is 2^n rows; past this is out of desk scale


class SquareFreeLevel:
    """A square-free positive integer with its ordered prime factorization."""

    __slots__ = ("value", "primes", "n")

    def __init__(self, n):
        if isinstance(n, SquareFreeLevel):
            value, primes = n.value, n.primes
        else:
            value = int(n)
            primes = factor_squarefree(value)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "n", len(primes))

    def __setattr__(self, name, value):
        raise AttributeError("SquareFreeLevel is immutable")

    def __eq__(self, other):
        return isinstance(other, SquareFreeLevel) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"SquareFreeLevel({self.value})"


class Divisor:
    """A divisor of N, stored as the exponent bit-vector over N's primes."""

    __slots__ = ("level", "bits", "value")

    def __init__(self, level: SquareFreeLevel, bits):
        bits = tuple(int(b) for b in bits)
        if len(bits) != level.n or any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be a 0/1 vector aligned to the primes")
        value = 1
        for p, b in zip(level.primes, bits):
            if b:
                value *= p
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Divisor is immutable")

    @property
    def omega(self) -> int:
        return sum(self.bits)

    def sort_key(self):
        # omega first; ties broken anti-lexicographically (larger leading
        # bit sorts earlier), giving 1, p1, p2, ..., N
        return (self.omega, tuple(-b for b in self.bits))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __eq__(self, other):
        return (
            isinstance(other, Divisor)
            and self.level == other.level
            and self.bits == other.bits
        )

    def __hash__(self):
        return hash((self.level, self.bits))

    def __repr__(self):
        return f"Divisor({self.value} | {self.level.value})"


def divisor_from_int(level: SquareFreeLevel, d: int) -> Divisor:
    if d < 1 or level.value % d:
        raise ValueError(f"{d} does not divide {level.value}")
    return Divisor(level, [1 if d % p == 0 else 0 for p in level.primes])


def box_add(a: Divisor, b: Divisor) -> Divisor:
    """Group law on divisors: c_i = a_i + b_i + 1 mod 2, identity N."""
    if a.level != b.level:
        raise ValueError("divisors belong to different levels")
    return Divisor(a.level, [(x + y + 1) % 2 for x, y in zip(a.bits, b.bits)])


def sgn(a: Divisor) -> int:
    """(-1)^(omega(N) - omega(a))."""
    return -1 if (a.level.n - a.omega) % 2 else 1


def a_N(a: Divisor, b: Divisor) -> Fraction:
    """N/(a, N/a) * (a,b)^2 / (a*b); equals the integer a box b here."""
    if a.level != b.level:
        raise ValueError("divisors belong to different levels")
    n = a.level.value
    value = Fraction(n, gcd(a.value, n // a.value)) * Fraction(
        gcd(a.value, b.value) ** 2, a.value * b.value
    )
    assert value.denominator == 1, "a_N must be integral for square-free N"
    return value


class DivisorTable:
    """All divisors of N in their canonical order, with index lookup."""

    __slots__ = ("level", "divisors", "_index")

    def __init__(self, level: SquareFreeLevel):
        if level.n > MAX_PRIME_COUNT:
            raise ValueError(
                f"level has {level.n} prime factors; tables stop at {MAX_PRIME_COUNT}"
            )
        divisors = []
        for mask in range(1 << level.n):
            bits = [(mask >> i) & 1 for i in range(level.n)]
            divisors.append(Divisor(level, bits))
        divisors.sort(key=Divisor.sort_key)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "divisors", tuple(divisors))
        object.__setattr__(
            self, "_index", {d.value: i for i, d in enumerate(divisors)}
        )

    def __setattr__(self, name, value):
        raise AttributeError("DivisorTable is immutable")

    def __len__(self):
        return len(self.divisors)

    def __getitem__(self, i) -> Divisor:
        return self.divisors[i]

    def index(self, d) -> int:
        value = d.value if isinstance(d, Divisor) else int(d)
        return self._index[value]


def build_tables(n) -> tuple[DivisorTable, IntMatrix, IntMatrix]:
    """(DivisorTable, 24*Lambda, A) for square-free n; identity checked."""
    level = n if isinstance(n, SquareFreeLevel) else SquareFreeLevel(n)
    table = DivisorTable(level)
    s = len(table)
    box_vals = [
        [box_add(table[i], table[j]).value for j in range(s)] for i in range(s)
    ]
    lam24 = IntMatrix(box_vals, cols=s)
    amat = IntMatrix(
        [
            [
                sgn(box_add(table[i], table[j])) * box_vals[i][j]
                for j in range(s)
            ]
            for i in range(s)
        ],
        cols=s,
    )
    phi, psi, _ = phi_psi_omega(level)
    if lam24 * amat != IntMatrix.identity(s).scale(phi * psi):
        raise AssertionError(f"(24*Lambda)*A != phi*psi*I at N={level.value}")
    return table, lam24, amat
