"""Truncated q-expansions with exact integer coefficients.

Carries the weight-2 series e = 1 - 24 sum sigma(n) q^n, the weight-4
series E4, the level-raising operators g(z) -> g(z) - c * g(pz), the
composite Eisenstein series attached to a divisor M of N, Hecke operators
on expansions, and the cusp-residue closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .divlattice import SquareFreeLevel
from .exactnum import is_prime, phi_psi_omega


@dataclass(frozen=True)
class QExpansion:
    modulus: int
    precision: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.precision < 1 or len(self.coeffs) != self.precision:
            raise ValueError("coefficient list must match the stated precision")
        if self.modulus < 0:
            raise ValueError("modulus must be 0 (integers) or positive")
        if self.modulus:
            object.__setattr__(
                self, "coeffs", tuple(c % self.modulus for c in self.coeffs)
            )
        else:
            object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def scale(self, k: int) -> "QExpansion":
        return QExpansion(self.modulus, self.precision, [k * c for c in self.coeffs])

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        t = min(self.precision, other.precision)
        return QExpansion(
            self.modulus, t, [a - b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def truncate(self, t: int) -> "QExpansion":
        if t > self.precision:
            raise ValueError("cannot extend precision")
        return QExpansion(self.modulus, t, self.coeffs[:t])

    def to_jsonable(self) -> dict:
        return {
            "modulus": self.modulus,
            "precision": self.precision,
            "coeffs": list(self.coeffs),
        }

    @classmethod
    def from_jsonable(cls, payload: dict) -> "QExpansion":
        return cls(payload["modulus"], payload["precision"], payload["coeffs"])


def sigma_sieve(precision: int, power: int = 1) -> list[int]:
    """sigma_power(n) for 0 <= n < precision, with the unused slot 0 at n=0."""
    out = [0] * precision
    for d in range(1, precision):
        dk = d**power
        for m in range(d, precision, d):
            out[m] += dk
    return out


def series_e(precision: int) -> QExpansion:
    """1 - 24 sum_{n>=1} sigma(n) q^n."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    sig = sigma_sieve(precision)
    return QExpansion(0, precision, [1] + [-24 * s for s in sig[1:]])


def series_E4(precision: int) -> QExpansion:
    """1 + 240 sum_{n>=1} sigma_3(n) q^n."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    sig = sigma_sieve(precision, 3)
    return QExpansion(0, precision, [1] + [240 * s for s in sig[1:]])


def level_raise(g: QExpansion, p: int, k: int, sign) -> QExpansion:
    """g(z) - p^{k-1} g(pz) for sign '+', g(z) - g(pz) for sign '-'."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if sign in ("+", 1):
        c = p ** (k - 1)
    elif sign in ("-", -1):
        c = 1
    else:
        raise ValueError("sign must be '+' or '-'")
    coeffs = list(g.coeffs)
    for j in range(0, g.precision, p):
        coeffs[j] -= c * g.coeffs[j // p]
    return QExpansion(g.modulus, g.precision, coeffs)


def eisenstein_series(n, m: int, precision: int = 200) -> QExpansion:
    """Apply the plus word over primes of M, then the minus word over N/M, to e.

    M = 1 is allowed (pure minus word).  The constant term comes out as
    prod_{p | M} (1 - p) when M = N and 0 otherwise; this is asserted.
    """
    level = n if isinstance(n, SquareFreeLevel) else SquareFreeLevel(n)
    m = int(m)
    if m < 1 or level.value % m:
        raise ValueError(f"M must divide {level.value}, got {m}")
    f = series_e(precision)
    for p in level.primes:
        if m % p == 0:
            f = level_raise(f, p, 2, "+")
    for q in level.primes:
        if m % q:
            f = level_raise(f, q, 2, "-")
    expected = 1
    if m == level.value:
        for p in level.primes:
            expected *= 1 - p
    else:
        expected = 0
    assert f.coeffs[0] == expected, "constant term of the operator word is forced"
    return f


def hecke_on_expansion(f: QExpansion, n: int, level) -> QExpansion:
    """Weight-2 Hecke action on coefficients, truncated to the usable prefix.

    b_j = sum over d | gcd(n, j) with gcd(d, N) = 1 of d * a_{nj/d^2}.
    The result carries floor((T-1)/n) + 1 coefficients; fewer than 2 is an
    error because nothing could be compared against it.
    """
    if n < 1:
        raise ValueError("operator index must be positive")
    nvalue = level.value if isinstance(level, SquareFreeLevel) else int(level)
    usable = (f.precision - 1) // n + 1
    if usable < 2:
        raise ValueError(
            f"usable precision {usable} after T_{n} on {f.precision} terms"
        )
    coeffs = []
    for j in range(usable):
        acc = 0
        g = gcd(n, j) if j else n
        for d in range(1, g + 1):
            if g % d == 0 and gcd(d, nvalue) == 1:
                acc += d * f.coeffs[n * j // (d * d)]
        coeffs.append(acc)
    return QExpansion(f.modulus, usable, coeffs)


def eigenform_violations(
    n, m: int, precision: int = 200, prime_bound: int = 20
) -> list[str]:
    """Check the eigenvalue pattern of the series for (N, M); empty list = pass.

    T_r acts by r + 1 for primes r not dividing N, U_p by 1 for p | M and
    U_q by q for q | N/M, all compared on the usable coefficient prefix.
    """
    level = n if isinstance(n, SquareFreeLevel) else SquareFreeLevel(n)
    if m == 1 or level.value % m:
        raise ValueError(f"M must be a divisor of {level.value} other than 1")
    f = eisenstein_series(level, m, precision)
    bad = []
    for r in range(2, prime_bound):
        if not is_prime(r):
            continue
        image = hecke_on_expansion(f, r, level)
        if level.value % r == 0:
            scale = 1 if m % r == 0 else r
            label = f"U_{r} -> {scale}"
        else:
            scale = r + 1
            label = f"T_{r} -> {scale}"
        expected = f.truncate(image.precision).scale(scale)
        if image != expected:
            bad.append(label)
    return bad


@dataclass(frozen=True)
class ResidueReport:
    cusp: int
    value: Fraction


def residues(n, m: int) -> list[ResidueReport]:
    """Closed-form residues of the (N, M) series at the cusps that carry one.

    Reported: the width-N cusp (the constant term), every cusp N/p when
    M = N, and the cusp M when M < N.  The M < N value is rational with
    denominator dividing N/M and is reported unreduced against any width
    convention.
    """
    level = n if isinstance(n, SquareFreeLevel) else SquareFreeLevel(n)
    m = int(m)
    if m == 1 or m < 1 or level.value % m:
        raise ValueError(f"M must be a divisor of {level.value} other than 1")
    phi, _, omega = phi_psi_omega(level)
    reports = []
    if m == level.value:
        reports.append(ResidueReport(level.value, Fraction((-1) ** omega * phi)))
        for p in level.primes:
            reports.append(
                ResidueReport(
                    level.value // p, Fraction((-1) ** (omega - 1) * phi)
                )
            )
    else:
        reports.append(ResidueReport(level.value, Fraction(0)))
        omega_m = sum(1 for p in level.primes if m % p == 0)
        psi_c = phi_psi_omega(level.value // m)[1]
        reports.append(
            ResidueReport(
                m,
                (-1) ** omega_m * phi * psi_c * Fraction(m, level.value),
            )
        )
    return reports


@dataclass(frozen=True)
class IdentityCheck:
    ok: bool
    first_fail: int | None
    precision: int


def level_lowering_identity_check(
    n, p: int, precision: int = 500
) -> IdentityCheck:
    """Check E_{1,N} - E_{p,N} = (p-1) E_{1,D}(q^p) with D = N/p, coefficientwise."""
    level = n if isinstance(n, SquareFreeLevel) else SquareFreeLevel(n)
    if p not in level.primes:
        raise ValueError(f"{p} does not divide {level.value}")
    d = level.value // p
    if d <= 1:
        raise ValueError("the lowered level must be greater than 1")
    if precision < 2 * p:
        raise ValueError("precision must reach at least 2p")
    lhs = eisenstein_series(level, 1, precision) - eisenstein_series(
        level, p, precision
    )
    inner = eisenstein_series(SquareFreeLevel(d), 1, (precision - 1) // p + 1)
    for j in range(precision):
        rhs = (p - 1) * inner.coeffs[j // p] if j % p == 0 else 0
        if lhs.coeffs[j] != rhs:
            return IdentityCheck(False, j, precision)
    return IdentityCheck(True, None, precision)


def weight4_G(primes, precision: int = 200) -> QExpansion:
    """Plus word in weight 4 over the given primes, applied to E4.

    The constant term is asserted equal to prod (1 - p^3).
    """
    primes = [int(p) for p in primes]
    if not primes:
        raise ValueError("prime list must be nonempty")
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    f = series_E4(precision)
    expected = 1
    for p in primes:
        f = level_raise(f, p, 4, "+")
        expected *= 1 - p**3
    assert f.coeffs[0] == expected, "constant term of the weight-4 word is forced"
    return f
