"""Exact-where-possible nonnegative reals.

Thresholds are e-th roots of rationals, so a value is kept either exactly as
``radicand ** (1 / root)`` with a rational radicand, or approximately by its
base-2 logarithm.  Products, quotients, integer powers and roots of exact
values stay exact; anything touching an irrational constant (``e``,
``log2 n`` for n not a power of two) drops to log space.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

LOG2_TOL = 1e-9
# Above this lcm of roots the exact comparison is skipped.
_MAX_EXACT_ROOT = 4096


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for nonnegative integer x."""
    if x < 2 or k == 1:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            return r
        r = s


def _exact_root(q: Fraction, k: int):
    a, b = _iroot(q.numerator, k), _iroot(q.denominator, k)
    if a ** k == q.numerator and b ** k == q.denominator:
        return Fraction(a, b)
    return None


def _small_prime_factors(k: int):
    out, d = [], 2
    while d * d <= k:
        while k % d == 0:
            out.append(d)
            k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def _frac_log2(q: Fraction) -> float:
    if q == 0:
        return -math.inf
    return math.log2(q.numerator) - math.log2(q.denominator)


class Real:
    """A nonnegative real number, exact radical or log2-space approximation."""

    __slots__ = ("radicand", "root", "log2")

    def __init__(self, radicand=None, root=1, log2=None):
        if radicand is not None:
            radicand = Fraction(radicand)
            if radicand < 0:
                raise ValueError("Real values are nonnegative")
            radicand, root = self._normalize(radicand, int(root))
            self.radicand = radicand
            self.root = root
            self.log2 = _frac_log2(radicand) / root
        else:
            if log2 is None:
                raise ValueError("need radicand or log2")
            self.radicand = None
            self.root = 1
            self.log2 = float(log2)

    @staticmethod
    def _normalize(q, root):
        if root < 1:
            raise ValueError("root must be positive")
        if q in (0, 1):
            return q, 1
        for d in _small_prime_factors(root):
            r = _exact_root(q, d)
            if r is None:
                continue
            q, root = r, root // d
        return q, root

    # constructors -------------------------------------------------------

    @classmethod
    def exact(cls, x) -> "Real":
        return cls(Fraction(x))

    @classmethod
    def radical(cls, radicand, root: int) -> "Real":
        return cls(Fraction(radicand), root)

    @classmethod
    def approx(cls, x: float) -> "Real":
        if x < 0:
            raise ValueError("Real values are nonnegative")
        return cls(log2=math.log2(x) if x > 0 else -math.inf)

    @classmethod
    def from_log2(cls, v: float) -> "Real":
        return cls(log2=v)

    @classmethod
    def coerce(cls, x) -> "Real":
        if isinstance(x, Real):
            return x
        if isinstance(x, (int, Rational)):
            return cls.exact(x)
        if isinstance(x, str):
            return parse_real(x)
        return cls.approx(float(x))

    # structure ------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.radicand is not None

    @property
    def is_zero(self) -> bool:
        return self.log2 == -math.inf

    def as_fraction(self):
        """The value as a Fraction when it is rational, else None."""
        if self.is_exact and self.root == 1:
            return self.radicand
        return None

    def __float__(self) -> float:
        q = self.as_fraction()
        if q is not None:
            return float(q)
        if self.log2 == -math.inf:
            return 0.0
        return 2.0 ** self.log2

    # arithmetic -------------------------------------------------------------

    def __mul__(self, other):
        other = Real.coerce(other)
        if self.is_zero or other.is_zero:
            return Real.exact(0) if (self.is_exact or other.is_exact) else Real(log2=-math.inf)
        if self.is_exact and other.is_exact:
            L = math.lcm(self.root, other.root)
            if L <= _MAX_EXACT_ROOT:
                return Real(self.radicand ** (L // self.root) * other.radicand ** (L // other.root), L)
        return Real(log2=self.log2 + other.log2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Real.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero Real")
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return Real.coerce(other) / self

    def reciprocal(self) -> "Real":
        if self.is_zero:
            raise ZeroDivisionError("reciprocal of zero")
        if self.is_exact:
            return Real(1 / self.radicand, self.root)
        return Real(log2=-self.log2)

    def __pow__(self, k: int):
        k = int(k)
        if k == 0:
            return Real.exact(1)
        if k < 0:
            return self.reciprocal() ** (-k)
        if self.is_exact:
            g = math.gcd(k, self.root)
            return Real(self.radicand ** (k // g), self.root // g)
        return Real(log2=self.log2 * k)

    def nth_root(self, k: int) -> "Real":
        if k < 1:
            raise ValueError("root index must be positive")
        if self.is_exact and self.root * k <= _MAX_EXACT_ROOT:
            return Real(self.radicand, self.root * k)
        return Real(log2=self.log2 / k)

    # comparison -------------------------------------------------------------

    def compare(self, other, tol: float = LOG2_TOL) -> int:
        """Three-way comparison; exact for exact operands, tolerant in log space."""
        other = Real.coerce(other)
        a, b = self.log2, other.log2
        if a == b == -math.inf:
            return 0
        if a == -math.inf:
            return -1
        if b == -math.inf:
            return 1
        d = a - b
        if abs(d) > 1e-7 * max(1.0, abs(a), abs(b)):
            return 1 if d > 0 else -1
        if self.is_exact and other.is_exact:
            L = math.lcm(self.root, other.root)
            if L <= _MAX_EXACT_ROOT:
                x = self.radicand ** (L // self.root)
                y = other.radicand ** (L // other.root)
                return (x > y) - (x < y)
        if abs(d) <= tol:
            return 0
        return 1 if d > 0 else -1

    def near(self, other, tol: float = LOG2_TOL) -> bool:
        """True when the comparison had to fall back on the log-space tolerance."""
        other = Real.coerce(other)
        if self.is_exact and other.is_exact:
            return False
        if self.is_zero or other.is_zero:
            return False
        return abs(self.log2 - other.log2) <= tol

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        try:
            return self.compare(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    def __repr__(self):
        if self.is_exact:
            if self.root == 1:
                return f"Real({self.radicand})"
            return f"Real(({self.radicand})^(1/{self.root}))"
        return f"Real(2^{self.log2:.12g})"

    def __str__(self):
        return format_real(self)

    def to_json(self) -> dict:
        out = {"log2": _json_float(self.log2), "approx": float(self)}
        if self.is_exact:
            out["exact"] = format_real(self)
        return out


def _json_float(x):
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return x


def format_real(x: Real) -> str:
    if x.is_exact:
        if x.root == 1:
            return str(x.radicand)
        return f"({x.radicand})^(1/{x.root})"
    return f"{float(x):.12g}"


def parse_real(text: str) -> Real:
    """Parse ``3/720``, ``0.06``, ``(3/720)^(1/3)`` or ``2^-10``."""
    t = text.strip().replace(" ", "")
    if t.endswith(")") and ")^(1/" in t:
        base, _, k = t.rpartition(")^(1/")
        return Real.radical(Fraction(base.lstrip("(")), int(k.rstrip(")")))
    if t.startswith("2^"):
        return Real.exact(Fraction(2) ** int(t[2:]))
    try:
        return Real.exact(Fraction(t))
    except ValueError:
        return Real.approx(float(t))


ProbValue = Real


def prob(x) -> Real:
    """Coerce to Real and check the value lies in [0, 1]."""
    p = Real.coerce(x)
    if p.compare(1) > 0:
        raise ValueError(f"probability {p} exceeds 1")
    return p


E = Real.approx(math.e)


def log2n(n: int) -> Real:
    """log_2 n, exact when n is a power of two."""
    if n >= 1 and n & (n - 1) == 0:
        return Real.exact(n.bit_length() - 1)
    return Real.approx(math.log2(n))


def falling_factorial(n: int, a: int) -> int:
    """(n)_a = n (n-1) ... (n-a+1); zero when a > n."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    if a > n:
        return 0
    return math.perm(n, a)
