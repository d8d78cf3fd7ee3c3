"""Exact scalar arithmetic: rationals plus one real quadratic extension Q(sqrt(d)).

Rationals are plain ``fractions.Fraction``.  Irrational values are ``QuadExt``
instances ``a + b*sqrt(d)`` with ``b != 0``; every operation collapses back to
a Fraction as soon as the irrational part cancels, so zero tests, equality and
truthiness behave uniformly across both representations.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

Q0 = Fraction(0)
Q1 = Fraction(1)


def quad(a, b, d: int):
    """a + b*sqrt(d), collapsed to a Fraction when b == 0."""
    b = Fraction(b)
    if b == 0:
        return Fraction(a)
    return QuadExt(Fraction(a), b, int(d))


class QuadExt:
    """Element a + b*sqrt(d) of Q(sqrt(d)), with d > 1 squarefree and b != 0."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Fraction, b: Fraction, d: int):
        self.a = a
        self.b = b
        self.d = d

    def _split(self, other):
        # returns (a, b) parts of `other` in the same field, or None
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mixed quadratic extensions: sqrt({self.d}) vs sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Q0
        return None

    def __add__(self, other):
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        return quad(self.a + parts[0], self.b + parts[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        return quad(self.a - parts[0], self.b - parts[1], self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        a2, b2 = parts
        return quad(self.a * a2 + self.b * b2 * self.d, self.a * b2 + self.b * a2, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        parts = self._split(other)
        if parts is None:
            return NotImplemented
        a2, b2 = parts
        norm = a2 * a2 - b2 * b2 * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        # multiply by the conjugate of the denominator
        return quad((self.a * a2 - self.b * b2 * self.d) / norm,
                    (self.b * a2 - self.a * b2) / norm, self.d)

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        a2 = Fraction(other)
        norm = self.a * self.a - self.b * self.b * self.d
        return quad(a2 * self.a / norm, -a2 * self.b / norm, self.d)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = Q1
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return False  # b != 0, so never rational
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return True  # b != 0 and sqrt(d) irrational

    def _sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        if a == 0:
            return 1 if b > 0 else -1
        if b == 0:
            return 1 if a > 0 else (-1 if a < 0 else 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 against b^2 d
        if a * a > b * b * d:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def _cmp(self, other):
        diff = self - other
        if isinstance(diff, Fraction):
            return (diff > 0) - (diff < 0)
        return diff._sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __repr__(self):
        return scalar_str(self)


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def scalar_sign(x) -> int:
    if isinstance(x, QuadExt):
        return x._sign()
    return (x > 0) - (x < 0)


def scalar_str(x) -> str:
    """Deterministic text form: "p/q" for rationals, "a+b*sqrt(d)" otherwise."""
    if is_rational(x):
        return str(Fraction(x))
    a, b, d = x.a, x.b, x.d
    bs = f"{b}*sqrt({d})" if b > 0 else f"-{-b}*sqrt({d})"
    if a == 0:
        return bs
    return f"{a}+{bs}" if b > 0 else f"{a}{bs}"


def squarefree_decompose(n: int) -> tuple[int, int]:
    """n = s**2 * f with f squarefree; requires n > 0. Returns (s, f)."""
    if n <= 0:
        raise ValueError("need a positive integer")
    s, f = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                f *= p
        p += 1 if p == 2 else 2
    f *= n
    return s, f


def sqrt_rational(q: Fraction):
    """Exact square root of a non-negative rational.

    Returns a Fraction, or a QuadExt in Q(sqrt(f)) with f the squarefree part.
    Returns None for negative input.
    """
    q = Fraction(q)
    if q < 0:
        return None
    if q == 0:
        return Q0
    n = q.numerator * q.denominator
    s, f = squarefree_decompose(n)
    if f == 1:
        return Fraction(s, q.denominator)
    return QuadExt(Q0, Fraction(s, q.denominator), f)


def parse_scalar(text: str):
    """Inverse of scalar_str for the rational and quadratic formats."""
    text = text.strip()
    if "sqrt" not in text:
        return Fraction(text)
    # forms: "b*sqrt(d)", "a+b*sqrt(d)", "a-b*sqrt(d)" with b printed positive
    head, _, tail = text.partition("sqrt(")
    d = int(tail.rstrip(")"))
    head = head.rstrip("*")
    # split head into rational part and coefficient
    for cut in range(len(head) - 1, 0, -1):
        if head[cut] in "+-" and head[cut - 1] not in "+-/*":
            a = Fraction(head[:cut])
            b = Fraction(head[cut:].replace("+", "", 1)) if head[cut] == "+" else -Fraction(head[cut + 1:])
            return quad(a, b, d)
    return quad(0, Fraction(head) if head not in ("", "-") else Fraction(f"{head}1"), d)
