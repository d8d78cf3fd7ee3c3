"""Sparse multivariate polynomials with exact coefficients.

Exponent tuples map to Fraction or QuadExt coefficients; zero coefficients are
never stored.  Variables print as z1, z2, ...
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Q0, Q1, is_rational, parse_scalar, scalar_str


def _as_coeff(c):
    return Fraction(c) if isinstance(c, int) else c


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                c = _as_coeff(c)
                if not c:
                    continue
                if len(exps) != nvars:
                    raise ValueError(f"exponent tuple {exps} does not match {nvars} variables")
                clean[tuple(exps)] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i, power=1):
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): Q1})

    # -- ring operations -------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Q0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = Poly(self.nvars)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly(self.nvars)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _as_coeff(other)
            if not c:
                return Poly(self.nvars)
            out = Poly(self.nvars)
            out.terms = {e: v * c for e, v in self.terms.items()}
            return out
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, Q0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        out = Poly(self.nvars)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            raise TypeError("polynomial division is not supported")
        out = Poly(self.nvars)
        out.terms = {e: v / other for e, v in self.terms.items()}
        return out

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(self.nvars, Q1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(self.nvars, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- queries ----------------------------------------------------------
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Q0)

    def homogeneous_part(self, deg: int) -> "Poly":
        out = Poly(self.nvars)
        out.terms = {e: c for e, c in self.terms.items() if sum(e) == deg}
        return out

    def is_rational(self) -> bool:
        return all(is_rational(c) for c in self.terms.values())

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        total = Q0
        for e, c in self.terms.items():
            val = c
            for x, k in zip(point, e):
                for _ in range(k):
                    val = val * x
            total = total + val
        return total

    def diff(self, i: int) -> "Poly":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        out = Poly(self.nvars)
        out.terms = terms
        return out

    # -- substitutions ------------------------------------------------------
    def shift(self, deltas) -> "Poly":
        """Substitute z_i -> z_i + deltas[i] for every variable."""
        out = self
        for i, delta in enumerate(deltas):
            if not delta:
                continue
            new = Poly(self.nvars)
            zi_plus = Poly.var(self.nvars, i) + Poly.const(self.nvars, delta)
            powers = {0: Poly.const(self.nvars, Q1)}
            for e, c in out.terms.items():
                k = e[i]
                if k not in powers:
                    acc = powers[max(powers)]
                    for j in range(max(powers) + 1, k + 1):
                        acc = acc * zi_plus
                        powers[j] = acc
                rest = list(e)
                rest[i] = 0
                mono = Poly(self.nvars, {tuple(rest): c})
                new = new + mono * powers[k]
            out = new
        return out

    def permute(self, perm) -> "Poly":
        """Relabel variables: z_i -> z_{perm[i]}."""
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * self.nvars
            for i, k in enumerate(e):
                e2[perm[i]] = k
            terms[tuple(e2)] = c
        out = Poly(self.nvars)
        out.terms = terms
        return out

    def flip_sign(self, i: int) -> "Poly":
        """Substitute z_i -> -z_i."""
        terms = {e: (-c if e[i] % 2 else c) for e, c in self.terms.items()}
        out = Poly(self.nvars)
        out.terms = terms
        return out

    def substitute(self, polys) -> "Poly":
        """Evaluate at polynomial arguments (all in the same target ring)."""
        if len(polys) != self.nvars:
            raise ValueError("argument count mismatch")
        target = polys[0].nvars if polys else 0
        total = Poly(target)
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for p, k in zip(polys, e):
                if k:
                    term = term * p ** k
            total = total + term
        return total

    # -- io -----------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]))

    def to_jsonable(self):
        return {
            "vars": self.nvars,
            "terms": [{"exps": list(e), "coeff": scalar_str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_jsonable(cls, data) -> "Poly":
        return cls(data["vars"], {tuple(t["exps"]): parse_scalar(t["coeff"]) for t in data["terms"]})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = [f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
            cs = scalar_str(c)
            if factors:
                body = "*".join(factors)
                parts.append(body if cs == "1" else (f"-{body}" if cs == "-1" else f"{cs}*{body}"))
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")
