"""Universal enveloping algebra with PBW normal forms.

Elements are sparse maps from ordered monomials (tuples of basis indices,
non-decreasing in the active ordering) to exact coefficients.  Straightening
x*y -> y*x + [x,y] is memoized pairwise: the core operation multiplies a
normal monomial by one generator on the right.

Two orderings matter: the graded one (q- < q+ < h), whose h-tailed monomials
span the h-ideal, and the Iwasawa one (n < a < h), where dropping n-leading
and h-tailed monomials leaves the pure Cartan part.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .liealg import CartanData, GradedLieAlgebra, H, IwasawaData, QMINUS, QPLUS
from .poly import Poly
from .scalars import Q0, Q1, parse_scalar, scalar_str
from .words import PLUS, Word, WordCombination, is_leaf, j_set


class PBWBasis:
    """An ordered basis context for normal forms."""

    def __init__(self, dim: int, bracket, order, names, tag: str, algebra=None):
        if sorted(order) != list(range(dim)):
            raise ValueError("ordering is not a permutation of the basis")
        self.dim = dim
        self.bracket = bracket            # (i, j) -> dict[k -> coeff]
        self.order = tuple(order)
        self.names = list(names)
        self.tag = tag
        self.algebra = algebra
        self.rank = [0] * dim
        for pos, idx in enumerate(order):
            self.rank[idx] = pos
        self._mul_memo: dict = {}

    def __repr__(self):
        return f"PBWBasis({self.tag}, order={self.order})"

    # -- core straightening -------------------------------------------------
    def mul_mono_gen(self, mono: tuple, g: int) -> dict:
        """Normal form of (normal monomial) * x_g as a term dict."""
        key = (mono, g)
        cached = self._mul_memo.get(key)
        if cached is not None:
            return cached
        rank = self.rank
        if not mono or rank[mono[-1]] <= rank[g]:
            result = {mono + (g,): Q1}
        else:
            v = mono[-1]
            head = mono[:-1]
            result = {}
            # head * (g v) after the swap ...
            for mu, c in self.mul_mono_gen(head, g).items():
                for nu, c2 in self.mul_mono_gen(mu, v).items():
                    s = result.get(nu, Q0) + c * c2
                    if s:
                        result[nu] = s
                    else:
                        result.pop(nu, None)
            # ... plus head * [v, g]
            for k, ck in self.bracket(v, g).items():
                for nu, c2 in self.mul_mono_gen(head, k).items():
                    s = result.get(nu, Q0) + ck * c2
                    if s:
                        result[nu] = s
                    else:
                        result.pop(nu, None)
        self._mul_memo[key] = result
        return result

    def mul_terms_gen(self, terms: dict, g: int, scale=Q1) -> dict:
        out = {}
        for mono, c in terms.items():
            for nu, c2 in self.mul_mono_gen(mono, g).items():
                s = out.get(nu, Q0) + c * c2 * scale
                if s:
                    out[nu] = s
                else:
                    out.pop(nu, None)
        return out

    def normalize_terms(self, raw: dict) -> dict:
        out = {}
        for mono, coeff in raw.items():
            if not coeff:
                continue
            acc = {(): Q1}
            for g in mono:
                acc = self.mul_terms_gen(acc, g)
            for nu, c in acc.items():
                s = out.get(nu, Q0) + coeff * c
                if s:
                    out[nu] = s
                else:
                    out.pop(nu, None)
        return out


def graded_ordering(algebra: GradedLieAlgebra) -> tuple:
    return tuple(algebra.indices_of(QMINUS) + algebra.indices_of(QPLUS) + algebra.indices_of(H))


def pbw_basis(algebra: GradedLieAlgebra, ordering=None) -> PBWBasis:
    """The PBW context of an algebra; defaults to the graded ordering."""
    if ordering is None:
        ordering = graded_ordering(algebra)
    ordering = tuple(ordering)
    cached = algebra._pbw_cache.get(ordering)
    if cached is None:
        cached = PBWBasis(algebra.dim, algebra.bracket_coords, ordering,
                          algebra.basis_names, f"{algebra.name}", algebra=algebra)
        algebra._pbw_cache[ordering] = cached
    return cached


class EnvElement:
    """Linear combination of PBW monomials, tagged with its basis ordering."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: PBWBasis, terms: dict | None = None, *, _normal: bool = False):
        self.basis = basis
        if terms is None:
            terms = {}
        if not _normal:
            terms = basis.normalize_terms(terms)
        self.terms = {m: c for m, c in terms.items() if c}

    # -- algebra --------------------------------------------------------------
    def _check(self, other: "EnvElement"):
        if self.basis is not other.basis:
            raise ValueError("elements live in different PBW contexts")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Q0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return EnvElement(self.basis, terms, _normal=True)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "EnvElement":
        c = Fraction(c) if isinstance(c, int) else c
        if not c:
            return EnvElement(self.basis, {}, _normal=True)
        return EnvElement(self.basis, {m: v * c for m, v in self.terms.items()}, _normal=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for m2, c2 in other.terms.items():
            acc = dict(self.terms)
            for g in m2:
                acc = self.basis.mul_terms_gen(acc, g)
            for nu, c in acc.items():
                s = out.get(nu, Q0) + c * c2
                if s:
                    out[nu] = s
                else:
                    out.pop(nu, None)
        return EnvElement(self.basis, out, _normal=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            return NotImplemented
        return self.basis is other.basis and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.basis), frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        rank = self.basis.rank
        return sorted(self.terms.items(), key=lambda item: (len(item[0]), [rank[i] for i in item[0]]))

    def to_jsonable(self):
        return {
            "ordering": [self.basis.names[i] for i in self.basis.order],
            "terms": [
                {"monomial": list(m), "coeff": scalar_str(c)}
                for m, c in self.sorted_terms()
            ],
        }

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            body = "*".join(self.basis.names[i] for i in m) if m else "1"
            parts.append(f"({scalar_str(c)})*{body}")
        return " + ".join(parts)


def normalize(algebra: GradedLieAlgebra, expr, ordering=None) -> EnvElement:
    """PBW normal form of a raw product expression.

    `expr` is a dict {index tuple: coeff} or an iterable of (coeff, indices);
    index tuples are products of basis vectors in writing order.
    """
    basis = pbw_basis(algebra, ordering)
    raw: dict = {}
    items = expr.items() if isinstance(expr, dict) else ((tuple(seq), c) for c, seq in expr)
    for mono, c in items:
        mono = tuple(mono)
        s = raw.get(mono, Q0) + (Fraction(c) if isinstance(c, int) else c)
        if s:
            raw[mono] = s
        else:
            raw.pop(mono, None)
    return EnvElement(basis, raw)


# ---------------------------------------------------------------------------
# realizing words
# ---------------------------------------------------------------------------

def _letter_vector(letter, assignment, algebra, xs, ys):
    if is_leaf(letter):
        sign, idx = letter
        return xs[assignment[idx]] if sign == PLUS else ys[assignment[idx]]
    _, left, mid, right = letter
    inner = algebra.bracket_vec(
        _letter_vector(left, assignment, algebra, xs, ys),
        _letter_vector(mid, assignment, algebra, xs, ys),
    )
    return algebra.bracket_vec(inner, _letter_vector(right, assignment, algebra, xs, ys))


def realize(w, algebra: GradedLieAlgebra, bases=None) -> EnvElement:
    """The enveloping-algebra element of a word or combination.

    Sums the letter products over one index per occurring pair, each running
    over the dual bases of q+ and q-; independent of the dual-basis choice.
    """
    if isinstance(w, WordCombination):
        basis = pbw_basis(algebra)
        total = EnvElement(basis, {})
        for wd, c in w.terms.items():
            total = total + realize(wd, algebra, bases).scale(c)
        return total
    xs, ys = bases if bases is not None else algebra.dual_bases()
    n = len(xs)
    basis = pbw_basis(algebra)
    js = sorted(j_set(w))
    raw: dict = {}
    for combo in itertools.product(range(n), repeat=len(js)):
        assignment = dict(zip(js, combo))
        vectors = [_letter_vector(let, assignment, algebra, xs, ys) for let in w.letters]
        # expand the product of coordinate vectors into monomials
        partial = {(): Q1}
        for vec in vectors:
            nxt: dict = {}
            entries = [(i, c) for i, c in enumerate(vec) if c]
            for mono, c in partial.items():
                for i, ci in entries:
                    s = nxt.get(mono + (i,), Q0) + c * ci
                    if s:
                        nxt[mono + (i,)] = s
                    else:
                        nxt.pop(mono + (i,), None)
            partial = nxt
        for mono, c in partial.items():
            s = raw.get(mono, Q0) + c
            if s:
                raw[mono] = s
            else:
                raw.pop(mono, None)
    return EnvElement(basis, raw)


# ---------------------------------------------------------------------------
# quotients and the Harish-Chandra map
# ---------------------------------------------------------------------------

def _require_graded(e: EnvElement, algebra: GradedLieAlgebra):
    if e.basis.order != graded_ordering(algebra):
        raise ValueError("element is not in the graded (q- < q+ < h) ordering")


def reduce_mod_h(e: EnvElement, algebra: GradedLieAlgebra | None = None) -> EnvElement:
    """Canonical coset representative modulo the left ideal U(g)h.

    In the graded ordering every normal monomial containing an h factor ends
    with it, so dropping those monomials is exact.
    """
    if algebra is None:
        algebra = e.basis.algebra
        if algebra is None:
            raise ValueError("pass the algebra explicitly for this element")
    _require_graded(e, algebra)
    h_set = set(algebra.indices_of(H))
    terms = {m: c for m, c in e.terms.items() if not (m and m[-1] in h_set)}
    return EnvElement(e.basis, terms, _normal=True)


def oracle_equiv(c1, c2, algebra: GradedLieAlgebra) -> bool:
    """Exact equality of realizations modulo the h-ideal."""
    if isinstance(c1, Word):
        c1 = WordCombination(c1)
    if isinstance(c2, Word):
        c2 = WordCombination(c2)
    diff = realize(c1 - c2, algebra)
    return reduce_mod_h(diff, algebra).is_zero()


def _iwasawa_pbw(iw: IwasawaData) -> PBWBasis:
    cached = getattr(iw, "_pbw", None)
    if cached is None:
        dim = iw.algebra.dim
        cached = PBWBasis(dim, iw.bracket_new, tuple(range(dim)),
                          [f"n{i}" for i in range(iw.n_dim)]
                          + [f"A{j + 1}" for j in range(iw.r)]
                          + [iw.algebra.basis_names[i] for i in iw.algebra.indices_of(H)],
                          f"{iw.algebra.name}|iwasawa")
        iw._pbw = cached
        iw._convert_cache = {(): {(): Q1}}
        iw._conv_table = [iw.convert_index(i) for i in range(dim)]
    return cached


def _convert_prefix(iw: IwasawaData, mono: tuple) -> dict:
    """Image of an old-basis monomial in the Iwasawa basis, modulo n-leading terms."""
    cache = iw._convert_cache
    hit = cache.get(mono)
    if hit is not None:
        return hit
    basis = _iwasawa_pbw(iw)
    prev = _convert_prefix(iw, mono[:-1])
    n_dim = iw.n_dim
    out: dict = {}
    for g2, cg in iw._conv_table[mono[-1]].items():
        for mu, c in prev.items():
            for nu, c2 in basis.mul_mono_gen(mu, g2).items():
                if nu and nu[0] < n_dim:
                    continue  # n-leading: dies under the projection, right-stable
                s = out.get(nu, Q0) + c * cg * c2
                if s:
                    out[nu] = s
                else:
                    out.pop(nu, None)
    cache[mono] = out
    return out


def a_part(e: EnvElement, iw: IwasawaData) -> Poly:
    """Projection to the polynomial part along n*U(g) + U(g)h.

    Re-expresses the element in the n < a < h ordered basis, drops n-leading
    and h-tailed monomials, and reads the surviving Cartan monomials as a
    polynomial via the invariant form: A_j corresponds to 2*c0*zeta_j.
    """
    algebra = iw.algebra
    _require_graded(e, algebra)
    _iwasawa_pbw(iw)
    r = iw.r
    n_dim = iw.n_dim
    two_c0 = 2 * iw.cartan.c0
    poly = Poly(r)
    for mono, coeff in e.terms.items():
        for nu, c in _convert_prefix(iw, mono).items():
            if nu and (nu[0] < n_dim or nu[-1] >= n_dim + r):
                continue
            exps = [0] * r
            for idx in nu:
                exps[idx - n_dim] += 1
            scale = coeff * c * two_c0 ** len(nu)
            poly = poly + Poly(r, {tuple(exps): scale})
    return poly


def gamma(e: EnvElement, iw: IwasawaData) -> Poly:
    """Harish-Chandra image: the Cartan projection followed by the rho shift.

    The shift moves each variable by the coordinate of the form-dual of rho,
    rho(A_j) / (2 c0).
    """
    base = a_part(e, iw)
    two_c0 = 2 * iw.cartan.c0
    deltas = [rj / two_c0 for rj in iw.rho]
    return base.shift(deltas)
