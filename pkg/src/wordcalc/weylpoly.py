"""The polynomial side: power sums, signed-permutation invariance, top symbols.

Invariants of the signed-permutation group are symmetric polynomials in the
squared variables, so the even power sums p_k = sum_j zeta_j^(2k) generate
them; Newton's identities make the change of basis exact.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import ceil

from . import linalg
from .liealg import CartanData, GradedLieAlgebra, IwasawaData
from .pbw import gamma, realize
from .poly import Poly
from .scalars import Q0, Q1
from .words import MINUS, PLUS, Word, is_leaf, j_set, laplacian_word, letter_symbols

InvariantPolynomial = Poly


def power_sum(k: int, r: int) -> Poly:
    """p_k = zeta_1^(2k) + ... + zeta_r^(2k)."""
    if k < 1 or r < 1:
        raise ValueError("k and r must be positive")
    return Poly(r, {tuple(2 * k if i == j else 0 for i in range(r)): Q1 for j in range(r)})


def is_weyl_invariant(p: Poly, r: int, family: str = "C") -> bool:
    """Invariance under all coordinate permutations and sign flips.

    The C and BC families share the signed-permutation Weyl group, so the
    `family` argument only documents intent.
    """
    if family not in ("C", "BC"):
        raise ValueError("family must be 'C' or 'BC'")
    if p.nvars != r:
        raise ValueError("variable count mismatch")
    if p.flip_sign(0) != p:
        return False
    for i in range(r - 1):
        perm = list(range(r))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if p.permute(perm) != p:
            return False
    return True


def _elementary_polys(r: int) -> list[Poly]:
    """e_1..e_r as polynomials in r variables."""
    out = []
    for k in range(1, r + 1):
        terms = {}
        for combo in itertools.combinations(range(r), k):
            e = [0] * r
            for i in combo:
                e[i] = 1
            terms[tuple(e)] = Q1
        out.append(Poly(r, terms))
    return out


def _newton_elementary_in_power_sums(r: int) -> list[Poly]:
    """e_k expressed in the power sums t_1..t_r, via k*e_k = sum (-1)^(i-1) e_(k-i) t_i."""
    es = [Poly.const(r, Q1)]
    for k in range(1, r + 1):
        acc = Poly(r)
        for i in range(1, k + 1):
            term = es[k - i] * Poly.var(r, i - 1)
            acc = acc + (term if i % 2 else -term)
        es.append(acc / Fraction(k))
    return es[1:]


def express_in_power_sums(p: Poly, r: int) -> Poly:
    """The unique P with p = P(p_1, ..., p_r), as a polynomial in t_1..t_r.

    Requires Weyl invariance.  A homogeneous input of degree 2k with k <= r
    only involves t_1..t_k.
    """
    if not is_weyl_invariant(p, r):
        raise ValueError("polynomial is not Weyl invariant")
    # rewrite in the squared variables
    squares = {}
    for e, c in p.terms.items():
        if any(x % 2 for x in e):
            raise ValueError("invariant polynomial has an odd exponent")
        squares[tuple(x // 2 for x in e)] = c
    q = Poly(r, squares)
    # symmetric -> elementary, by leading-term subtraction
    elem = _elementary_polys(r)
    coef_in_e = Poly(r)
    while q:
        lead = max(q.terms)
        c = q.terms[lead]
        exps = list(lead) + [0]
        e_exps = [exps[i] - exps[i + 1] for i in range(r)]
        if any(x < 0 for x in e_exps):
            raise RuntimeError("leading exponent is not a partition; input was not symmetric")
        mono = Poly.const(r, c)
        for i, k in enumerate(e_exps):
            if k:
                mono = mono * elem[i] ** k
        q = q - mono
        coef_in_e = coef_in_e + Poly(r, {tuple(e_exps): c})
    # elementary -> power sums
    newton = _newton_elementary_in_power_sums(r)
    return coef_in_e.substitute(newton)


# ---------------------------------------------------------------------------
# word symbols
# ---------------------------------------------------------------------------

def _pair_with_zeta(v, cartan: CartanData) -> Poly:
    """(v | zeta) as a linear polynomial, zeta = sum_j zeta_j A_j."""
    r = cartan.r
    terms = {}
    for j in range(r):
        c = cartan.algebra.form_pair(v, cartan.A[j])
        if c:
            e = [0] * r
            e[j] = 1
            terms[tuple(e)] = c
    return Poly(r, terms)


def top_symbol(w: Word, algebra: GradedLieAlgebra, cartan: CartanData) -> Poly:
    """Candidate top-degree term of the realized word's Harish-Chandra image.

    Sums, over one index per edge, the product over letters of the pairing of
    the evaluated letter with zeta.  For tree words this equals c0 times the
    power sum of degree = word length, and it is exactly the top-degree part
    of gamma(realize(w)) whenever no letter factor loses its Cartan part.
    """
    xs, ys = algebra.dual_bases()
    n = len(xs)
    js = sorted(j_set(w))
    from .pbw import _letter_vector

    total = Poly(cartan.r)
    for combo in itertools.product(range(n), repeat=len(js)):
        assignment = dict(zip(js, combo))
        prod = Poly.const(cartan.r, Q1)
        for letter in w.letters:
            prod = prod * _pair_with_zeta(_letter_vector(letter, assignment, algebra, xs, ys), cartan)
            if not prod:
                break
        total = total + prod
    return total


# ---------------------------------------------------------------------------
# letter shapes and the closed bracket formula
# ---------------------------------------------------------------------------

def shape_sign(shape) -> int:
    return shape if isinstance(shape, int) else shape_sign(shape[0])


def shape_size(shape) -> int:
    return 1 if isinstance(shape, int) else sum(shape_size(c) for c in shape)


def shape_depth(shape) -> int:
    return 0 if isinstance(shape, int) else 1 + max(shape_depth(c) for c in shape)


def validate_shape(shape):
    """A letter shape: leaves are signs, triples alternate as (s, -s, s)."""
    if isinstance(shape, int):
        if shape not in (PLUS, MINUS):
            raise ValueError("leaf shape must be +1 or -1")
        return
    left, mid, right = shape
    if shape_sign(left) != shape_sign(right) or shape_sign(mid) == shape_sign(left):
        raise ValueError("triple shape violates the sign pattern")
    for c in shape:
        validate_shape(c)


def mu_eval(shape, cartan: CartanData) -> list[Poly]:
    """Closed form of a letter evaluated at zeta^+ / zeta^- slots.

    Returns sum_j zeta_j^d E_j (or F_j for negative sign) as a coordinate
    vector of polynomials, d being the symbol count of the shape.
    """
    validate_shape(shape)
    d = shape_size(shape)
    r = cartan.r
    vectors = cartan.E if shape_sign(shape) == PLUS else cartan.F
    out = [Poly(r) for _ in range(cartan.algebra.dim)]
    for j in range(r):
        e = [0] * r
        e[j] = d
        mono = Poly(r, {tuple(e): Q1})
        for i, x in enumerate(vectors[j]):
            if x:
                out[i] = out[i] + mono * x
    return out


def mu_eval_bracket(shape, cartan: CartanData) -> list[Poly]:
    """Direct nested-bracket evaluation of a shape; the oracle for mu_eval."""
    validate_shape(shape)
    r = cartan.r
    algebra = cartan.algebra
    if isinstance(shape, int):
        vectors = cartan.E if shape == PLUS else cartan.F
        out = [Poly(r) for _ in range(algebra.dim)]
        for j in range(r):
            e = [0] * r
            e[j] = 1
            mono = Poly(r, {tuple(e): Q1})
            for i, x in enumerate(vectors[j]):
                if x:
                    out[i] = out[i] + mono * x
        return out
    left = mu_eval_bracket(shape[0], cartan)
    mid = mu_eval_bracket(shape[1], cartan)
    right = mu_eval_bracket(shape[2], cartan)
    return algebra.bracket_vec(algebra.bracket_vec(left, mid), right)


# ---------------------------------------------------------------------------
# independence and the Laplacian decomposition
# ---------------------------------------------------------------------------

def independence_certificate(polys: list[Poly]) -> bool:
    """Jacobian full-rank certificate at two fixed rational points.

    True certifies algebraic independence; False only reports that neither
    generic point certified it.
    """
    if not polys:
        return True
    r = polys[0].nvars
    if len(polys) > r:
        return False
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    points = [[Fraction(i + 1) for i in range(r)], [Fraction(primes[i]) for i in range(r)]]
    for point in points:
        jac = [[p.diff(i).evaluate(point) for i in range(r)] for p in polys]
        if linalg.rank(jac) == len(polys):
            return True
    return False


def laplacian_gamma(m: int, algebra: GradedLieAlgebra, iw: IwasawaData) -> Poly:
    """gamma of the realized Laplacian word y1..ym x1..xm."""
    return gamma(realize(laplacian_word(m), algebra), iw)


def laplacian_decomposition(m: int, algebra: GradedLieAlgebra, cartan: CartanData,
                            iw: IwasawaData):
    """Express gamma(L_m) in the power sums p_1..p_ceil(m/2), exactly.

    Returns (leading, remainder): the coefficient of p_(k+1) for odd m = 2k+1
    (zero for even m) and the leftover polynomial in t_1..t_k.  The linear
    system must be consistent with zero residual; anything else raises.
    """
    r = cartan.r
    kmax = ceil(m / 2)
    if kmax > r:
        raise ValueError(f"m={m} needs p_{kmax} but the rank is only {r}")
    target = laplacian_gamma(m, algebra, iw)
    if not target.is_rational():
        raise RuntimeError("gamma of the Laplacian word has irrational coefficients")
    # monomials in p_1..p_kmax of weighted degree <= 2m
    monos = []

    def grow(prefix, weight, i):
        if i == kmax:
            monos.append(tuple(prefix))
            return
        max_pow = (2 * m - weight) // (2 * (i + 1))
        for a in range(max_pow + 1):
            grow(prefix + [a], weight + 2 * (i + 1) * a, i + 1)

    grow([], 0, 0)
    monos.sort()
    p_polys = [power_sum(k, r) for k in range(1, kmax + 1)]
    expanded = []
    for mono in monos:
        q = Poly.const(r, Q1)
        for i, a in enumerate(mono):
            if a:
                q = q * p_polys[i] ** a
        expanded.append(q)
    rows = sorted({e for q in expanded for e in q.terms} | set(target.terms))
    matrix = [[q.terms.get(e, Q0) for q in expanded] for e in rows]
    rhs = [target.terms.get(e, Q0) for e in rows]
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        raise RuntimeError("gamma(L_m) does not lie in the power-sum span")
    residual = target
    for c, q in zip(sol, expanded):
        residual = residual - q * c
    if residual:
        raise RuntimeError("nonzero residual in the power-sum expression")
    decomposition = Poly(kmax, dict(zip(monos, sol)))
    if m % 2 == 0:
        return Fraction(0), decomposition
    k = (m - 1) // 2
    pure = tuple(1 if i == k else 0 for i in range(kmax))
    leading = decomposition.terms.get(pure, Q0)
    rest = decomposition - Poly(kmax, {pure: leading})
    if any(e[k] for e in rest.terms):
        raise RuntimeError("unexpected mixed terms in the top generator")
    remainder = Poly(k, {e[:k]: c for e, c in rest.terms.items()})
    return Fraction(leading), remainder
