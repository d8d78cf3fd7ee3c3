"""Small exact linear algebra kit over Fraction / QuadExt scalars.

Matrices are lists of row lists.  Everything is division-based Gaussian
elimination; the scalar type only needs field operations and truthiness.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Q0, Q1, squarefree_decompose, sqrt_rational


def mat_identity(n):
    return [[Q1 if i == j else Q0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = [[Q0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for t in range(k):
            a = Ai[t]
            if not a:
                continue
            Bt = B[t]
            for j in range(m):
                if Bt[j]:
                    row[j] = row[j] + a * Bt[j]
    return out


def mat_vec(A, v):
    return [sum((a * x for a, x in zip(row, v) if a and x), Q0) for row in A]


def mat_trace(A):
    return sum((A[i][i] for i in range(len(A))), Q0)


def mat_transpose(A):
    return [list(col) for col in zip(*A)]


def rref(A):
    """Reduced row echelon form (copy) and the list of pivot columns."""
    M = [list(row) for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if M[i][c]), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A) -> int:
    return len(rref(A)[1])


def kernel(A):
    """Basis of the right null space, deterministic free-variable vectors."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q0] * cols
        v[fc] = Q1
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def solve(A, b):
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    for r in range(len(pivots) - 1, -1, -1):
        if pivots[r] == cols:
            return None  # pivot in the constants column
    x = [Q0] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols]
    return x


def solve_columns(A, B):
    """Solve A X = B column by column (B given as a matrix); None if any fails."""
    cols = len(B[0])
    out_cols = []
    for j in range(cols):
        x = solve(A, [row[j] for row in B])
        if x is None:
            return None
        out_cols.append(x)
    return mat_transpose(out_cols)


def inverse(A):
    n = len(A)
    X = solve_columns(A, mat_identity(n))
    if X is None or rank(A) < n:
        raise ValueError("matrix is singular")
    return X


def charpoly(A):
    """Monic characteristic polynomial by the Faddeev-LeVerrier recursion.

    Returns coefficients low-to-high: p[k] is the coefficient of t**k,
    p[n] == 1.
    """
    n = len(A)
    coeffs = [Q0] * (n + 1)
    coeffs[n] = Q1
    M = mat_identity(n)
    for k in range(1, n + 1):
        M = mat_mul(A, M)
        ck = -mat_trace(M) / k
        coeffs[n - k] = ck
        for i in range(n):
            M[i][i] = M[i][i] + ck
    return coeffs


def _int_divisors(n: int):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _poly_eval(p, x):
    acc = Q0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_deflate(p, root):
    """Divide p by (t - root); assumes exact divisibility."""
    n = len(p) - 1
    out = [Q0] * n
    acc = p[n]
    out[n - 1] = acc
    for k in range(n - 1, 0, -1):
        acc = p[k] + root * acc
        out[k - 1] = acc
    return out


def rational_roots(p):
    """All rational roots with multiplicity, plus the deflated remainder.

    p: Fraction coefficients low-to-high.  Returns (roots, remainder) where
    roots is a list of (root, multiplicity).
    """
    p = list(p)
    while len(p) > 1 and not p[-1]:
        p.pop()
    roots = []
    # strip zero roots
    z = 0
    while len(p) > 1 and p[0] == 0:
        p = p[1:]
        z += 1
    if z:
        roots.append((Q0, z))
    if len(p) <= 1:
        return roots, p
    from math import lcm

    den = lcm(*[c.denominator for c in p])
    ip = [int(c * den) for c in p]
    if ip[0] == 0:
        cands = []
    else:
        cands = sorted(
            {Fraction(s * num, d) for num in _int_divisors(ip[0]) for d in _int_divisors(ip[-1]) for s in (1, -1)}
        )
    for cand in cands:
        mult = 0
        while len(p) > 1 and _poly_eval(p, cand) == 0:
            p = _poly_deflate(p, cand)
            mult += 1
        if mult:
            roots.append((cand, mult))
        if len(p) <= 1:
            break
    return roots, p


def spectrum_in_quadratic(p, d_hint: int | None = None):
    """Roots of a rational polynomial inside Q(sqrt(d)).

    Works for the spectra that arise here: after removing rational roots the
    remainder must be even, t**2 -> s, with rational roots s whose square
    roots live in a single quadratic extension.  Returns (eigs, d) where eigs
    is a list of (value, multiplicity) and d extends d_hint (or None if
    everything stayed rational).  Raises ValueError otherwise.
    """
    roots, rem = rational_roots(list(p))
    eigs = [(r, m) for r, m in roots]
    d = d_hint
    if len(rem) > 1:
        if any(rem[k] for k in range(1, len(rem), 2)):
            raise ValueError("spectrum is not contained in a quadratic extension")
        q = [rem[k] for k in range(0, len(rem), 2)]
        sroots, srem = rational_roots(q)
        if len(srem) > 1:
            raise ValueError("spectrum is not contained in a quadratic extension")
        for s, m in sroots:
            if s <= 0:
                raise ValueError("spectrum requires a complex or nested extension")
            val = sqrt_rational(s)
            if isinstance(val, Fraction):
                raise ValueError("unexpected rational square root in the even part")
            if d is None:
                d = val.d
            elif d != val.d:
                raise ValueError(f"needs two extensions: sqrt({d}) and sqrt({val.d})")
            eigs.append((val, m))
            eigs.append((-val, m))
    return eigs, d
