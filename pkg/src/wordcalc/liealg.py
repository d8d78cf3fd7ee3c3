"""Graded complex Lie algebras from structure constants.

An algebra carries a basis split into q-, h, q+ blocks, a grading element Z0
acting as -1/0/+1 on those blocks, and an associative invariant bilinear form
(the Killing form in all shipped constructors).  On top of that sit the
distinguished Cartan data (E_j, F_j, H_j, c0) and the Iwasawa-style
eigen-decomposition under ad of the Cartan subspace, which may require a real
quadratic extension Q(sqrt(d)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .scalars import Q0, Q1, scalar_sign

QMINUS = "q-"
QPLUS = "q+"
H = "h"


class LieAlgebraError(ValueError):
    pass


class GradedLieAlgebra:
    def __init__(self, basis_names, grading, brackets, form, z0, name="custom"):
        self.name = name
        self.basis_names = list(basis_names)
        self.grading = list(grading)
        self.form = [[Fraction(x) for x in row] for row in form]
        self.z0 = [Fraction(x) for x in z0]
        self._table = {}
        for (i, j), entry in brackets.items():
            if i == j:
                continue
            if i > j:
                i, j, entry = j, i, {k: -Fraction(c) for k, c in entry.items()}
            clean = {int(k): Fraction(c) for k, c in entry.items() if Fraction(c)}
            if clean:
                self._table[(i, j)] = clean
        self._ad_cache = {}
        self._dual_cache = None
        self._pbw_cache = {}

    # -- basic structure ---------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def indices_of(self, label: str):
        return [i for i, g in enumerate(self.grading) if g == label]

    @property
    def n_plus(self) -> int:
        return len(self.indices_of(QPLUS))

    def bracket_coords(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return self._table.get((i, j), {})
        return {k: -c for k, c in self._table.get((j, i), {}).items()}

    def bracket_vec(self, u, v):
        out = [Q0] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in self.bracket_coords(i, j).items():
                    out[k] = out[k] + a * b * c
        return out

    def form_pair(self, u, v):
        total = Q0
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.form[i]
            for j, b in enumerate(v):
                if b and row[j]:
                    total = total + a * b * row[j]
        return total

    def ad_matrix(self, v):
        """Matrix of ad(v) acting on coordinate columns."""
        key = tuple(v)
        if key in self._ad_cache:
            return self._ad_cache[key]
        cols = []
        for j in range(self.dim):
            unit = [Q0] * self.dim
            unit[j] = Q1
            cols.append(self.bracket_vec(v, unit))
        mat = [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]
        self._ad_cache[key] = mat
        return mat

    def unit(self, i: int):
        v = [Q0] * self.dim
        v[i] = Q1
        return v

    # -- validation ----------------------------------------------------------
    def validate(self) -> "GradedLieAlgebra":
        n = self.dim
        if any(len(row) != n for row in self.form) or len(self.form) != n:
            raise LieAlgebraError("form matrix has wrong shape")
        if len(self.grading) != n or len(self.z0) != n:
            raise LieAlgebraError("grading or Z0 has wrong length")
        if any(g not in (QMINUS, QPLUS, H) for g in self.grading):
            raise LieAlgebraError("grading labels must be q-, h, q+")
        # Jacobi identity over basis triples
        units = [self.unit(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                bij = self.bracket_vec(units[i], units[j])
                for k in range(j + 1, n):
                    total = self.bracket_vec(bij, units[k])
                    bjk = self.bracket_vec(units[j], units[k])
                    total = [a + b for a, b in zip(total, self.bracket_vec(bjk, units[i]))]
                    bki = self.bracket_vec(units[k], units[i])
                    total = [a + b for a, b in zip(total, self.bracket_vec(bki, units[j]))]
                    if any(total):
                        raise LieAlgebraError(f"Jacobi identity fails at basis triple ({i},{j},{k})")
        # grading behaviour
        grade_value = {QMINUS: Fraction(-1), H: Fraction(0), QPLUS: Fraction(1)}
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                target = grade_value[self.grading[i]] + grade_value[self.grading[j]]
                for k, c in self.bracket_coords(i, j).items():
                    if c and grade_value[self.grading[k]] != target:
                        raise LieAlgebraError(
                            f"grading violated: [{self.basis_names[i]},{self.basis_names[j]}] "
                            f"hits {self.basis_names[k]}"
                        )
                if target in (Fraction(2), Fraction(-2)) and self.bracket_coords(i, j):
                    raise LieAlgebraError("q+ or q- is not abelian")
        # Z0 eigenvalues
        for i in range(n):
            got = self.bracket_vec(self.z0, self.unit(i))
            expect = [grade_value[self.grading[i]] * x for x in self.unit(i)]
            if got != expect:
                raise LieAlgebraError(f"[Z0, {self.basis_names[i]}] != grade * {self.basis_names[i]}")
        # form: symmetric, non-degenerate, associative, isotropic on q+ and q-
        for i in range(n):
            for j in range(n):
                if self.form[i][j] != self.form[j][i]:
                    raise LieAlgebraError("form is not symmetric")
        if linalg.rank(self.form) < n:
            raise LieAlgebraError("form is degenerate")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.form_pair(self.bracket_vec(units[i], units[j]), units[k])
                    rhs = self.form_pair(units[i], self.bracket_vec(units[j], units[k]))
                    if lhs != rhs:
                        raise LieAlgebraError(
                            f"form is not associative at ({self.basis_names[i]},"
                            f"{self.basis_names[j]},{self.basis_names[k]})"
                        )
        for label in (QPLUS, QMINUS):
            idxs = self.indices_of(label)
            for i in idxs:
                for j in idxs:
                    if self.form[i][j]:
                        raise LieAlgebraError(f"form does not vanish on {label} x {label}")
        return self

    # -- dual bases ---------------------------------------------------------
    def dual_bases(self):
        """Basis X of q+ (the labeled basis vectors) and the dual basis Y of q-."""
        if self._dual_cache is not None:
            return self._dual_cache
        plus = self.indices_of(QPLUS)
        minus = self.indices_of(QMINUS)
        if len(plus) != len(minus):
            raise LieAlgebraError("q+ and q- have different dimensions")
        pairing = [[self.form[i][j] for j in minus] for i in plus]
        inv = linalg.inverse(pairing)
        xs = [self.unit(i) for i in plus]
        ys = []
        for b in range(len(plus)):
            v = [Q0] * self.dim
            for c, mi in enumerate(minus):
                v[mi] = inv[c][b]
            ys.append(v)
        self._dual_cache = (xs, ys)
        return self._dual_cache

    # -- serialization ---------------------------------------------------------
    def to_jsonable(self, cartan: "CartanData | None" = None):
        data = {
            "name": self.name,
            "basis": list(self.basis_names),
            "grading": list(self.grading),
            "z0": [str(x) for x in self.z0],
            "brackets": {
                f"{i},{j}": {str(k): str(c) for k, c in sorted(entry.items())}
                for (i, j), entry in sorted(self._table.items())
            },
            "form": [[str(x) for x in row] for row in self.form],
        }
        if cartan is not None:
            data["cartan"] = {
                "E": [[str(x) for x in v] for v in cartan.E],
                "F": [[str(x) for x in v] for v in cartan.F],
            }
        return data


def make_algebra(brackets, grading, form, z0, *, basis_names=None, name="custom") -> GradedLieAlgebra:
    """Build and fully validate a graded algebra from sparse structure constants."""
    n = len(grading)
    if basis_names is None:
        basis_names = [f"b{i}" for i in range(n)]
    return GradedLieAlgebra(basis_names, grading, brackets, form, z0, name=name).validate()


def algebra_from_jsonable(data) -> tuple[GradedLieAlgebra, "CartanData | None"]:
    brackets = {}
    for key, entry in data["brackets"].items():
        i, j = (int(p) for p in key.split(","))
        brackets[(i, j)] = {int(k): Fraction(c) for k, c in entry.items()}
    alg = make_algebra(
        brackets,
        data["grading"],
        [[Fraction(x) for x in row] for row in data["form"]],
        [Fraction(x) for x in data["z0"]],
        basis_names=data["basis"],
        name=data.get("name", "custom"),
    )
    cartan = None
    if "cartan" in data:
        es = [[Fraction(x) for x in v] for v in data["cartan"]["E"]]
        fs = [[Fraction(x) for x in v] for v in data["cartan"]["F"]]
        cartan = verify_cartan(alg, es, fs)
    return alg, cartan


# ---------------------------------------------------------------------------
# Cartan data
# ---------------------------------------------------------------------------

@dataclass
class CartanData:
    algebra: GradedLieAlgebra
    E: list
    F: list
    A: list = field(init=False)
    H: list = field(init=False)
    c0: Fraction = field(init=False)

    def __post_init__(self):
        self.A = [[a + b for a, b in zip(e, f)] for e, f in zip(self.E, self.F)]
        self.H = [self.algebra.bracket_vec(e, f) for e, f in zip(self.E, self.F)]
        self.c0 = self.algebra.form_pair(self.E[0], self.F[0])

    @property
    def r(self) -> int:
        return len(self.E)


def _supported_on(alg, v, label) -> bool:
    idxs = set(alg.indices_of(label))
    return all(i in idxs for i, x in enumerate(v) if x)


def verify_cartan(algebra: GradedLieAlgebra, es, fs) -> CartanData:
    """Check the distinguished Cartan-basis relations; returns the verified data."""
    if len(es) != len(fs) or not es:
        raise LieAlgebraError("need equally many E and F candidates")
    es = [[Fraction(x) for x in v] for v in es]
    fs = [[Fraction(x) for x in v] for v in fs]
    for j, (e, f) in enumerate(zip(es, fs), start=1):
        if not _supported_on(algebra, e, QPLUS):
            raise LieAlgebraError(f"E_{j} does not lie in q+")
        if not _supported_on(algebra, f, QMINUS):
            raise LieAlgebraError(f"F_{j} does not lie in q-")
    hs = [algebra.bracket_vec(e, f) for e, f in zip(es, fs)]
    for j, (e, f, h) in enumerate(zip(es, fs, hs), start=1):
        if algebra.bracket_vec(h, e) != e:
            raise LieAlgebraError(f"[H_{j},E_{j}] != E_{j}")
        minus_f = [-x for x in f]
        if algebra.bracket_vec(h, f) != minus_f:
            raise LieAlgebraError(f"[H_{j},F_{j}] != -F_{j}")
    for j in range(len(es)):
        for k in range(len(fs)):
            if j != k and any(algebra.bracket_vec(es[j], fs[k])):
                raise LieAlgebraError(f"[E_{j + 1},F_{k + 1}] != 0")
    c0 = algebra.form_pair(es[0], fs[0])
    if not c0:
        raise LieAlgebraError("(E_j|F_j) vanishes")
    for j in range(len(es)):
        if algebra.form_pair(es[j], fs[j]) != c0:
            raise LieAlgebraError("(E_j|F_j) depends on j")
    data = CartanData(algebra, es, fs)
    for j in range(data.r):
        for k in range(data.r):
            expect = 2 * c0 if j == k else Q0
            if algebra.form_pair(data.A[j], data.A[k]) != expect:
                raise LieAlgebraError(f"(A_{j + 1}|A_{k + 1}) != 2*c0*delta")
    return data


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _killing_form(names, grading, brackets, z0):
    probe = GradedLieAlgebra(names, grading, brackets, [[Q0] * len(names)] * len(names), z0)
    ads = [probe.ad_matrix(probe.unit(i)) for i in range(probe.dim)]
    n = probe.dim
    return [[linalg.mat_trace(linalg.mat_mul(ads[i], ads[j])) for j in range(n)] for i in range(n)]


def sl2_disc() -> tuple[GradedLieAlgebra, CartanData]:
    """sl(2) with its disc grading: basis F, E, H; Z0 = H/2; c0 = 2."""
    names = ["F", "E", "H"]
    grading = [QMINUS, QPLUS, H]
    brackets = {
        (0, 1): {2: Fraction(-1)},   # [F,E] = -H
        (0, 2): {0: Fraction(2)},    # [F,H] = 2F
        (1, 2): {1: Fraction(-2)},   # [E,H] = -2E
    }
    z0 = [Q0, Q0, Fraction(1, 2)]
    form = _killing_form(names, grading, brackets, z0)
    alg = make_algebra(brackets, grading, form, z0, basis_names=names, name="sl2_disc")
    cartan = verify_cartan(alg, [alg.unit(1)], [[Fraction(1, 2), Q0, Q0]])
    return alg, cartan


def polydisc(n_copies: int) -> tuple[GradedLieAlgebra, CartanData]:
    """Direct sum of n copies of the disc algebra; rank n, one pair per block."""
    if n_copies < 1:
        raise LieAlgebraError("need at least one factor")
    names = (
        [f"F{b + 1}" for b in range(n_copies)]
        + [f"E{b + 1}" for b in range(n_copies)]
        + [f"H{b + 1}" for b in range(n_copies)]
    )
    grading = [QMINUS] * n_copies + [QPLUS] * n_copies + [H] * n_copies
    brackets = {}
    for b in range(n_copies):
        f, e, h = b, n_copies + b, 2 * n_copies + b
        brackets[(f, e)] = {h: Fraction(-1)}
        brackets[(f, h)] = {f: Fraction(2)}
        brackets[(e, h)] = {e: Fraction(-2)}
    z0 = [Q0] * (2 * n_copies) + [Fraction(1, 2)] * n_copies
    form = _killing_form(names, grading, brackets, z0)
    alg = make_algebra(brackets, grading, form, z0, basis_names=names, name=f"polydisc:{n_copies}")
    es = [alg.unit(n_copies + b) for b in range(n_copies)]
    fs = []
    for b in range(n_copies):
        v = [Q0] * alg.dim
        v[b] = Fraction(1, 2)
        fs.append(v)
    cartan = verify_cartan(alg, es, fs)
    return alg, cartan


def _sp_matrix_basis(r: int):
    """Basis of sp(2r): q- lower blocks, q+ upper blocks, h the gl(r) block."""
    size = 2 * r

    def zeros():
        return [[Q0] * size for _ in range(size)]

    names, mats, grading = [], [], []
    for i in range(r):
        for j in range(i, r):
            m = zeros()
            m[r + i][j] = m[r + j][i] = Q1
            names.append(f"Y{i + 1}{j + 1}")
            mats.append(m)
            grading.append(QMINUS)
    for i in range(r):
        for j in range(i, r):
            m = zeros()
            m[i][r + j] = m[j][r + i] = Q1
            names.append(f"X{i + 1}{j + 1}")
            mats.append(m)
            grading.append(QPLUS)
    for i in range(r):
        for j in range(r):
            m = zeros()
            m[i][j] = Q1
            m[r + j][r + i] = -Q1
            names.append(f"G{i + 1}{j + 1}")
            mats.append(m)
            grading.append(H)
    return names, mats, grading


def siegel_sp(two_r: int) -> tuple[GradedLieAlgebra, CartanData]:
    """sp(2r) graded by the symmetric-matrix blocks; rank r, c0 = r + 1."""
    if two_r < 2 or two_r % 2:
        raise LieAlgebraError("argument must be an even integer >= 2")
    r = two_r // 2
    names, mats, grading = _sp_matrix_basis(r)
    dim = len(mats)
    size = 2 * r
    flat = [[mats[b][i][j] for b in range(dim)] for i in range(size) for j in range(size)]

    def to_coords(mat):
        rhs = [mat[i][j] for i in range(size) for j in range(size)]
        coords = linalg.solve(flat, rhs)
        if coords is None:
            raise LieAlgebraError("matrix outside the spanned algebra")
        return coords

    def mat_commutator(a, b):
        ab = linalg.mat_mul(a, b)
        ba = linalg.mat_mul(b, a)
        return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(ab, ba)]

    brackets = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            coords = to_coords(mat_commutator(mats[i], mats[j]))
            entry = {k: c for k, c in enumerate(coords) if c}
            if entry:
                brackets[(i, j)] = entry
    z0_mat = [[Q0] * size for _ in range(size)]
    for i in range(r):
        z0_mat[i][i] = Fraction(1, 2)
        z0_mat[r + i][r + i] = Fraction(-1, 2)
    z0 = to_coords(z0_mat)
    form = _killing_form(names, grading, brackets, z0)
    alg = make_algebra(brackets, grading, form, z0, basis_names=names, name=f"siegel:{two_r}")
    es, fs = [], []
    for j in range(r):
        e_idx = names.index(f"X{j + 1}{j + 1}")
        f_idx = names.index(f"Y{j + 1}{j + 1}")
        es.append(alg.unit(e_idx))
        v = [Q0] * dim
        v[f_idx] = Fraction(1, 2)
        fs.append(v)
    cartan = verify_cartan(alg, es, fs)
    return alg, cartan


BUILTIN_ALGEBRAS = {
    "sl2_disc": lambda: sl2_disc(),
    "polydisc": polydisc,
    "siegel": siegel_sp,
}


def builtin_algebra(spec: str) -> tuple[GradedLieAlgebra, CartanData]:
    """Resolve "sl2_disc", "polydisc:N" or "siegel:2r" selector strings."""
    name, _, arg = spec.partition(":")
    if name == "sl2_disc":
        return sl2_disc()
    if name == "polydisc":
        return polydisc(int(arg or 1))
    if name == "siegel":
        return siegel_sp(int(arg or 4))
    raise LieAlgebraError(f"unknown builtin algebra {spec!r}")


# ---------------------------------------------------------------------------
# Iwasawa-style eigenstructure
# ---------------------------------------------------------------------------

@dataclass
class IwasawaData:
    algebra: GradedLieAlgebra
    cartan: CartanData
    d: int | None                      # quadratic extension, or None if rational
    root_spaces: list                  # [(functional tuple, [ambient vectors])]
    n_basis: list                      # positive root-space vectors
    rho: list                          # rho(A_j) values
    new_basis: list                    # n vectors, then A_j, then h unit vectors
    to_new: list                       # matrix: old coordinates -> new coordinates
    _new_table: dict = field(default_factory=dict)

    @property
    def r(self) -> int:
        return self.cartan.r

    @property
    def n_dim(self) -> int:
        return len(self.n_basis)

    def convert_index(self, old_index: int):
        """Old basis vector as a sparse dict over the Iwasawa-ordered basis."""
        col = [self.to_new[k][old_index] for k in range(len(self.to_new))]
        return {k: c for k, c in enumerate(col) if c}

    def bracket_new(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return self._new_table.get((i, j), {})
        return {k: -c for k, c in self._new_table.get((j, i), {}).items()}


def _lex_positive(func) -> bool:
    for value in func:
        s = scalar_sign(value)
        if s:
            return s > 0
    return False


def iwasawa(algebra: GradedLieAlgebra, cartan: CartanData) -> IwasawaData:
    """Joint eigen-decomposition of ad(A_1..A_r) and everything derived from it.

    Eigenvalues must live in Q or a single quadratic extension; the positive
    system is lexicographic in the functional coordinates; rho(A_j) is half
    the trace of ad(A_j) on the positive part.
    """
    n = algebra.dim
    mats = [algebra.ad_matrix(a) for a in cartan.A]
    # full spectra first, to know the extension and the candidate eigenvalues
    d = None
    spectra = []
    for mat in mats:
        try:
            eigs, d = linalg.spectrum_in_quadratic(linalg.charpoly(mat), d)
        except ValueError as exc:
            raise LieAlgebraError(f"eigen-decomposition not available: {exc}") from None
        spectra.append([val for val, _ in eigs])
    spaces = [([algebra.unit(i) for i in range(n)], ())]
    for j, mat in enumerate(mats):
        refined = []
        for basis, func in spaces:
            k = len(basis)
            vmat = [[basis[b][i] for b in range(k)] for i in range(n)]
            images = [linalg.mat_vec(mat, v) for v in basis]
            imat = [[images[b][i] for b in range(k)] for i in range(n)]
            rep = linalg.solve_columns(vmat, imat)
            if rep is None:
                raise LieAlgebraError("Cartan action does not preserve a refinement step")
            count = 0
            for lam in spectra[j]:
                shifted = [[rep[a][b] - (lam if a == b else Q0) for b in range(k)] for a in range(k)]
                kern = linalg.kernel(shifted)
                if not kern:
                    continue
                vecs = []
                for coords in kern:
                    vecs.append([
                        sum((coords[b] * basis[b][i] for b in range(k) if coords[b]), Q0)
                        for i in range(n)
                    ])
                refined.append((vecs, func + (lam,)))
                count += len(vecs)
            if count != k:
                raise LieAlgebraError("ad(A_j) is not diagonalizable over the extension")
        spaces = refined
    root_spaces = [(f, v) for v, f in spaces]
    # deterministic order: positive functionals sorted descending lexicographically
    positive = sorted(((f, v) for f, v in root_spaces if _lex_positive(f)),
                      key=_functional_sort_key, reverse=True)
    n_basis = [vec for _, vecs in positive for vec in vecs]
    rho = []
    for j in range(cartan.r):
        total = Q0
        for f, vecs in positive:
            total = total + len(vecs) * f[j]
        rho.append(total / 2)
    h_idx = algebra.indices_of(H)
    new_basis = list(n_basis) + list(cartan.A) + [algebra.unit(i) for i in h_idx]
    if len(new_basis) != n:
        raise LieAlgebraError(
            f"n + a + h does not fill the algebra: {len(n_basis)} + {cartan.r} + {len(h_idx)} != {n}"
        )
    pmat = [[new_basis[b][i] for b in range(n)] for i in range(n)]
    try:
        to_new = linalg.inverse(pmat)
    except ValueError:
        raise LieAlgebraError("n + a + h is not a direct sum") from None
    data = IwasawaData(algebra, cartan, d, root_spaces, n_basis, rho, new_basis, to_new)
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            bracket_old = algebra.bracket_vec(new_basis[i], new_basis[j])
            coords = linalg.mat_vec(to_new, bracket_old)
            entry = {k: c for k, c in enumerate(coords) if c}
            if entry:
                table[(i, j)] = entry
    data._new_table = table
    return data


def _functional_sort_key(item):
    # QuadExt and Fraction are mutually comparable, so plain tuples sort fine
    return tuple(item[0])
