"""Small exact linear algebra kernel over Q.

Everything here works on lists of Fraction rows.  Pivoting is always
"first nonzero column, first usable row", so reduced forms, kernels and
chosen representatives are reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction


def _as_fractions(row):
    return [x if isinstance(x, Fraction) else Fraction(x) for x in row]


def rref(rows):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    mat = [_as_fractions(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def kernel_basis(rows, ncols):
    """Basis of {v : A v = 0} for the matrix with the given rows.

    Vectors come out one per free column, in ascending column order, with a
    1 in the free coordinate.
    """
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][free]
        basis.append(v)
    return basis


def solve(columns, target):
    """Coefficients c with sum c_i * columns[i] == target, or None.

    `columns` is a list of vectors (the columns of the system).
    """
    n = len(target)
    for col in columns:
        if len(col) != n:
            raise ValueError("column length mismatch")
    aug = [[Fraction(col[i]) for col in columns] + [Fraction(target[i])] for i in range(n)]
    red, pivots = rref(aug)
    if len(columns) in pivots:
        return None
    coeffs = [Fraction(0)] * len(columns)
    for i, p in enumerate(pivots):
        coeffs[p] = red[i][-1]
    return coeffs


class Subspace:
    """Mutable row space kept in reduced echelon form, for Q-vector spaces."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows = []
        self.pivot_of_row = []

    def reduce(self, vec):
        """Return vec minus its projection onto the subspace (a new list)."""
        v = _as_fractions(vec)
        for row, p in zip(self.rows, self.pivot_of_row):
            if v[p] != 0:
                f = v[p]
                for j in range(p, self.ncols):
                    v[j] -= f * row[j]
        return v

    def add(self, vec) -> bool:
        """Insert vec's span; True if the dimension grew."""
        v = self.reduce(vec)
        for p in range(self.ncols):
            if v[p] != 0:
                inv = 1 / v[p]
                v = [x * inv for x in v]
                for row, q in zip(self.rows, self.pivot_of_row):
                    if row[p] != 0:
                        f = row[p]
                        for j in range(self.ncols):
                            row[j] -= f * v[j]
                where = 0
                while where < len(self.pivot_of_row) and self.pivot_of_row[where] < p:
                    where += 1
                self.rows.insert(where, v)
                self.pivot_of_row.insert(where, p)
                return True
        return False

    def contains(self, vec) -> bool:
        return all(x == 0 for x in self.reduce(vec))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivots(self):
        return list(self.pivot_of_row)
