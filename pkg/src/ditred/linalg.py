"""Exact dense linear algebra over any field object from `scalars`.

Matrices are small (desk scale) and immutable by convention; entries are
field elements supporting Python arithmetic operators.
"""

from __future__ import annotations


class Mat:
    """Dense matrix over an exact field."""

    __slots__ = ("field", "m", "n", "rows")

    def __init__(self, field, rows, ncols: int | None = None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.m = len(self.rows)
        self.n = len(self.rows[0]) if self.rows else (ncols or 0)
        for r in self.rows:
            if len(r) != self.n:
                raise ValueError("ragged matrix")

    # -- constructors --------------------------------------------------
    @staticmethod
    def zeros(field, m: int, n: int) -> "Mat":
        z = field.zero
        return Mat(field, [[z] * n for _ in range(m)], ncols=n)

    @staticmethod
    def eye(field, n: int) -> "Mat":
        z, o = field.zero, field.one
        return Mat(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_cols(field, cols, m: int | None = None) -> "Mat":
        if not cols:
            return Mat.zeros(field, m or 0, 0)
        m = len(cols[0])
        return Mat(field, [[col[i] for col in cols] for i in range(m)], ncols=len(cols))

    @staticmethod
    def col_vector(field, v) -> "Mat":
        return Mat(field, [[x] for x in v])

    # -- basic ops -----------------------------------------------------
    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def col(self, j):
        return [self.rows[i][j] for i in range(self.m)]

    def cols(self):
        return [self.col(j) for j in range(self.n)]

    def __add__(self, other: "Mat") -> "Mat":
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("shape mismatch in addition")
        return Mat(self.field, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], ncols=self.n)

    def __sub__(self, other: "Mat") -> "Mat":
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("shape mismatch in subtraction")
        return Mat(self.field, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], ncols=self.n)

    def __neg__(self) -> "Mat":
        return Mat(self.field, [[-a for a in r] for r in self.rows], ncols=self.n)

    def scale(self, c) -> "Mat":
        return Mat(self.field, [[a * c for a in r] for r in self.rows], ncols=self.n)

    def __mul__(self, other: "Mat") -> "Mat":
        if self.n != other.m:
            raise ValueError(f"shape mismatch {self.m}x{self.n} * {other.m}x{other.n}")
        z = self.field.zero
        orows = other.rows
        out = []
        for r in self.rows:
            row = [z] * other.n
            for k, a in enumerate(r):
                if a == z:
                    continue
                ork = orows[k]
                for j in range(other.n):
                    row[j] = row[j] + a * ork[j]
            out.append(row)
        return Mat(self.field, out, ncols=other.n)

    def apply(self, v):
        """Matrix times column vector (a plain list)."""
        z = self.field.zero
        out = []
        for r in self.rows:
            acc = z
            for a, x in zip(r, v):
                if a != z and x != z:
                    acc = acc + a * x
            out.append(acc)
        return out

    def T(self) -> "Mat":
        return Mat(self.field, [[self.rows[i][j] for i in range(self.m)] for j in range(self.n)], ncols=self.m)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(a == z for r in self.rows for a in r)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.m == other.m
            and self.n == other.n
            and all(a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2))
        )

    def __hash__(self):
        return hash((self.m, self.n, tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        return "[" + "; ".join(" ".join(str(a) for a in r) for r in self.rows) + "]"

    def copy(self) -> "Mat":
        return Mat(self.field, self.rows, ncols=self.n)

    def map(self, f) -> "Mat":
        return Mat(self.field, [[f(a) for a in r] for r in self.rows], ncols=self.n)

    def cast(self, field, embed) -> "Mat":
        """Re-coefficient the matrix through an embedding of scalars."""
        return Mat(field, [[embed(a) for a in r] for r in self.rows], ncols=self.n)

    # -- block ops -------------------------------------------------------
    @staticmethod
    def hstack(field, mats) -> "Mat":
        mats = [m for m in mats]
        if not mats:
            return Mat.zeros(field, 0, 0)
        m = mats[0].m
        n = sum(mat.n for mat in mats)
        return Mat(field, [[a for mat in mats for a in mat.rows[i]] for i in range(m)], ncols=n)

    @staticmethod
    def vstack(field, mats) -> "Mat":
        mats = [m for m in mats]
        rows = []
        for mat in mats:
            rows.extend(mat.rows)
        return Mat(field, rows, ncols=mats[0].n if mats else 0)

    @staticmethod
    def block_diag(field, mats) -> "Mat":
        m = sum(x.m for x in mats)
        n = sum(x.n for x in mats)
        out = Mat.zeros(field, m, n)
        i0 = j0 = 0
        for x in mats:
            for i in range(x.m):
                for j in range(x.n):
                    out.rows[i0 + i][j0 + j] = x.rows[i][j]
            i0 += x.m
            j0 += x.n
        return out

    def kron(self, other: "Mat") -> "Mat":
        """Kronecker product self (x) other."""
        z = self.field.zero
        out = Mat.zeros(self.field, self.m * other.m, self.n * other.n)
        for i in range(self.m):
            for j in range(self.n):
                a = self.rows[i][j]
                if a == z:
                    continue
                for k in range(other.m):
                    for l in range(other.n):
                        out.rows[i * other.m + k][j * other.n + l] = a * other.rows[k][l]
        return out

    def submatrix(self, rows, cols) -> "Mat":
        return Mat(self.field, [[self.rows[i][j] for j in cols] for i in rows])

    # -- elimination -----------------------------------------------------
    def rref(self):
        """Reduced row echelon form; returns (R, pivot_columns)."""
        R = [list(r) for r in self.rows]
        z = self.field.zero
        pivots = []
        pr = 0
        for c in range(self.n):
            if pr >= self.m:
                break
            pivot = None
            for r in range(pr, self.m):
                if R[r][c] != z:
                    pivot = r
                    break
            if pivot is None:
                continue
            R[pr], R[pivot] = R[pivot], R[pr]
            inv = self.field.one / R[pr][c]
            R[pr] = [a * inv for a in R[pr]]
            for r in range(self.m):
                if r != pr and R[r][c] != z:
                    f = R[r][c]
                    R[r] = [a - f * b for a, b in zip(R[r], R[pr])]
            pivots.append(c)
            pr += 1
        return Mat(self.field, R, ncols=self.n), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self):
        """Basis of the right kernel as a list of column vectors."""
        R, pivots = self.rref()
        z, o = self.field.zero, self.field.one
        free = [c for c in range(self.n) if c not in pivots]
        basis = []
        for fc in free:
            v = [z] * self.n
            v[fc] = o
            for r, pc in enumerate(pivots):
                v[pc] = -R.rows[r][fc]
            basis.append(v)
        return basis

    def solve(self, b):
        """One solution x of self * x = b (b a list), or None."""
        aug = Mat(self.field, [self.rows[i] + [b[i]] for i in range(self.m)])
        R, pivots = aug.rref()
        z = self.field.zero
        if self.n in pivots:
            return None
        x = [z] * self.n
        for r, pc in enumerate(pivots):
            x[pc] = R.rows[r][self.n]
        return x

    def inv(self) -> "Mat":
        if self.m != self.n:
            raise ValueError("inverse of non-square matrix")
        aug = Mat.hstack(self.field, [self, Mat.eye(self.field, self.n)])
        R, pivots = aug.rref()
        if pivots != list(range(self.n)):
            raise ZeroDivisionError("singular matrix")
        return Mat(self.field, [r[self.n:] for r in R.rows], ncols=self.n)

    def is_invertible(self) -> bool:
        return self.m == self.n and self.rank() == self.n

    def det(self):
        if self.m != self.n:
            raise ValueError("determinant of non-square matrix")
        R = [list(r) for r in self.rows]
        z = self.field.zero
        det = self.field.one
        for c in range(self.n):
            pivot = None
            for r in range(c, self.n):
                if R[r][c] != z:
                    pivot = r
                    break
            if pivot is None:
                return z
            if pivot != c:
                R[c], R[pivot] = R[pivot], R[c]
                det = -det
            det = det * R[c][c]
            inv = self.field.one / R[c][c]
            for r in range(c + 1, self.n):
                if R[r][c] != z:
                    f = R[r][c] * inv
                    R[r] = [a - f * b for a, b in zip(R[r], R[c])]
        return det

    def charpoly(self):
        """Characteristic polynomial det(xI - A) via Faddeev-LeVerrier-free
        expansion: exact Hessenberg-free Leverrier is fine at desk scale
        only in char 0, so use the division-free Berkowitz method."""
        from .scalars import Poly

        n = self.n
        if self.m != n:
            raise ValueError("charpoly of non-square matrix")
        fld = self.field
        if n == 0:
            return Poly.one(fld)
        # Berkowitz: iteratively build coefficient vectors
        # c holds coefficients of char poly of leading principal minors
        c = [fld.one, -self.rows[0][0]]
        for k in range(1, n):
            # row R, column S, principal submatrix Ak of size k
            Akm = self.submatrix(range(k), range(k))
            R = Mat(fld, [[self.rows[k][j] for j in range(k)]])
            S = Mat(fld, [[self.rows[i][k]] for i in range(k)])
            akk = self.rows[k][k]
            # Toeplitz coefficients: t_0 = 1, t_1 = -akk, t_{i+2} = -(R Ak^i S)
            ts = [fld.one, -akk]
            P = S
            for _ in range(k):
                ts.append(-(R * P).rows[0][0])
                P = Akm * P
            newc = [fld.zero] * (k + 2)
            for i in range(len(c)):
                for j in range(len(ts)):
                    if i + j <= k + 1:
                        newc[i + j] = newc[i + j] + c[i] * ts[j]
            c = newc
        # c is highest-degree-first; Poly wants lowest first
        return Poly(fld, list(reversed(c)))

    def minpoly(self):
        """Minimal polynomial: least-degree monic relation among powers."""
        from .scalars import Poly

        n = self.n
        fld = self.field
        powers = [Mat.eye(fld, n)]
        for d in range(1, n + 1):
            powers.append(powers[-1] * self)
            # solve sum_{i<=d} c_i A^i = 0 with c_d = 1
            cols = [[p.rows[i][j] for i in range(n) for j in range(n)] for p in powers[:d]]
            rhs = [-x for x in [powers[d].rows[i][j] for i in range(n) for j in range(n)]]
            A = Mat.from_cols(fld, cols, n * n) if cols else Mat.zeros(fld, n * n, 0)
            sol = A.solve(rhs)
            if sol is not None:
                return Poly(fld, sol + [fld.one])
        raise AssertionError("minimal polynomial of degree <= n must exist")

    def pow(self, e: int) -> "Mat":
        out = Mat.eye(self.field, self.n)
        b = self
        while e:
            if e & 1:
                out = out * b
            b = b * b
            e >>= 1
        return out

    def is_nilpotent(self) -> bool:
        if self.m != self.n:
            return False
        k = 1
        P = self
        while k < self.n:
            P = P * P
            k *= 2
        return P.is_zero()


def span_contains(field, basis, vec) -> bool:
    """Is vec in the span of the given vectors (all plain lists)?"""
    if not basis:
        return all(x == field.zero for x in vec)
    A = Mat.from_cols(field, basis)
    return A.solve(vec) is not None


def span_basis(field, vecs, length: int | None = None):
    """Extract a basis (subset in input order) of the span of vecs."""
    out = []
    rows = []
    for v in vecs:
        cand = Mat(field, rows + [list(v)])
        if cand.rank() > len(rows):
            rows.append(list(v))
            out.append(list(v))
    return out


def intersect_spans(field, basis_a, basis_b):
    """Basis of the intersection of two spans (vectors as lists)."""
    if not basis_a or not basis_b:
        return []
    A = Mat.from_cols(field, list(basis_a) + [[-x for x in v] for v in basis_b])
    out = []
    for kv in A.kernel():
        coeffs = kv[: len(basis_a)]
        vec = [field.zero] * len(basis_a[0])
        for c, v in zip(coeffs, basis_a):
            vec = [a + c * b for a, b in zip(vec, v)]
        if any(x != field.zero for x in vec):
            out.append(vec)
    return span_basis(field, out)
