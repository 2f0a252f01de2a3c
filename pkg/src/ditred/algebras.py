"""Finite-dimensional associative algebras by structure constants, their
modules, and the structure theory the rest of the package leans on:
radicals, idempotent splitting, composition lengths, Ext groups, and
Morita-basic reductions.

Radical computation is exact: the trace-form kernel in characteristic 0,
and the characteristic-polynomial-coefficient chain in characteristic p
(verified nilpotent afterwards).  Over small finite fields, lengths and
indecomposability prefer direct enumeration, which is complete.
"""

from __future__ import annotations

import itertools

from .linalg import Mat, span_basis
from .scalars import Poly, factor_squarefree


class UnsplitSemisimpleQuotient(ArithmeticError):
    """The semisimple quotient could not be split into matrix blocks over
    the ground field with the implemented factorization methods."""


ENUM_BUDGET = 1 << 14


def _poly_xgcd(a: Poly, b: Poly):
    """Extended Euclid: (g, u, v) monic g = u*a + v*b."""
    fld = a.field
    r0, r1 = a, b
    u0, u1 = Poly.one(fld), Poly.zero(fld)
    v0, v1 = Poly.zero(fld), Poly.one(fld)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if r0.is_zero():
        return r0, u0, v0
    c = r0.lc()
    inv = fld.one / c
    return r0.scale(inv), u0.scale(inv), v0.scale(inv)


class FDAlgebra:
    """Associative unital algebra given by structure constants."""

    def __init__(self, field, table, unit, labels=None):
        self.field = field
        self.table = [[list(c) for c in row] for row in table]
        self.dim = len(table)
        self.unit = list(unit)
        self.labels = list(labels) if labels else [f"b{i}" for i in range(self.dim)]
        self._rad = None
        self._left_mats = None

    # -- arithmetic on coefficient vectors --------------------------------
    def zero_vec(self):
        return [self.field.zero] * self.dim

    def basis_vec(self, i: int):
        v = self.zero_vec()
        v[i] = self.field.one
        return v

    def mul(self, u, v):
        z = self.field.zero
        out = [z] * self.dim
        for i, a in enumerate(u):
            if a == z:
                continue
            for j, b in enumerate(v):
                if b == z:
                    continue
                t = self.table[i][j]
                c = a * b
                for k in range(self.dim):
                    if t[k] != z:
                        out[k] = out[k] + c * t[k]
        return out

    def power(self, u, e: int):
        out = list(self.unit)
        b = list(u)
        while e:
            if e & 1:
                out = self.mul(out, b)
            b = self.mul(b, b)
            e >>= 1
        return out

    def left_mult(self, v) -> Mat:
        cols = [self.mul(v, self.basis_vec(j)) for j in range(self.dim)]
        return Mat.from_cols(self.field, cols, self.dim)

    def left_mats(self):
        if self._left_mats is None:
            self._left_mats = [self.left_mult(self.basis_vec(i)) for i in range(self.dim)]
        return self._left_mats

    def is_nilpotent_element(self, v) -> bool:
        return self.left_mult(v).is_nilpotent()

    def element_minpoly(self, v) -> Poly:
        return self.left_mult(v).minpoly()

    def op(self) -> "FDAlgebra":
        table = [[self.table[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return FDAlgebra(self.field, table, self.unit, self.labels)

    def check_associativity(self):
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    a = self.mul(self.table[i][j], self.basis_vec(k))
                    b = self.mul(self.basis_vec(i), self.table[j][k])
                    if a != b:
                        raise ValueError(f"not associative at ({i},{j},{k})")

    # -- subquotients ------------------------------------------------------
    def subalgebra_on(self, vectors, unit_vec):
        """Algebra structure on a multiplicatively closed subspace."""
        basis = span_basis(self.field, vectors)
        B = Mat.from_cols(self.field, basis, self.dim)

        def coords(v):
            s = B.solve(v)
            if s is None:
                raise ValueError("subspace is not multiplicatively closed")
            return s

        d = len(basis)
        table = [[coords(self.mul(basis[i], basis[j])) for j in range(d)] for i in range(d)]
        sub = FDAlgebra(self.field, table, coords(unit_vec))
        return sub, basis

    def quotient_by_ideal(self, ideal_basis):
        """Quotient algebra and the projection in coordinates."""
        ideal_basis = span_basis(self.field, ideal_basis)
        if not ideal_basis:
            return self, Mat.eye(self.field, self.dim), list(range(self.dim))
        I = Mat.from_cols(self.field, ideal_basis, self.dim)
        _, pivots = I.T().rref()
        pivset = set(pivots)
        keep = [j for j in range(self.dim) if j not in pivset]
        # coordinates modulo the ideal: solve against ideal + keep basis
        full = ideal_basis + [self._unitvec(j) for j in keep]
        M = Mat.from_cols(self.field, full, self.dim)

        def project(v):
            sol = M.solve(v)
            if sol is None:
                raise AssertionError("projection failed")
            return sol[len(ideal_basis):]

        d = len(keep)
        table = [
            [project(self.mul(self._unitvec(keep[i]), self._unitvec(keep[j]))) for j in range(d)]
            for i in range(d)
        ]
        quo = FDAlgebra(self.field, table, project(self.unit), [self.labels[j] for j in keep])
        return quo, project, keep

    def _unitvec(self, j):
        return self.basis_vec(j)

    # -- radical -----------------------------------------------------------
    def radical(self):
        """Basis of the Jacobson radical."""
        if self._rad is not None:
            return self._rad
        if self.field.char == 0:
            rad = self._trace_radical()
            self._assert_nil_ideal(rad)
        else:
            rad = self._charp_radical()
            self._assert_nil_ideal(rad)
        self._rad = rad
        return rad

    def _trace_radical(self):
        rows = []
        mats = self.left_mats()
        for j in range(self.dim):
            Lj = mats[j]
            row = []
            for i in range(self.dim):
                prod = mats[i] * Lj
                tr = self.field.zero
                for d in range(self.dim):
                    tr = tr + prod.rows[d][d]
                row.append(tr)
            rows.append(row)
        return Mat(self.field, rows).kernel()

    def _charp_radical(self):
        """Characteristic-p radical by the coefficient chain: intersect the
        kernels of x -> c_{p^i}(charpoly(L_{xy})) level by level."""
        p = self.field.char
        n = self.dim
        sub = [self.basis_vec(i) for i in range(n)]
        q = 1
        while q <= n and sub:
            d = len(sub)
            rows = []
            for y in sub:
                Ly = self.left_mult(y)
                row = []
                for x in sub:
                    M = self.left_mult(x) * Ly
                    cp = M.charpoly()
                    # coefficient of lambda^{n-q} is +- e_q; vanishing matches
                    row.append(cp.coeff(n - q))
                rows.append(row)
            ker = Mat(self.field, rows).kernel()
            newsub = []
            for kv in ker:
                v = [self.field.zero] * n
                for c, b in zip(kv, sub):
                    for t in range(n):
                        v[t] = v[t] + c * b[t]
                newsub.append(v)
            sub = span_basis(self.field, newsub)
            q *= p
        return sub

    def _assert_nil_ideal(self, rad):
        # two-sided ideal
        for v in rad:
            for i in range(self.dim):
                for w in (self.mul(v, self.basis_vec(i)), self.mul(self.basis_vec(i), v)):
                    if not _in_span(self.field, rad, w):
                        raise AssertionError("computed radical is not an ideal")
        # nilpotent: powers of the subspace shrink to zero
        cur = list(rad)
        steps = 0
        while cur:
            steps += 1
            if steps > self.dim + 1:
                raise AssertionError("computed radical is not nilpotent")
            nxt = [self.mul(u, v) for u in cur for v in rad]
            cur = span_basis(self.field, [w for w in nxt if any(c != self.field.zero for c in w)])

    # -- idempotents ---------------------------------------------------------
    def idempotent_candidates(self):
        vecs = [self.basis_vec(i) for i in range(self.dim)]
        out = list(vecs)
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                out.append([a + b for a, b in zip(vecs[i], vecs[j])])
        for i in range(self.dim):
            for j in range(self.dim):
                if i != j:
                    out.append(self.mul(vecs[i], vecs[j]))
        return out

    def find_nontrivial_idempotent(self):
        """A nontrivial idempotent, or None if none was found.  Complete
        over small finite fields (by enumeration); over Q it splits via
        coprime minimal-polynomial factors of candidate elements."""
        z, o = self.field.zero, self.field.one
        if self.dim <= 1:
            return None
        for x in self.idempotent_candidates():
            e = self._split_by_minpoly(x)
            if e is not None:
                return e
        if self.field.is_finite() and self.field.char ** self.dim <= ENUM_BUDGET:
            for coeffs in itertools.product(self.field.elements(), repeat=self.dim):
                v = list(coeffs)
                if self.mul(v, v) == v and any(c != z for c in v) and v != self.unit:
                    return v
        return None

    def _split_by_minpoly(self, x):
        m = self.element_minpoly(x)
        fac = factor_squarefree(m)
        if len(fac) < 2:
            return None
        f = fac[0][0] ** fac[0][1]
        g = m // f
        gg, u, v = _poly_xgcd(f, g)
        if gg.degree != 0:
            return None
        # e = (v*g)(x) satisfies e^2 = e, e != 0, 1
        e_poly = (v * g).scale(self.field.one / gg.coeff(0)) if gg.coeff(0) != self.field.one else v * g
        e = self._eval_poly_at(e_poly, x)
        if self.mul(e, e) != e:
            raise AssertionError("CRT idempotent failed")
        if all(c == self.field.zero for c in e) or e == self.unit:
            return None
        return e

    def _eval_poly_at(self, p: Poly, x):
        acc = self.zero_vec()
        for c in reversed(list(p.coeffs)):
            acc = self.mul(acc, x)
            acc = [a + c * u for a, u in zip(acc, self.unit)]
        return acc

    def corner(self, e):
        """The corner algebra eAe with unit e."""
        vecs = [self.mul(self.mul(e, self.basis_vec(i)), e) for i in range(self.dim)]
        vecs = [v for v in vecs if any(c != self.field.zero for c in v)]
        return self.subalgebra_on(vecs, e)

    def primitive_idempotents(self):
        """Orthogonal primitive idempotents summing to 1."""
        todo = [self.unit]
        out = []
        while todo:
            e = todo.pop()
            corner, cbasis = self.corner(e)
            f_local = corner.find_nontrivial_idempotent()
            if f_local is None:
                out.append(e)
                continue
            f = _lift_vec(self.field, f_local, cbasis, self.dim)
            e_minus_f = [a - b for a, b in zip(e, f)]
            todo.append(f)
            todo.append(e_minus_f)
        return out

    def is_local(self) -> bool:
        return self.find_nontrivial_idempotent() is None

    # -- semisimple structure -------------------------------------------------
    def center(self):
        mats = self.left_mats()
        blocks = [mats[i] - self._right_mult(i) for i in range(self.dim)]
        if not blocks:
            return []
        return Mat.vstack(self.field, blocks).kernel()

    def _right_mult(self, i) -> Mat:
        cols = [self.mul(self.basis_vec(j), self.basis_vec(i)) for j in range(self.dim)]
        return Mat.from_cols(self.field, cols, self.dim)

    def central_primitive_idempotents(self):
        """Primitive idempotents of the center; requires the center's
        minimal polynomials to split with the implemented factorization."""
        zc = self.center()
        csub, cbasis = self.subalgebra_on(zc, self.unit)
        todo = [csub.unit]
        out = []
        while todo:
            e = todo.pop()
            corner, crn_basis = csub.corner(e)
            f_local = corner.find_nontrivial_idempotent()
            if f_local is None:
                out.append(e)
                continue
            f = _lift_vec(csub.field, f_local, crn_basis, csub.dim)
            todo.append(f)
            todo.append([a - b for a, b in zip(e, f)])
        return [_lift_vec(self.field, e, cbasis, self.dim) for e in out]


def _lift_vec(field, coords, basis, dim):
    v = [field.zero] * dim
    for c, b in zip(coords, basis):
        for t in range(dim):
            v[t] = v[t] + c * b[t]
    return v


def _in_span(field, basis, v):
    from .linalg import span_contains

    return span_contains(field, basis, v)


# ---------------------------------------------------------------------------
# modules over an FDAlgebra
# ---------------------------------------------------------------------------

class AlgMod:
    """Left module over an FDAlgebra: action matrices per basis element."""

    def __init__(self, alg: FDAlgebra, dim: int, mats):
        self.alg = alg
        self.dim = dim
        self.mats = list(mats)
        if len(self.mats) != alg.dim:
            raise ValueError("one action matrix per algebra basis element")

    def act(self, avec) -> Mat:
        out = Mat.zeros(self.alg.field, self.dim, self.dim)
        for c, m in zip(avec, self.mats):
            if c != self.alg.field.zero:
                out = out + m.scale(c)
        return out

    def check(self):
        fld = self.alg.field
        if self.dim and not self.act(self.alg.unit) == Mat.eye(fld, self.dim):
            raise ValueError("unit does not act as identity")
        for i in range(self.alg.dim):
            for j in range(self.alg.dim):
                lhs = self.mats[i] * self.mats[j]
                rhs = self.act(self.alg.table[i][j])
                if lhs != rhs:
                    raise ValueError(f"action not multiplicative at ({i},{j})")

    # -- constructions -----------------------------------------------------
    @staticmethod
    def regular(alg: FDAlgebra) -> "AlgMod":
        return AlgMod(alg, alg.dim, alg.left_mats())

    @staticmethod
    def direct_sum(a: "AlgMod", b: "AlgMod") -> "AlgMod":
        fld = a.alg.field
        mats = [Mat.block_diag(fld, [m1, m2]) for m1, m2 in zip(a.mats, b.mats)]
        return AlgMod(a.alg, a.dim + b.dim, mats)

    def submodule_closure(self, vectors):
        """Basis of the smallest submodule containing the vectors."""
        fld = self.alg.field
        basis = span_basis(fld, [v for v in vectors if any(c != fld.zero for c in v)])
        frontier = list(basis)
        while frontier:
            new = []
            for v in frontier:
                for m in self.mats:
                    w = m.apply(v)
                    if not _in_span(fld, basis, w):
                        basis.append(w)
                        new.append(w)
            frontier = new
        return basis

    def submodule(self, basis) -> "AlgMod":
        fld = self.alg.field
        B = Mat.from_cols(fld, basis, self.dim)
        mats = []
        for m in self.mats:
            cols = [B.solve(m.apply(v)) for v in basis]
            if any(c is None for c in cols):
                raise ValueError("not a submodule")
            mats.append(Mat.from_cols(fld, cols, len(basis)) if basis else Mat.zeros(fld, 0, 0))
        return AlgMod(self.alg, len(basis), mats)

    def quotient(self, sub_basis):
        """Quotient module and the projection matrix."""
        fld = self.alg.field
        sub_basis = span_basis(fld, sub_basis)
        if not sub_basis:
            return self, Mat.eye(fld, self.dim)
        C = Mat.from_cols(fld, sub_basis, self.dim)
        _, pivots = C.T().rref()
        pivset = set(pivots)
        keep = [j for j in range(self.dim) if j not in pivset]
        full = Mat.hstack(fld, [C, Mat.from_cols(fld, [_unit(fld, self.dim, j) for j in keep], self.dim)])

        def project(v):
            sol = full.solve(v)
            return sol[len(sub_basis):]

        proj = Mat(fld, [project(_unit(fld, self.dim, j)) for j in range(self.dim)]).T()
        mats = [proj * m * Mat.from_cols(fld, [_unit(fld, self.dim, j) for j in keep], self.dim) for m in self.mats]
        return AlgMod(self.alg, len(keep), mats), proj

    def hom(self, other: "AlgMod"):
        """Basis of intertwiners self -> other as matrices."""
        fld = self.alg.field
        m, n = other.dim, self.dim
        if m * n == 0:
            return []
        rows = []
        for bi in range(self.alg.dim):
            A = self.mats[bi]
            B = other.mats[bi]
            # condition F A - B F = 0, F an m x n unknown
            for r in range(m):
                for c in range(n):
                    row = [fld.zero] * (m * n)
                    for k in range(n):
                        row[r * n + k] = row[r * n + k] + A.rows[k][c]
                    for k in range(m):
                        row[k * n + c] = row[k * n + c] - B.rows[r][k]
                    rows.append(row)
        ker = Mat(fld, rows).kernel() if rows else []
        return [Mat(fld, [v[r * n:(r + 1) * n] for r in range(m)]) for v in ker]

    def hom_dim(self, other: "AlgMod") -> int:
        return len(self.hom(other))

    def end_algebra(self):
        """Endomorphism algebra as an FDAlgebra (composition order:
        (f*g)(v) = f(g(v)))."""
        basis = self.hom(self)
        fld = self.alg.field
        B = Mat.from_cols(fld, [[m.rows[i][j] for i in range(self.dim) for j in range(self.dim)] for m in basis], self.dim * self.dim)
        table = []
        for f in basis:
            row = []
            for g in basis:
                prod = f * g
                sol = B.solve([prod.rows[i][j] for i in range(self.dim) for j in range(self.dim)])
                row.append(sol)
            table.append(row)
        unit = B.solve([Mat.eye(fld, self.dim).rows[i][j] for i in range(self.dim) for j in range(self.dim)])
        return FDAlgebra(fld, table, unit), basis

    def is_isomorphic(self, other: "AlgMod") -> Mat | None:
        if self.dim != other.dim:
            return None
        if self.dim == 0:
            return Mat.zeros(self.alg.field, 0, 0)
        homs = self.hom(other)
        if not homs:
            return None
        return _find_invertible_combo(self.alg.field, homs)

    def radical_series(self):
        """[M, JM, J^2 M, ...] as bases inside M, ending at 0."""
        fld = self.alg.field
        rad = self.alg.radical()
        layers = [[_unit(fld, self.dim, j) for j in range(self.dim)]]
        while layers[-1]:
            prev = layers[-1]
            nxt = []
            for r in rad:
                act = self.act(r)
                for v in prev:
                    nxt.append(act.apply(v))
            nxt = span_basis(fld, [v for v in nxt if any(c != fld.zero for c in v)])
            if len(nxt) == len(prev):
                raise AssertionError("radical series does not descend")
            layers.append(nxt)
        return layers

    def length(self) -> int:
        """Composition length."""
        fld = self.alg.field
        if self.dim == 0:
            return 0
        if fld.is_finite() and fld.char ** self.dim <= ENUM_BUDGET:
            return self._length_by_enumeration()
        return self._length_by_layers()

    def _length_by_enumeration(self) -> int:
        fld = self.alg.field
        M = self
        total = 0
        while M.dim > 0:
            best = None
            for coeffs in itertools.product(fld.elements(), repeat=M.dim):
                if all(c == fld.zero for c in coeffs):
                    continue
                sub = M.submodule_closure([list(coeffs)])
                if best is None or len(sub) < len(best):
                    best = sub
                    if len(best) == 1:
                        break
            M = M.quotient(best)[0]
            total += 1
        return total

    def _length_by_layers(self) -> int:
        fld = self.alg.field
        layers = self.radical_series()
        quo, proj, keep = self.alg.quotient_by_ideal(self.alg.radical())
        total = 0
        for top, bot in zip(layers, layers[1:]):
            ldim = len(top) - len(bot)
            if ldim == 0:
                continue
            # layer as a module over the semisimple quotient
            layer_basis = _complement_in(fld, bot, top)
            V, _ = _layer_module(fld, self, layer_basis, bot, quo, keep)
            total += _semisimple_length(quo, V)
        return total

    def decompose_indecomposable(self):
        """Split off one direct summand: returns (basis1, basis2) or None
        when the module is indecomposable."""
        E, basis = self.end_algebra()
        e = E.find_nontrivial_idempotent()
        if e is None:
            return None
        P = Mat.zeros(self.alg.field, self.dim, self.dim)
        for c, m in zip(e, basis):
            P = P + m.scale(c)
        im = span_basis(self.alg.field, [P.apply(_unit(self.alg.field, self.dim, j)) for j in range(self.dim)])
        Q = Mat.eye(self.alg.field, self.dim) - P
        ker = span_basis(self.alg.field, [Q.apply(_unit(self.alg.field, self.dim, j)) for j in range(self.dim)])
        return im, ker

    def indecomposable_summands(self):
        """List of indecomposable summands as AlgMod."""
        split = self.decompose_indecomposable()
        if self.dim == 0:
            return []
        if split is None:
            return [self]
        a, b = split
        return self.submodule(a).indecomposable_summands() + self.submodule(b).indecomposable_summands()


def _unit(field, n, j):
    v = [field.zero] * n
    v[j] = field.one
    return v


def _complement_in(field, small, big):
    """Vectors of `big` extending a basis of `small` (inside the span)."""
    out = []
    cur = list(small)
    for v in big:
        if not _in_span(field, cur, v):
            cur.append(v)
            out.append(v)
    return out


def _layer_module(fld, M: AlgMod, layer_basis, bot, quo: FDAlgebra, keep):
    """The subquotient spanned by layer_basis over the semisimple quotient."""
    all_basis = list(bot) + list(layer_basis)
    B = Mat.from_cols(fld, all_basis, M.dim) if all_basis else Mat.zeros(fld, M.dim, 0)
    d = len(layer_basis)

    def coords(v):
        s = B.solve(v)
        return s[len(bot):]

    mats = []
    for j in keep:
        act = M.act(_unit(fld, M.alg.dim, j))
        cols = [coords(act.apply(v)) for v in layer_basis]
        mats.append(Mat.from_cols(fld, cols, d) if d else Mat.zeros(fld, 0, 0))
    return AlgMod(quo, d, mats), coords


def _semisimple_length(B: FDAlgebra, V: AlgMod) -> int:
    """Length of a module over a semisimple algebra."""
    if V.dim == 0:
        return 0
    if B.field.is_finite() and B.field.char ** V.dim <= ENUM_BUDGET:
        return V._length_by_enumeration()
    total = 0
    for e in B.central_primitive_idempotents():
        act = V.act(e)
        part = span_basis(B.field, [act.apply(_unit(B.field, V.dim, j)) for j in range(V.dim)])
        if not part:
            continue
        blk, bbasis = B.corner(e)
        prim = blk.primitive_idempotents()
        if not prim:
            raise UnsplitSemisimpleQuotient("block without primitive idempotent")
        p0 = _lift_vec(B.field, prim[0], bbasis, B.dim)
        # dimension of the simple module of this block: the column B.e.p0
        col = span_basis(B.field, [B.mul(B.mul(e, B.basis_vec(i)), p0) for i in range(B.dim)])
        simple_dim = len(col)
        if simple_dim == 0 or len(part) % simple_dim != 0:
            raise UnsplitSemisimpleQuotient("inconsistent simple dimension; block not split?")
        total += len(part) // simple_dim
    return total


def greedy_invertible_combo(field, mats):
    """Greedy rank completion: scale each matrix in turn to push the rank
    of the running sum upward.  A found combination certifies existence;
    a miss is inconclusive."""
    if not mats:
        return None
    n = mats[0].m
    scalars = field.elements() if field.is_finite() else field.grid()
    cur = Mat.zeros(field, n, n)
    cur_rank = 0
    coeffs = []
    for h in mats:
        best = field.zero
        best_rank = cur_rank
        for c in scalars:
            if c == field.zero:
                continue
            r = (cur + h.scale(c)).rank()
            if r > best_rank:
                best, best_rank = c, r
        coeffs.append(best)
        if best != field.zero:
            cur = cur + h.scale(best)
            cur_rank = best_rank
        if cur_rank == n:
            return cur, coeffs + [field.zero] * (len(mats) - len(coeffs))
    if cur_rank == n:
        return cur, coeffs
    return None


def _find_invertible_combo(field, homs, tries=200):
    """An invertible combination of the given square matrices, or None.
    Complete over small finite fields (full enumeration); otherwise a
    greedy rank completion plus deterministic grid searches."""
    n = homs[0].m
    for h in homs:
        if h.is_invertible():
            return h
    g = greedy_invertible_combo(field, homs)
    if g is not None:
        return g[0]
    if field.is_finite() and field.char ** len(homs) <= ENUM_BUDGET:
        for coeffs in itertools.product(field.elements(), repeat=len(homs)):
            M = Mat.zeros(field, n, n)
            for c, h in zip(coeffs, homs):
                if c != field.zero:
                    M = M + h.scale(c)
            if M.is_invertible():
                return M
        return None
    grid = field.grid()
    k = len(homs)
    count = 0
    for coeffs in itertools.product(grid, repeat=min(k, 4)):
        M = Mat.zeros(field, n, n)
        for c, h in zip(coeffs, homs[:4]):
            M = M + h.scale(c)
        for h in homs[4:]:
            M = M + h
        if M.is_invertible():
            return M
        count += 1
        if count > tries:
            break
    # pairwise sums fallback
    for i in range(k):
        for j in range(k):
            M = homs[i] + homs[j]
            if M.is_invertible():
                return M
    return None


# ---------------------------------------------------------------------------
# projectives, Ext, standard modules, Morita basics
# ---------------------------------------------------------------------------

def projective_module(alg: FDAlgebra, e) -> tuple[AlgMod, list]:
    """The left module A.e with its basis inside A."""
    basis = span_basis(alg.field, [alg.mul(alg.basis_vec(i), e) for i in range(alg.dim)])
    B = Mat.from_cols(alg.field, basis, alg.dim) if basis else Mat.zeros(alg.field, alg.dim, 0)
    mats = []
    for i in range(alg.dim):
        cols = [B.solve(alg.mul(alg.basis_vec(i), v)) for v in basis]
        mats.append(Mat.from_cols(alg.field, cols, len(basis)) if basis else Mat.zeros(alg.field, 0, 0))
    return AlgMod(alg, len(basis), mats), basis


def projective_cover_presentation(alg: FDAlgebra, M: AlgMod):
    """A projective presentation P1 -> P0 -> M -> 0 built from primitive
    idempotents; returns (P0, pi: Mat, Omega_basis) with Omega = ker pi."""
    fld = alg.field
    prims = alg.primitive_idempotents()
    # generators of M: lift a basis of M / rad M
    rad = alg.radical()
    radM = span_basis(fld, [M.act(r).apply(_unit(fld, M.dim, j)) for r in rad for j in range(M.dim)])
    gens = _complement_in(fld, radM, [_unit(fld, M.dim, j) for j in range(M.dim)])
    pieces = []
    maps = []
    for g in gens:
        for e in prims:
            eg = M.act(e).apply(g)
            if any(c != fld.zero for c in eg):
                # the map A.e -> M, v -> v.g
                P, basis = projective_module(alg, e)
                cols = [M.act(v).apply(g) for v in basis]
                pieces.append(P)
                maps.append(Mat.from_cols(fld, cols, M.dim))
    if not pieces:
        P0 = AlgMod(alg, 0, [Mat.zeros(fld, 0, 0)] * alg.dim)
        return P0, Mat.zeros(fld, M.dim, 0), []
    P0 = pieces[0]
    for P in pieces[1:]:
        P0 = AlgMod.direct_sum(P0, P)
    pi = Mat.hstack(fld, maps)
    if M.dim and pi.rank() != M.dim:
        raise AssertionError("projective presentation is not surjective")
    omega = pi.kernel()
    return P0, pi, omega


def ext1_dim(alg: FDAlgebra, M: AlgMod, N: AlgMod) -> int:
    """dim Ext^1(M, N) via Hom(Omega M, N) / image of Hom(P0, N)."""
    fld = alg.field
    P0, pi, omega = projective_cover_presentation(alg, M)
    if not omega:
        return 0
    Om = P0.submodule(omega)
    homs_Om_N = Om.hom(N)
    if not homs_Om_N:
        return 0
    homs_P0_N = P0.hom(N)
    # restriction of P0 -> N maps to Omega
    O = Mat.from_cols(fld, omega, P0.dim)
    restricted = [h * O for h in homs_P0_N]
    flat = lambda m: [m.rows[i][j] for i in range(m.m) for j in range(m.n)]
    img = span_basis(fld, [flat(r) for r in restricted])
    full = span_basis(fld, [flat(h) for h in homs_Om_N])
    both = span_basis(fld, img + [flat(h) for h in homs_Om_N])
    return len(both) - len(img)


def simple_modules(alg: FDAlgebra):
    """Simple modules of a split basic-ish algebra: tops of the
    projectives at primitive idempotents, deduplicated."""
    prims = alg.primitive_idempotents()
    rad = alg.radical()
    out = []
    for e in prims:
        P, _ = projective_module(alg, e)
        radP = span_basis(alg.field, [P.act(r).apply(_unit(alg.field, P.dim, j)) for r in rad for j in range(P.dim)])
        S = P.quotient(radP)[0]
        if all(S.is_isomorphic(T) is None for T in out):
            out.append(S)
    return out


def standard_modules(alg: FDAlgebra, order=None):
    """For an ordered complete set of primitive idempotents, the largest
    quotient of each projective whose composition factors stay at or below
    its index (trace-ideal quotient)."""
    fld = alg.field
    prims = alg.primitive_idempotents()
    if order is not None:
        prims = [prims[i] for i in order]
    projs = [projective_module(alg, e)[0] for e in prims]
    out = []
    for i, P in enumerate(projs):
        traces = []
        for j in range(i + 1, len(projs)):
            for h in projs[j].hom(P):
                traces.extend(h.cols())
        U = P.submodule_closure(traces) if traces else []
        out.append(P.quotient(U)[0])
    return out


def has_filtration_by(alg: FDAlgebra, M: AlgMod, family, budget: int = 4000):
    """Search for a chain of submodules with factors in `family`
    (bottom-up exhaustive at desk scale); returns the witness as a list of
    (factor_index, submodule_basis_at_that_stage) or None."""
    fld = alg.field
    if M.dim == 0:
        return []
    for idx, D in enumerate(family):
        if D.dim > M.dim:
            continue
        embeddings = D.hom(M)
        if not embeddings:
            continue
        combos = _injective_combos(fld, embeddings, D.dim, budget)
        for emb in combos:
            sub = [emb.col(j) for j in range(D.dim)]
            quo, _ = M.quotient(sub)
            rest = has_filtration_by(alg, quo, family, budget)
            if rest is not None:
                return [(idx, sub)] + rest
    return None


def _injective_combos(fld, homs, src_dim, budget):
    out = []
    seen = 0
    if fld.is_finite() and fld.char ** len(homs) <= budget:
        iterator = itertools.product(fld.elements(), repeat=len(homs))
    else:
        iterator = itertools.product(fld.grid(), repeat=min(len(homs), 3))
    for coeffs in iterator:
        M = None
        for c, h in zip(coeffs, homs):
            t = h.scale(c)
            M = t if M is None else M + t
        if M is None:
            continue
        if M.rank() == src_dim:
            out.append(M)
        seen += 1
        if seen > budget:
            break
    return out


def basic_algebra(alg: FDAlgebra):
    """Morita-basic reduction: choose one primitive idempotent per
    isomorphism class of projectives; return (basic algebra, e) where the
    corner e.A.e realizes it and e is the chosen idempotent sum."""
    prims = alg.primitive_idempotents()
    projs = [projective_module(alg, e)[0] for e in prims]
    chosen = []
    chosen_mods = []
    for e, P in zip(prims, projs):
        if all(P.is_isomorphic(Q) is None for Q in chosen_mods):
            chosen.append(e)
            chosen_mods.append(P)
    esum = [sum_vec(alg.field, [c[i] for c in chosen]) for i in range(alg.dim)]
    corner, cbasis = alg.corner(esum)
    return corner, esum, cbasis


def sum_vec(field, xs):
    acc = field.zero
    for x in xs:
        acc = acc + x
    return acc


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

def algebra_to_text(alg: FDAlgebra) -> str:
    from .scalars import field_name

    lines = ["algebra", f"field {field_name(alg.field)}", f"dim {alg.dim}"]
    lines.append("basis " + " ".join(alg.labels))
    lines.append("unit " + " ".join(str(c) for c in alg.unit))
    z = alg.field.zero
    for i in range(alg.dim):
        for j in range(alg.dim):
            if any(c != z for c in alg.table[i][j]):
                lines.append(f"mul {i + 1} {j + 1} = " + " ".join(str(c) for c in alg.table[i][j]))
    return "\n".join(lines) + "\n"


def algebra_from_text(text: str) -> FDAlgebra:
    from .bigraph import ParseError
    from .scalars import field_from_name

    field = None
    dim = None
    labels = None
    unit = None
    table = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == "algebra":
            continue
        if line.startswith("field "):
            field = field_from_name(line[6:])
        elif line.startswith("dim "):
            dim = int(line[4:])
            table = [[[field.zero] * dim for _ in range(dim)] for _ in range(dim)]
        elif line.startswith("basis "):
            labels = line[6:].split()
        elif line.startswith("unit "):
            unit = [field.parse(t) for t in line[5:].split()]
        elif line.startswith("mul "):
            head, _, rest = line[4:].partition("=")
            i, j = (int(t) - 1 for t in head.split())
            table[i][j] = [field.parse(t) for t in rest.split()]
        else:
            raise ParseError(f"unrecognized algebra line {line!r}", ln)
    if field is None or dim is None or unit is None:
        raise ParseError("algebra file missing field/dim/unit")
    alg = FDAlgebra(field, table, unit, labels)
    alg.check_associativity()
    return alg


def algmod_to_text(M: AlgMod) -> str:
    lines = ["algmod", f"dim {M.dim}"]
    for i, m in enumerate(M.mats):
        if not m.is_zero():
            rows = ["[" + " ".join(str(e) for e in r) + "]" for r in m.rows]
            lines.append(f"act {i + 1} = " + " ".join(rows))
    return "\n".join(lines) + "\n"


def algmod_from_text(alg: FDAlgebra, text: str) -> AlgMod:
    from .bigraph import ParseError

    dim = None
    mats = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == "algmod":
            continue
        if line.startswith("dim "):
            dim = int(line[4:])
        elif line.startswith("act "):
            head, _, rest = line[4:].partition("=")
            i = int(head.strip()) - 1
            rows = []
            for chunk in rest.split("]"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                if not chunk.startswith("["):
                    raise ParseError(f"bad matrix chunk {chunk!r}", ln)
                rows.append([alg.field.parse(t) for t in chunk[1:].split()])
            mats[i] = Mat(alg.field, rows, ncols=dim)
        else:
            raise ParseError(f"unrecognized module line {line!r}", ln)
    if dim is None:
        raise ParseError("module file missing dim")
    full = [mats.get(i, Mat.zeros(alg.field, dim, dim)) for i in range(alg.dim)]
    M = AlgMod(alg, dim, full)
    M.check()
    return M


def endolength_algmod(M: AlgMod) -> int:
    """Length of a module over its own endomorphism algebra (acting on
    the right by evaluation)."""
    if M.dim == 0:
        return 0
    E, basis = M.end_algebra()
    mod = AlgMod(E, M.dim, basis)
    return mod.length()


def enumerate_algmods(alg: FDAlgebra, dmax: int, budget: int = 300_000):
    """All modules of dimension <= dmax over a split basic algebra,
    enumerated through dimension vectors at the primitive idempotents and
    action matrices for a graded radical basis, then verified against the
    full multiplication table.  Complete over F_p."""
    fld = alg.field
    prims = alg.primitive_idempotents()
    rad = alg.radical()
    if len(prims) + len(rad) != alg.dim:
        raise UnsplitSemisimpleQuotient("enumeration needs a split basic algebra")
    # graded radical pieces e_i r e_j
    pieces = []
    for r in rad:
        for i, ei in enumerate(prims):
            for j, ej in enumerate(prims):
                v = alg.mul(ei, alg.mul(r, ej))
                if any(c != fld.zero for c in v):
                    pieces.append((i, j, v))
    pieces_basis = []
    seen = []
    for (i, j, v) in pieces:
        if not _in_span(fld, seen, v):
            seen.append(v)
            pieces_basis.append((i, j, v))
    # coordinates of each algebra basis element over prims + pieces
    full = prims + [v for (_, _, v) in pieces_basis]
    B = Mat.from_cols(fld, full, alg.dim)
    coords = []
    for n in range(alg.dim):
        sol = B.solve(alg.basis_vec(n))
        if sol is None:
            raise UnsplitSemisimpleQuotient("basis escapes idempotents plus radical")
        coords.append(sol)
    grid = fld.elements() if fld.is_finite() else fld.grid()
    out = []
    count = 0
    npr = len(prims)
    for dims in itertools.product(range(dmax + 1), repeat=npr):
        total = sum(dims)
        if total == 0 or total > dmax:
            continue
        offs = []
        o = 0
        for d in dims:
            offs.append(o)
            o += d
        size = 1
        for (i, j, _) in pieces_basis:
            size *= len(grid) ** (dims[i] * dims[j])
        count += size
        if count > budget:
            raise RuntimeError("algebra module enumeration over budget")
        spaces = []
        for (i, j, _) in pieces_basis:
            spaces.append(list(_mat_space(fld, dims[i], dims[j], grid)))
        for combo in itertools.product(*spaces):
            piece_mats = []
            for (idx, (i, j, _)) in enumerate(pieces_basis):
                m = Mat.zeros(fld, total, total)
                blk = combo[idx]
                for r in range(dims[i]):
                    for c in range(dims[j]):
                        m.rows[offs[i] + r][offs[j] + c] = blk.rows[r][c]
                piece_mats.append(m)
            prim_mats = []
            for i in range(npr):
                m = Mat.zeros(fld, total, total)
                for r in range(dims[i]):
                    m.rows[offs[i] + r][offs[i] + r] = fld.one
                prim_mats.append(m)
            gens = prim_mats + piece_mats
            mats = []
            for n in range(alg.dim):
                m = Mat.zeros(fld, total, total)
                for c, g in zip(coords[n], gens):
                    if c != fld.zero:
                        m = m + g.scale(c)
                mats.append(m)
            M = AlgMod(alg, total, mats)
            try:
                M.check()
            except ValueError:
                continue
            out.append(M)
    return out


def _mat_space(field, m, n, grid):
    if m * n == 0:
        yield Mat.zeros(field, m, n)
        return
    for entries in itertools.product(grid, repeat=m * n):
        yield Mat(field, [list(entries[r * n:(r + 1) * n]) for r in range(m)], ncols=n)
