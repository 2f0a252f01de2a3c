"""Finite-dimensional modules over a layered tensor algebra with
derivation, their two-component morphisms, Hom/End spaces by exact linear
algebra, endolength, indecomposability, isomorphism testing, and the
brute-force enumeration oracle used by the verification suites.

A module assigns each point a coefficient vector space (over the ground
field, or over k(x) for generically-valued modules) and each full arrow a
matrix; rational points also carry the action of x.  A morphism is a pair
(f0, f1): pointwise maps plus a value on every dashed arrow, extended
bilinearly over degree-0 paths.
"""

from __future__ import annotations

import itertools

from .algebras import ENUM_BUDGET, AlgMod, FDAlgebra
from .bigraph import Ditalgebra, PathElement
from .linalg import Mat
from .scalars import FracField, Poly


class ZeroModule(ValueError):
    pass


class DomainMismatch(ValueError):
    pass


class InvalidModule(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class DitModule:
    """Representation of a ditalgebra: per-point spaces and per-arrow
    matrices over a coefficient field containing the ground field."""

    def __init__(self, dit: Ditalgebra, dims, arr=None, xact=None, coef=None, check=True):
        self.dit = dit
        self.coef = coef if coef is not None else dit.field
        self.dims = tuple(dims)
        self.arr = dict(arr or {})
        self.xact = dict(xact or {})
        z = self.coef.zero
        for a in dit.full:
            if a.name not in self.arr:
                self.arr[a.name] = Mat.zeros(self.coef, self.dims[a.t], self.dims[a.s])
        for i in dit.points():
            if dit.is_rational(i) and i not in self.xact:
                if self.dims[i]:
                    raise InvalidModule(f"missing x-action at rational point {i}")
                self.xact[i] = Mat.zeros(self.coef, 0, 0)
        if check:
            self.validate()

    # -- scalars ---------------------------------------------------------
    def emb(self, c):
        """Embed a ground-field scalar into the coefficient field."""
        if self.coef == self.dit.field:
            return c
        if isinstance(self.coef, FracField) and self.coef.base == self.dit.field:
            return self.coef.of(c)
        raise InvalidModule("unsupported coefficient field")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def validate(self):
        for a in self.dit.full:
            m = self.arr[a.name]
            if (m.m, m.n) != (self.dims[a.t], self.dims[a.s]):
                raise InvalidModule(f"matrix shape for arrow {a.name}")
        for i in self.dit.points():
            if self.dit.is_rational(i) and self.dims[i]:
                X = self.xact[i]
                if (X.m, X.n) != (self.dims[i], self.dims[i]):
                    raise InvalidModule(f"x-action shape at {i}")
                g = self.dit.base[i]
                gX = _poly_at(g, X, self)
                if not gX.is_invertible():
                    raise InvalidModule(f"localizer does not act invertibly at point {i}")
        for gen in self.dit.ideal:
            for (i, j), m in self.act_map(gen).items():
                if not m.is_zero():
                    raise InvalidModule("ideal generator acts nonzero")

    # -- path action -------------------------------------------------------
    def x_power(self, i: int, e: int) -> Mat:
        if e == 0:
            return Mat.eye(self.coef, self.dims[i])
        return self.xact[i].pow(e)

    def eval_path(self, key) -> Mat:
        """Action matrix of a degree-0 decorated path."""
        start, arrows, exps = key
        m = self.x_power(start, exps[0])
        pt = start
        for j, name in enumerate(arrows):
            a = self.dit.arrow(name)
            m = self.arr[name] * m
            pt = a.t
            if exps[j + 1]:
                m = self.x_power(pt, exps[j + 1]) * m
        return m

    def act_map(self, el: PathElement):
        """Matrices of a degree-0 element, grouped by (start, end)."""
        out = {}
        for key, c in el.terms.items():
            if el.alg.key_degree(key) != 0:
                raise ValueError("action of non-degree-0 element")
            i, j = key[0], el.alg.key_end(key)
            m = self.eval_path(key).scale(self.emb(c))
            out[(i, j)] = out.get((i, j), Mat.zeros(self.coef, self.dims[j], self.dims[i])) + m
        return out

    # -- constructions -------------------------------------------------------
    @staticmethod
    def zero(dit: Ditalgebra, coef=None) -> "DitModule":
        return DitModule(dit, [0] * dit.n, coef=coef)

    @staticmethod
    def simple(dit: Ditalgebra, i: int, lam=None, coef=None) -> "DitModule":
        """The one-dimensional module at a trivial point, or a one-dim
        module at a rational point with x acting by the scalar lam."""
        dims = [0] * dit.n
        dims[i] = 1
        coef_ = coef if coef is not None else dit.field
        xact = {}
        if dit.is_rational(i):
            if lam is None:
                raise InvalidModule("rational point needs an eigenvalue")
            xact[i] = Mat(coef_, [[lam]])
        for j in dit.points():
            if dit.is_rational(j) and j != i:
                xact[j] = Mat.zeros(coef_, 0, 0)
        return DitModule(dit, dims, {}, xact, coef_)

    def direct_sum(self, other: "DitModule") -> "DitModule":
        dims = [a + b for a, b in zip(self.dims, other.dims)]
        arr = {}
        for a in self.dit.full:
            arr[a.name] = _blockdiag2(self.coef, self.arr[a.name], other.arr[a.name])
        xact = {}
        for i in self.dit.points():
            if self.dit.is_rational(i):
                xact[i] = _blockdiag2(self.coef, self.xact[i], other.xact[i])
        return DitModule(self.dit, dims, arr, xact, self.coef, check=False)

    def base_change(self, mats) -> "DitModule":
        """Conjugate by invertible per-point matrices (new = P old P^-1)."""
        invs = {i: mats[i].inv() for i in self.dit.points() if self.dims[i]}
        arr = {}
        for a in self.dit.full:
            m = self.arr[a.name]
            P = mats[a.t] if self.dims[a.t] else Mat.zeros(self.coef, 0, 0)
            Q = invs.get(a.s, Mat.zeros(self.coef, self.dims[a.s], self.dims[a.s]))
            arr[a.name] = (P * m * Q) if self.dims[a.t] and self.dims[a.s] else m
        xact = {}
        for i in self.dit.points():
            if self.dit.is_rational(i):
                xact[i] = mats[i] * self.xact[i] * invs[i] if self.dims[i] else self.xact[i]
        return DitModule(self.dit, self.dims, arr, xact, self.coef, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, DitModule)
            and self.dit is other.dit
            and self.dims == other.dims
            and self.arr == other.arr
            and self.xact == other.xact
        )

    def __repr__(self):
        return f"DitModule(dims={self.dims})"


def _blockdiag2(field, a: Mat, b: Mat) -> Mat:
    return Mat.block_diag(field, [a, b])


def _poly_at(g: Poly, X: Mat, module: DitModule) -> Mat:
    n = X.m
    acc = Mat.zeros(module.coef, n, n)
    for c in reversed(list(g.coeffs)):
        acc = acc * X + Mat.eye(module.coef, n).scale(module.emb(c))
    return acc


class DitMorphism:
    """Two-component morphism between modules over the same ditalgebra."""

    def __init__(self, src: DitModule, dst: DitModule, f0, f1):
        self.src = src
        self.dst = dst
        self.f0 = dict(f0)
        self.f1 = dict(f1)

    @staticmethod
    def identity(M: DitModule) -> "DitMorphism":
        f0 = {i: Mat.eye(M.coef, M.dims[i]) for i in M.dit.points()}
        f1 = {v.name: Mat.zeros(M.coef, M.dims[v.t], M.dims[v.s]) for v in M.dit.dashed}
        return DitMorphism(M, M, f0, f1)

    @staticmethod
    def zero(src: DitModule, dst: DitModule) -> "DitMorphism":
        f0 = {i: Mat.zeros(src.coef, dst.dims[i], src.dims[i]) for i in src.dit.points()}
        f1 = {v.name: Mat.zeros(src.coef, dst.dims[v.t], src.dims[v.s]) for v in src.dit.dashed}
        return DitMorphism(src, dst, f0, f1)

    def f1_eval(self, el: PathElement):
        """Value of the bilinear extension of f1 on a degree-1 element,
        grouped by (start, end) component."""
        out = {}
        src, dst = self.src, self.dst
        alg = el.alg
        for key, c in el.terms.items():
            start, arrows, exps = key
            degs = [src.dit.arrow(a).deg for a in arrows]
            if sum(degs) != 1:
                raise ValueError("f1 extension needs a degree-1 element")
            k = degs.index(1)
            v = arrows[k]
            # right part acts on the source, left part on the target
            right_key = (start, arrows[:k], exps[: k + 1])
            vstart = src.dit.arrow(v).s
            vend = src.dit.arrow(v).t
            left_key = (vend, arrows[k + 1:], exps[k + 1:])
            R = src.eval_path(right_key)
            L = dst.eval_path(left_key)
            m = (L * self.f1[v] * R).scale(src.emb(c))
            i, j = start, alg.key_end(key)
            out[(i, j)] = out.get((i, j), Mat.zeros(src.coef, dst.dims[j], src.dims[i])) + m
        return out

    def check(self) -> bool:
        """The defining compatibility: for every full arrow a,
        a.f0 = f0.a + f1(delta a), and f0 commutes with x at rational
        points."""
        src, dst = self.src, self.dst
        for i in src.dit.points():
            if src.dit.is_rational(i) and src.dims[i] and dst.dims[i]:
                if self.f0[i] * src.xact[i] != dst.xact[i] * self.f0[i]:
                    return False
        for a in src.dit.full:
            lhs = dst.arr[a.name] * self.f0[a.s]
            rhs = self.f0[a.t] * src.arr[a.name]
            d = src.dit.delta_of(a.name)
            if not d.is_zero():
                for (i, j), m in self.f1_eval(d).items():
                    rhs = rhs + m
            if lhs != rhs:
                return False
        return True

    def compose(self, other: "DitMorphism") -> "DitMorphism":
        """self after other."""
        if other.dst is not self.src and other.dst.dims != self.src.dims:
            raise DomainMismatch("codomain/domain mismatch")
        f, g = other, self
        src, mid, dst = f.src, f.dst, g.dst
        f0 = {i: g.f0[i] * f.f0[i] for i in src.dit.points()}
        f1 = {}
        for v in src.dit.dashed:
            acc = g.f0[v.t] * f.f1[v.name] + g.f1[v.name] * f.f0[v.s]
            dv = src.dit.delta_of(v.name)
            for key, c in dv.terms.items():
                start, arrows, exps = key
                degs = [src.dit.arrow(a).deg for a in arrows]
                pos = [k for k, d in enumerate(degs) if d == 1]
                if len(pos) != 2:
                    raise ValueError("delta of a dashed arrow must have degree 2")
                k1, k2 = pos
                u_early, u_late = arrows[k1], arrows[k2]
                right_key = (start, arrows[:k1], exps[: k1 + 1])
                mid_key = (src.dit.arrow(u_early).t, arrows[k1 + 1: k2], exps[k1 + 1: k2 + 1])
                left_key = (src.dit.arrow(u_late).t, arrows[k2 + 1:], exps[k2 + 1:])
                term = (
                    dst.eval_path(left_key)
                    * g.f1[u_late]
                    * mid.eval_path(mid_key)
                    * f.f1[u_early]
                    * src.eval_path(right_key)
                ).scale(src.emb(c))
                acc = acc + term
            f1[v.name] = acc
        return DitMorphism(src, dst, f0, f1)

    def f0_blockdiag(self) -> Mat:
        return Mat.block_diag(self.src.coef, [self.f0[i] for i in self.src.dit.points()])

    def is_invertible(self) -> bool:
        return all(self.f0[i].is_invertible() for i in self.src.dit.points())

    def scale(self, c) -> "DitMorphism":
        return DitMorphism(
            self.src,
            self.dst,
            {i: m.scale(c) for i, m in self.f0.items()},
            {v: m.scale(c) for v, m in self.f1.items()},
        )

    def add(self, other: "DitMorphism") -> "DitMorphism":
        return DitMorphism(
            self.src,
            self.dst,
            {i: self.f0[i] + other.f0[i] for i in self.f0},
            {v: self.f1[v] + other.f1[v] for v in self.f1},
        )

    def __repr__(self):
        return f"DitMorphism({self.src.dims} -> {self.dst.dims})"


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------

def hom_space(dit: Ditalgebra, M: DitModule, N: DitModule):
    """Exact basis of the space of morphisms M -> N."""
    coef = M.coef
    z = coef.zero
    # unknown layout
    slots = []  # (kind, id, shape, offset)
    offset = 0
    for i in dit.points():
        sh = (N.dims[i], M.dims[i])
        slots.append(("f0", i, sh, offset))
        offset += sh[0] * sh[1]
    for v in dit.dashed:
        sh = (N.dims[v.t], M.dims[v.s])
        slots.append(("f1", v.name, sh, offset))
        offset += sh[0] * sh[1]
    total = offset
    if total == 0:
        return []
    rows = []

    def unknown_index(kind, ident):
        for k, idn, sh, off in slots:
            if k == kind and idn == ident:
                return sh, off
        raise KeyError

    def add_equation(coeff_cells):
        """coeff_cells: dict (kind, ident, r, c) -> coefficient."""
        row = [z] * total
        for (kind, ident, r, c), val in coeff_cells.items():
            sh, off = unknown_index(kind, ident)
            row[off + r * sh[1] + c] = row[off + r * sh[1] + c] + val
        rows.append(row)

    # x-action commuting at rational points: f0_i X_M - X_N f0_i = 0
    for i in dit.points():
        if not dit.is_rational(i) or M.dims[i] == 0 or N.dims[i] == 0:
            continue
        XM, XN = M.xact[i], N.xact[i]
        for r in range(N.dims[i]):
            for c in range(M.dims[i]):
                cells = {}
                for k in range(M.dims[i]):
                    cells[("f0", i, r, k)] = cells.get(("f0", i, r, k), z) + XM.rows[k][c]
                for k in range(N.dims[i]):
                    cells[("f0", i, k, c)] = cells.get(("f0", i, k, c), z) - XN.rows[r][k]
                add_equation(cells)
    # full-arrow compatibility: N_a f0_s - f0_t M_a - f1(delta a) = 0
    for a in dit.full:
        dims_out, dims_in = N.dims[a.t], M.dims[a.s]
        d = dit.delta_of(a.name)
        for r in range(dims_out):
            for c in range(dims_in):
                cells = {}
                Na = N.arr[a.name]
                Ma = M.arr[a.name]
                for k in range(N.dims[a.s]):
                    cells[("f0", a.s, k, c)] = cells.get(("f0", a.s, k, c), z) + Na.rows[r][k]
                for k in range(M.dims[a.t]):
                    cells[("f0", a.t, r, k)] = cells.get(("f0", a.t, r, k), z) - Ma.rows[k][c]
                # f1 contribution, linear in the f1 unknowns
                for key, cc in d.terms.items():
                    start, arrows, exps = key
                    degs = [dit.arrow(x).deg for x in arrows]
                    k1 = degs.index(1)
                    v = arrows[k1]
                    right_key = (start, arrows[:k1], exps[: k1 + 1])
                    left_key = (dit.arrow(v).t, arrows[k1 + 1:], exps[k1 + 1:])
                    R = M.eval_path(right_key)
                    L = N.eval_path(left_key)
                    sc = M.emb(cc)
                    va = dit.arrow(v)
                    for rr in range(N.dims[va.t]):
                        for ccol in range(M.dims[va.s]):
                            coefv = L.rows[r][rr] * R.rows[ccol][c] * sc
                            if coefv != z:
                                cells[("f1", v, rr, ccol)] = cells.get(("f1", v, rr, ccol), z) - coefv
                add_equation(cells)
    if not rows:
        kernel = Mat.zeros(coef, 1, total).kernel()
    else:
        kernel = Mat(coef, rows).kernel()
    out = []
    for vec in kernel:
        f0 = {}
        f1 = {}
        for kind, ident, sh, off in slots:
            m = Mat(coef, [[vec[off + r * sh[1] + c] for c in range(sh[1])] for r in range(sh[0])], ncols=sh[1])
            if kind == "f0":
                f0[ident] = m
            else:
                f1[ident] = m
        out.append(DitMorphism(M, N, f0, f1))
    return out


def end_algebra(dit: Ditalgebra, M: DitModule):
    """Endomorphisms of M as an FDAlgebra under plain composition,
    together with the morphism basis.  M is a left module over it via
    f |-> f0 (blockdiag); as a right module over the opposite algebra this
    realizes the action m.(f0,f1) = f0(m)."""
    basis = hom_space(dit, M, M)
    coef = M.coef
    n = M.total_dim
    flat_of = lambda f: _flatten_morphism(f)
    B = Mat.from_cols(coef, [flat_of(f) for f in basis], _morphism_length(M, M)) if basis else None
    table = []
    for f in basis:
        rowt = []
        for g in basis:
            h = f.compose(g)
            sol = B.solve(flat_of(h))
            if sol is None:
                raise AssertionError("composition left the endomorphism space")
            rowt.append(sol)
        table.append(rowt)
    unit_sol = B.solve(flat_of(DitMorphism.identity(M))) if basis else []
    alg = FDAlgebra(coef, table, unit_sol)
    return alg, basis


def _morphism_length(M: DitModule, N: DitModule) -> int:
    total = 0
    for i in M.dit.points():
        total += N.dims[i] * M.dims[i]
    for v in M.dit.dashed:
        total += N.dims[v.t] * M.dims[v.s]
    return total


def _flatten_morphism(f: DitMorphism):
    out = []
    for i in f.src.dit.points():
        out.extend([f.f0[i].rows[r][c] for r in range(f.f0[i].m) for c in range(f.f0[i].n)])
    for v in f.src.dit.dashed:
        m = f.f1[v.name]
        out.extend([m.rows[r][c] for r in range(m.m) for c in range(m.n)])
    return out


def endolength(dit: Ditalgebra, M: DitModule) -> int:
    """Length of M as a right module over its endomorphism algebra."""
    if M.total_dim == 0:
        return 0
    alg, basis = end_algebra(dit, M)
    mats = [f.f0_blockdiag() for f in basis]
    mod = AlgMod(alg, M.total_dim, mats)
    return mod.length()


def is_indecomposable(dit: Ditalgebra, M: DitModule) -> bool:
    if M.total_dim == 0:
        raise ZeroModule("the zero module is not indecomposable")
    alg, _ = end_algebra(dit, M)
    return alg.find_nontrivial_idempotent() is None


def are_isomorphic(dit: Ditalgebra, M: DitModule, N: DitModule):
    """An isomorphism M -> N (invertible f0 at every point), or None."""
    if M.dims != N.dims:
        return None
    if M.total_dim == 0:
        return DitMorphism.zero(M, N)
    homs = hom_space(dit, M, N)
    if not homs:
        return None
    coef = M.coef
    # search for a combination with invertible blockdiagonal f0
    blocks = [h.f0_blockdiag() for h in homs]
    combo = _invertible_combo_coeffs(coef, blocks)
    if combo is None:
        return None
    out = homs[0].scale(combo[0])
    for c, h in zip(combo[1:], homs[1:]):
        out = out.add(h.scale(c))
    return out


def _invertible_combo_coeffs(field, mats, budget=ENUM_BUDGET):
    from .algebras import greedy_invertible_combo

    k = len(mats)
    z, o = field.zero, field.one
    for i, m in enumerate(mats):
        if m.is_invertible():
            coeffs = [z] * k
            coeffs[i] = o
            return coeffs
    g = greedy_invertible_combo(field, mats)
    if g is not None:
        return g[1]
    if field.is_finite() and field.char ** k <= budget:
        for coeffs in itertools.product(field.elements(), repeat=k):
            M = None
            for c, mm in zip(coeffs, mats):
                t = mm.scale(c)
                M = t if M is None else M + t
            if M is not None and M.is_invertible():
                return list(coeffs)
        return None
    grid = field.grid()
    head = min(k, 4)
    for coeffs in itertools.product(grid, repeat=head):
        full = list(coeffs) + [o] * (k - head)
        M = None
        for c, mm in zip(full, mats):
            t = mm.scale(c)
            M = t if M is None else M + t
        if M.is_invertible():
            return full
    for i in range(k):
        for j in range(k):
            M = mats[i] + mats[j]
            if M.is_invertible():
                coeffs = [z] * k
                coeffs[i] = coeffs[i] + o
                coeffs[j] = coeffs[j] + o
                return coeffs
    return None


# ---------------------------------------------------------------------------
# enumeration oracle
# ---------------------------------------------------------------------------

def _matrix_space(field, m, n, grid):
    if m * n == 0:
        yield Mat.zeros(field, m, n)
        return
    for entries in itertools.product(grid, repeat=m * n):
        yield Mat(field, [list(entries[r * n:(r + 1) * n]) for r in range(m)])


def enumerate_modules_dims(dit: Ditalgebra, dim_vectors, budget: int = 2_000_000):
    """All modules with the listed dimension vectors over the enumeration
    grid (every matrix over F_p; the deterministic parameter grid over
    Q), filtered by the module axioms."""
    field = dit.field
    grid = field.grid()
    out = []
    count = 0
    for dims in dim_vectors:
        gens = []
        for i in dit.points():
            if dit.is_rational(i) and dims[i]:
                gens.append(("x", i, dims[i], dims[i]))
        for a in dit.full:
            if dims[a.t] and dims[a.s]:
                gens.append(("a", a.name, dims[a.t], dims[a.s]))
        size = 1
        for _, _, mm, nn in gens:
            size *= len(grid) ** (mm * nn)
        count += size
        if count > budget:
            raise BudgetExceeded(f"enumeration would visit > {budget} candidates")
        for combo in itertools.product(*[list(_matrix_space(field, mm, nn, grid)) for _, _, mm, nn in gens]):
            arr = {}
            xact = {}
            for (kind, ident, _, _), mat in zip(gens, combo):
                if kind == "x":
                    xact[ident] = mat
                else:
                    arr[ident] = mat
            try:
                M = DitModule(dit, dims, arr, xact)
            except InvalidModule:
                continue
            out.append(M)
    return out


def enumerate_modules(dit: Ditalgebra, dmax: int, budget: int = 2_000_000):
    """All modules with total dimension <= dmax over the enumeration grid,
    filtered by the module axioms."""
    return enumerate_modules_dims(dit, _dim_vectors(dit.n, dmax), budget)


def _dim_vectors(n, dmax):
    for total in range(1, dmax + 1):
        for dims in itertools.product(range(total + 1), repeat=n):
            if sum(dims) == total:
                yield dims


def enumerate_indecomposables(dit: Ditalgebra, dmax: int, budget: int = 2_000_000):
    """Exhaustive-up-to-isomorphism list of indecomposables of total
    dimension <= dmax (complete over F_p; grid-restricted over Q)."""
    reps = []
    for M in enumerate_modules(dit, dmax, budget):
        if not is_indecomposable(dit, M):
            continue
        if any(N.dims == M.dims and are_isomorphic(dit, M, N) is not None for N in reps):
            continue
        reps.append(M)
    return reps


# ---------------------------------------------------------------------------
# module text format
# ---------------------------------------------------------------------------

def module_to_text(M: DitModule) -> str:
    lines = ["module", "dims " + " ".join(str(d) for d in M.dims)]

    def fmt_entry(x):
        return str(x).replace(" ", "")

    for i in M.dit.points():
        if M.dit.is_rational(i) and M.dims[i]:
            rows = ["[" + " ".join(fmt_entry(e) for e in r) + "]" for r in M.xact[i].rows]
            lines.append(f"x {i + 1} = " + " ".join(rows))
    for a in M.dit.full:
        m = M.arr[a.name]
        if m.m and m.n:
            rows = ["[" + " ".join(fmt_entry(e) for e in r) + "]" for r in m.rows]
            lines.append(f"arrow {a.name} = " + " ".join(rows))
    return "\n".join(lines) + "\n"


def module_from_text(dit: Ditalgebra, text: str, coef=None) -> DitModule:
    from .bigraph import ParseError

    coef = coef or dit.field
    dims = None
    arr = {}
    xact = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "module":
            continue
        if line.startswith("dims "):
            dims = tuple(int(t) for t in line[5:].split())
        elif line.startswith("x "):
            m = _parse_mat_line(coef, line[2:], ln)
            xact[m[0] - 1] = m[1]
        elif line.startswith("arrow "):
            name, mat = _parse_named_mat(coef, line[6:], ln)
            arr[name] = mat
        else:
            raise ParseError(f"unrecognized module line {line!r}", ln)
    if dims is None:
        raise ParseError("missing dims")
    return DitModule(dit, dims, arr, xact, coef)


def _parse_mat_line(field, s, ln):
    from .bigraph import ParseError

    head, _, rest = s.partition("=")
    try:
        ident = int(head.strip())
    except ValueError:
        raise ParseError(f"bad x line {s!r}", ln)
    return ident, _parse_matrix(field, rest.strip(), ln)


def _parse_named_mat(field, s, ln):
    head, _, rest = s.partition("=")
    return head.strip(), _parse_matrix(field, rest.strip(), ln)


def _parse_matrix(field, s, ln):
    from .bigraph import ParseError

    rows = []
    for chunk in s.split("]"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not chunk.startswith("["):
            raise ParseError(f"bad matrix chunk {chunk!r}", ln)
        entries = chunk[1:].split()
        rows.append([field.parse(e) for e in entries])
    return Mat(field, rows)


def morphism_to_text(f: DitMorphism) -> str:
    lines = ["morphism"]

    def emit(prefix, ident, m):
        if m.m and m.n:
            rows = ["[" + " ".join(str(e).replace(" ", "") for e in r) + "]" for r in m.rows]
            lines.append(f"{prefix} {ident} = " + " ".join(rows))

    for i in f.src.dit.points():
        emit("f0", i + 1, f.f0[i])
    for v in f.src.dit.dashed:
        emit("f1", v.name, f.f1[v.name])
    return "\n".join(lines) + "\n"


def morphism_from_text(src: DitModule, dst: DitModule, text: str) -> DitMorphism:
    from .bigraph import ParseError

    coef = src.coef
    f = DitMorphism.zero(src, dst)
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == "morphism":
            continue
        if line.startswith("f0 "):
            head, _, rest = line[3:].partition("=")
            i = int(head.strip()) - 1
            f.f0[i] = _parse_matrix(coef, rest.strip(), ln)
        elif line.startswith("f1 "):
            head, _, rest = line[3:].partition("=")
            f.f1[head.strip()] = _parse_matrix(coef, rest.strip(), ln)
        else:
            raise ParseError(f"unrecognized morphism line {line!r}", ln)
    return f
