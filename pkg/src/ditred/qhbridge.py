"""The bridge onto module categories filtered by standard modules.

For a layer over a product of copies of the ground field with
finite-dimensional degree-0 part, the endomorphisms of the regular module
inside the two-component morphism category form a finite-dimensional
algebra (taken with opposite multiplication).  Hom from the regular
module embeds the whole module category onto the induced modules over
that algebra, which coincide with the modules filtered by the induced
images of the simples.  This module computes the right algebra, the
embedding functor, induction, filtration witnesses and their exhaustive
refutations, quasi-heredity certificates, and Morita-basic reductions.
"""

from __future__ import annotations

from .algebras import (
    AlgMod,
    FDAlgebra,
    basic_algebra as _basic_algebra_raw,
    ext1_dim,
    has_filtration_by,
    standard_modules,
    _unit,
)
from .bigraph import Ditalgebra, PathElement
from .ditmod import DitModule, DitMorphism, end_algebra, hom_space
from .linalg import Mat, span_basis


class NotSpecial(ValueError):
    """The bridge needs a trivial base and a finite-dimensional degree-0
    part."""


class OracleBudgetExceeded(RuntimeError):
    pass


def _require_special(dit: Ditalgebra):
    if any(dit.is_rational(i) for i in dit.points()):
        raise NotSpecial("rational components in the base")
    if not dit.check_directed() and dit.full:
        # a finite degree-0 part only needs acyclicity of the full arrows
        try:
            dit.degree0_path_basis()
        except Exception as e:
            raise NotSpecial(f"degree-0 part is not finite-dimensional: {e}")


def regular_module(dit: Ditalgebra):
    """The degree-0 part modulo the ideal as a left module over itself;
    returns (module, basis_keys, right_mult) where right_mult(arrow_name)
    gives the right-multiplication matrices per point."""
    _require_special(dit)
    keys = dit.degree0_path_basis()
    field = dit.field
    # quotient by the ideal: span of all p*g*q
    gens = [g for g in dit.ideal if not g.is_zero()]
    index = {k: n for n, k in enumerate(keys)}

    def vec(el: PathElement):
        v = [field.zero] * len(keys)
        for k, c in el.terms.items():
            v[index[k]] = c
        return v

    paths = [PathElement(dit.alg, {k: field.one}) for k in keys]
    ideal_vecs = []
    for g in gens:
        for p in paths:
            for q in paths:
                w = p * g * q
                if not w.is_zero():
                    ideal_vecs.append(vec(w))
    ideal_basis = span_basis(field, ideal_vecs)
    # basis of the quotient: kept keys
    kept = []
    cur = list(ideal_basis)
    for n, k in enumerate(keys):
        v = [field.zero] * len(keys)
        v[n] = field.one
        probe = Mat.from_cols(field, cur + [v], len(keys))
        if probe.rank() > len(cur):
            cur.append(v)
            kept.append(k)
    # coordinates of a path element in the quotient
    full_basis = ideal_basis + [_keyvec(field, keys, index, k) for k in kept]
    Bmat = Mat.from_cols(field, full_basis, len(keys))

    def coords(el: PathElement):
        sol = Bmat.solve(vec(el))
        return sol[len(ideal_basis):]

    # group kept basis keys by endpoint
    by_point = {i: [] for i in dit.points()}
    for k in kept:
        by_point[dit.alg.key_end(k)].append(k)
    dims = [len(by_point[i]) for i in dit.points()]
    offsets = {}
    for i in dit.points():
        for loc, k in enumerate(by_point[i]):
            offsets[k] = (i, loc)
    kept_index = {k: n for n, k in enumerate(kept)}

    def el_to_point_vecs(el: PathElement):
        co = coords(el)
        out = {i: [field.zero] * dims[i] for i in dit.points()}
        for n, k in enumerate(kept):
            i, loc = offsets[k]
            out[i][loc] = co[n]
        return out

    arr = {}
    for a in dit.full:
        m = Mat.zeros(field, dims[a.t], dims[a.s])
        for cidx, k in enumerate(by_point[a.s]):
            prod = dit.alg.gen(a.name) * PathElement(dit.alg, {k: field.one})
            pv = el_to_point_vecs(prod)
            for r in range(dims[a.t]):
                m.rows[r][cidx] = pv[a.t][r]
        arr[a.name] = m
    M = DitModule(dit, dims, arr, {}, dit.field)

    def right_mult(el: PathElement):
        """Right multiplication by a degree-0 element, per point blocks."""
        blocks = {i: Mat.zeros(field, dims[i], dims[i]) for i in dit.points()}
        for i in dit.points():
            for cidx, k in enumerate(by_point[i]):
                prod = PathElement(dit.alg, {k: field.one}) * el
                pv = el_to_point_vecs(prod)
                for r in range(dims[i]):
                    blocks[i].rows[r][cidx] = pv[i][r]
        return blocks

    return M, kept, right_mult, el_to_point_vecs


class RightAlgebra:
    """The opposite endomorphism algebra of the regular module in the
    two-component morphism category, with the canonical embedding of the
    degree-0 part."""

    def __init__(self, dit: Ditalgebra):
        _require_special(dit)
        self.dit = dit
        self.regular, self.basis_keys, self._right_mult, self._el_vecs = regular_module(dit)
        comp_alg, morphs = end_algebra(dit, self.regular)
        self.alg = comp_alg.op()
        self.morphs = morphs

    @property
    def dim(self) -> int:
        return self.alg.dim

    def embed(self, el: PathElement):
        """Coordinates of right-multiplication by a degree-0 element."""
        blocks = self._right_mult(el)
        f0 = {i: blocks[i] for i in self.dit.points()}
        f1 = {v.name: Mat.zeros(self.dit.field, self.regular.dims[v.t], self.regular.dims[v.s]) for v in self.dit.dashed}
        mor = DitMorphism(self.regular, self.regular, f0, f1)
        return self._coords(mor)

    def _coords(self, mor: DitMorphism):
        from .ditmod import _flatten_morphism, _morphism_length

        B = Mat.from_cols(
            self.dit.field,
            [_flatten_morphism(f) for f in self.morphs],
            _morphism_length(self.regular, self.regular),
        )
        sol = B.solve(_flatten_morphism(mor))
        if sol is None:
            raise AssertionError("endomorphism outside the computed algebra")
        return sol

    def hom_module(self, N: DitModule) -> AlgMod:
        """Hom(regular, N) as a left module over the right algebra, the
        action being pre-composition."""
        homs = hom_space(self.dit, self.regular, N)
        from .ditmod import _flatten_morphism, _morphism_length

        d = len(homs)
        if d == 0:
            return AlgMod(self.alg, 0, [Mat.zeros(self.dit.field, 0, 0)] * self.alg.dim)
        B = Mat.from_cols(self.dit.field, [_flatten_morphism(h) for h in homs], _morphism_length(self.regular, N))
        mats = []
        for g in self.morphs:
            cols = []
            for h in homs:
                hg = h.compose(g)
                sol = B.solve(_flatten_morphism(hg))
                if sol is None:
                    raise AssertionError("pre-composition left the Hom space")
                cols.append(sol)
            mats.append(Mat.from_cols(self.dit.field, cols, d))
        return AlgMod(self.alg, d, mats)

    def induce(self, M: DitModule) -> AlgMod:
        """Tensor over the degree-0 part: the right algebra acting on the
        quotient of (algebra) x (module) by the bimodule relations."""
        fld = self.dit.field
        G = self.alg.dim
        mdim = M.total_dim
        moffs = []
        for i in self.dit.points():
            for t in range(M.dims[i]):
                moffs.append((i, t))
        midx = {p: n for n, p in enumerate(moffs)}
        total = G * mdim

        def tens(gi, mi):
            return gi * mdim + mi

        rels = []
        # relations gamma.rho_a (x) m - gamma (x) a.m for a over a spanning
        # set of the degree-0 part (the kept path basis)
        for key in self.basis_keys:
            el = PathElement(self.dit.alg, {key: fld.one})
            emb = self.embed(el)  # coordinates of rho_el in the algebra
            js, jt = key[0], self.dit.alg.key_end(key)
            # action of el on M: block from js to jt
            act = M.eval_path(key)
            for gi in range(G):
                # gamma_i . rho_el in the (opposite) algebra
                prod = self.alg.mul(self.alg.basis_vec(gi), emb)
                for t_src in range(M.dims[js]):
                    row = [fld.zero] * total
                    for gk in range(G):
                        if prod[gk] != fld.zero:
                            row[tens(gk, midx[(js, t_src)])] = row[tens(gk, midx[(js, t_src)])] + prod[gk]
                    for t_dst in range(M.dims[jt]):
                        v = act.rows[t_dst][t_src]
                        if v != fld.zero:
                            row[tens(gi, midx[(jt, t_dst)])] = row[tens(gi, midx[(jt, t_dst)])] - v
                    rels.append(row)
        # also the idempotent relations gamma.e_i (x) m - gamma (x) e_i m
        for i in self.dit.points():
            el = self.dit.alg.e(i)
            emb = self.embed(el)
            for gi in range(G):
                prod = self.alg.mul(self.alg.basis_vec(gi), emb)
                for (j, t), mi in midx.items():
                    row = [fld.zero] * total
                    for gk in range(G):
                        if prod[gk] != fld.zero:
                            row[tens(gk, mi)] = row[tens(gk, mi)] + prod[gk]
                    if j == i:
                        row[tens(gi, mi)] = row[tens(gi, mi)] - fld.one
                    if any(x != fld.zero for x in row):
                        rels.append(row)
        rel_basis = span_basis(fld, rels)
        # quotient space coordinates
        keep = []
        cur = list(rel_basis)
        for n in range(total):
            v = [fld.zero] * total
            v[n] = fld.one
            probe = Mat.from_cols(fld, cur + [v], total)
            if probe.rank() > len(cur):
                cur.append(v)
                keep.append(n)
        full = rel_basis + [_unitvec(fld, total, n) for n in keep]
        Bmat = Mat.from_cols(fld, full, total)

        def project(v):
            sol = Bmat.solve(v)
            return sol[len(rel_basis):]

        qdim = len(keep)
        mats = []
        for bi in range(G):
            cols = []
            for n in keep:
                gi, mi = divmod(n, mdim)
                prod = self.alg.mul(self.alg.basis_vec(bi), self.alg.basis_vec(gi))
                v = [fld.zero] * total
                for gk in range(G):
                    if prod[gk] != fld.zero:
                        v[tens(gk, mi)] = v[tens(gk, mi)] + prod[gk]
                cols.append(project(v))
            mats.append(Mat.from_cols(fld, cols, qdim) if qdim else Mat.zeros(fld, 0, 0))
        return AlgMod(self.alg, qdim, mats)

    def standard_family(self):
        """The induced images of the one-dimensional modules at the
        points, in point order."""
        return [self.induce(DitModule.simple(self.dit, i)) for i in self.dit.points()]


def _unitvec(field, n, j):
    v = [field.zero] * n
    v[j] = field.one
    return v


def _keyvec(field, keys, index, k):
    v = [field.zero] * len(keys)
    v[index[k]] = field.one
    return v


def right_algebra(dit: Ditalgebra) -> RightAlgebra:
    return RightAlgebra(dit)


def functor_H(bridge: RightAlgebra, N: DitModule) -> AlgMod:
    return bridge.hom_module(N)


def induce(bridge: RightAlgebra, M: DitModule) -> AlgMod:
    return bridge.induce(M)


def delta_filtration(alg: FDAlgebra, family, M: AlgMod, budget: int = 4000):
    """A filtration witness of M by the family, or None; the search is
    exhaustive at desk scale, so None certifies non-membership over a
    finite field within the budget."""
    if M.dim > 24:
        raise OracleBudgetExceeded("module too large for the exhaustive search")
    return has_filtration_by(alg, M, family, budget)


# ---------------------------------------------------------------------------
# quasi-heredity
# ---------------------------------------------------------------------------

class QHCertificate:
    def __init__(self, end_dims, hom_pairs, ext_pairs, filtration, verdicts):
        self.end_dims = end_dims
        self.hom_pairs = hom_pairs
        self.ext_pairs = ext_pairs
        self.filtration = filtration
        self.verdicts = verdicts

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def report(self) -> str:
        lines = []
        v = self.verdicts
        lines.append(f"condition 1 (scalar endomorphisms): {'pass' if v['local_end'] else 'FAIL'}; End dims {self.end_dims}")
        lines.append(f"condition 2 (hom order): {'pass' if v['hom_order'] else 'FAIL'}; nonzero Hom pairs {self.hom_pairs}")
        lines.append(f"condition 3 (ext order): {'pass' if v['ext_order'] else 'FAIL'}; nonzero Ext1 pairs {self.ext_pairs}")
        lines.append(f"condition 4 (regular module filtered): {'pass' if v['regular_filtered'] else 'FAIL'}")
        lines.append(f"overall: {'quasi-hereditary' if self.passed else 'NOT quasi-hereditary for this order'}")
        return "\n".join(lines)


def check_quasi_hereditary(alg: FDAlgebra, deltas) -> QHCertificate:
    """Verify the four defining conditions for the ordered family."""
    n = len(deltas)
    end_dims = [D.hom_dim(D) for D in deltas]
    hom_pairs = []
    ext_pairs = []
    for i in range(n):
        for j in range(n):
            if i != j and deltas[i].hom_dim(deltas[j]) > 0:
                hom_pairs.append((i + 1, j + 1))
            if ext1_dim(alg, deltas[i], deltas[j]) > 0:
                ext_pairs.append((i + 1, j + 1))
    regular = AlgMod.regular(alg)
    filtration = has_filtration_by(alg, regular, deltas)
    verdicts = {
        "local_end": all(d == 1 for d in end_dims),
        "hom_order": all(i <= j for (i, j) in hom_pairs),
        "ext_order": all(i < j for (i, j) in ext_pairs),
        "regular_filtered": filtration is not None,
    }
    return QHCertificate(end_dims, hom_pairs, ext_pairs, filtration, verdicts)


def oracle_standard_modules(alg: FDAlgebra, order=None):
    """Largest quotients of the projectives with composition factors at or
    below their index; the independent reference family."""
    return standard_modules(alg, order)


# ---------------------------------------------------------------------------
# Morita-basic reduction with its functors
# ---------------------------------------------------------------------------

class BasicReduction:
    """Corner reduction at one projective per isomorphism class, with the
    equivalence and its quasi-inverse as explicit functors."""

    def __init__(self, alg: FDAlgebra):
        self.alg = alg
        self.basic, self.e, self.corner_basis = _basic_algebra_raw(alg)
        fld = alg.field
        self._corner_mat = Mat.from_cols(fld, self.corner_basis, alg.dim)

    def to_basic(self, M: AlgMod) -> AlgMod:
        """e.M as a module over the corner algebra."""
        fld = self.alg.field
        act_e = M.act(self.e)
        img = span_basis(fld, [act_e.apply(_unit(fld, M.dim, j)) for j in range(M.dim)])
        B = Mat.from_cols(fld, img, M.dim) if img else Mat.zeros(fld, M.dim, 0)
        mats = []
        for cb in self.corner_basis:
            act = M.act(cb)
            cols = [B.solve(act.apply(v)) for v in img]
            mats.append(Mat.from_cols(fld, cols, len(img)) if img else Mat.zeros(fld, 0, 0))
        return AlgMod(self.basic, len(img), mats)

    def from_basic(self, N: AlgMod) -> AlgMod:
        """(A.e) tensor over the corner with N."""
        fld = self.alg.field
        # A.e as a right corner-module with left A-action
        ae = span_basis(fld, [self.alg.mul(self.alg.basis_vec(i), self.e) for i in range(self.alg.dim)])
        if not ae or N.dim == 0:
            return AlgMod(self.alg, 0, [Mat.zeros(fld, 0, 0)] * self.alg.dim)
        AE = Mat.from_cols(fld, ae, self.alg.dim)
        total = len(ae) * N.dim

        def tens(ai, ni):
            return ai * N.dim + ni

        rels = []
        for ci, cb in enumerate(self.corner_basis):
            # v.cb (x) n - v (x) cb.n
            for ai, v in enumerate(ae):
                w = self.alg.mul(v, cb)
                wc = AE.solve(w)
                for ni in range(N.dim):
                    row = [fld.zero] * total
                    for ak in range(len(ae)):
                        if wc[ak] != fld.zero:
                            row[tens(ak, ni)] = row[tens(ak, ni)] + wc[ak]
                    col = N.mats[ci].col(ni) if N.dim else []
                    for nk in range(N.dim):
                        if col[nk] != fld.zero:
                            row[tens(ai, nk)] = row[tens(ai, nk)] - col[nk]
                    if any(x != fld.zero for x in row):
                        rels.append(row)
        rel_basis = span_basis(fld, rels)
        keep = []
        cur = list(rel_basis)
        for n in range(total):
            v = [fld.zero] * total
            v[n] = fld.one
            probe = Mat.from_cols(fld, cur + [v], total)
            if probe.rank() > len(cur):
                cur.append(v)
                keep.append(n)
        full = rel_basis + [_unitvec(fld, total, n) for n in keep]
        Bmat = Mat.from_cols(fld, full, total)

        def project(v):
            return Bmat.solve(v)[len(rel_basis):]

        qdim = len(keep)
        mats = []
        for bi in range(self.alg.dim):
            cols = []
            for n in keep:
                ai, ni = divmod(n, N.dim)
                # left multiplication preserves the left ideal A.e
                w = self.alg.mul(self.alg.basis_vec(bi), ae[ai])
                wc = AE.solve(w)
                v = [fld.zero] * total
                for ak in range(len(ae)):
                    if wc[ak] != fld.zero:
                        v[tens(ak, ni)] = v[tens(ak, ni)] + wc[ak]
                cols.append(project(v))
            mats.append(Mat.from_cols(fld, cols, qdim) if qdim else Mat.zeros(fld, 0, 0))
        return AlgMod(self.alg, qdim, mats)


def basic_algebra(alg: FDAlgebra) -> BasicReduction:
    return BasicReduction(alg)
