"""Bigraphs with two arrow sorts and their layered graded tensor algebras.

Points carry components of a minimal algebra (the ground field k, or a
localized polynomial algebra k[x]_g).  Full arrows generate the degree-0
part, dashed arrows raise the degree by one.  Elements of the tensor
algebra are k-linear combinations of decorated paths: a path may carry a
power of x at every rational point it passes through.  A derivation is
stored on generators and extended by the graded Leibniz rule with sign
(-1)^(deg) on the left factor.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .linalg import span_basis, span_contains
from .scalars import field_from_name, field_name, parse_poly, poly_str


class ComposabilityError(ValueError):
    pass


class UndecidableForCyclic(ValueError):
    """Ideal membership needs a finite path basis, so a directed bigraph."""


class UnsupportedDecoration(ValueError):
    """A construction required a non-polynomial coefficient inside a path."""


class ParseError(ValueError):
    def __init__(self, msg, line=None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_RESERVED_RE = re.compile(r"^[ex]\d+$")


@dataclass(frozen=True)
class Arrow:
    name: str
    s: int
    t: int
    deg: int  # 0 full, 1 dashed

    def __post_init__(self):
        if not _NAME_RE.match(self.name) or _RESERVED_RE.match(self.name):
            raise ValueError(f"bad arrow name {self.name!r}")


class PathAlgebra:
    """Multiplication context for decorated paths over a minimal base."""

    def __init__(self, field, base, arrows):
        self.field = field
        self.base = tuple(base)  # per point: None (k) or Poly g (k[x]_g)
        self.n = len(self.base)
        self.arrows = {}
        for a in arrows:
            if a.name in self.arrows:
                raise ValueError(f"duplicate arrow name {a.name}")
            if not (0 <= a.s < self.n and 0 <= a.t < self.n):
                raise ValueError(f"arrow {a.name} endpoint out of range")
            self.arrows[a.name] = a
        self.delta_table = {}  # arrow name -> PathElement (absent = 0)

    def is_rational(self, i: int) -> bool:
        return self.base[i] is not None

    # -- keys -----------------------------------------------------------
    # key = (start, arrows_tuple, exps_tuple); exps has len(arrows)+1 ints,
    # exps[j] the x-power at the point between arrow j and arrow j+1.
    def key_start(self, key):
        return key[0]

    def key_end(self, key):
        arrows = key[1]
        return self.arrows[arrows[-1]].t if arrows else key[0]

    def key_degree(self, key):
        return sum(self.arrows[a].deg for a in key[1])

    def check_key(self, key):
        start, arrows, exps = key
        if len(exps) != len(arrows) + 1:
            raise ValueError("bad decoration length")
        pt = start
        for j, name in enumerate(arrows):
            a = self.arrows[name]
            if a.s != pt:
                raise ComposabilityError(f"path breaks at {name}")
            if exps[j] and not self.is_rational(pt):
                raise UnsupportedDecoration(f"x-power at trivial point {pt}")
            pt = a.t
        if exps[-1] and not self.is_rational(pt):
            raise UnsupportedDecoration(f"x-power at trivial point {pt}")
        if any(e < 0 for e in exps):
            raise UnsupportedDecoration("negative x-power inside a path")

    def mul_key(self, kp, kq):
        """Product key for p∘q (apply q first); None when non-composable."""
        if kp[0] != self.key_end(kq):
            return None
        arrows = kq[1] + kp[1]
        exps = kq[2][:-1] + (kq[2][-1] + kp[2][0],) + kp[2][1:]
        return (kq[0], arrows, exps)

    # -- elements ---------------------------------------------------------
    def zero(self) -> "PathElement":
        return PathElement(self, {})

    def unit(self) -> "PathElement":
        return sum((self.e(i) for i in range(self.n)), self.zero())

    def e(self, i: int) -> "PathElement":
        return PathElement(self, {(i, (), (0,)): self.field.one})

    def x(self, i: int, e: int = 1) -> "PathElement":
        if not self.is_rational(i):
            raise UnsupportedDecoration(f"point {i} is trivial")
        return PathElement(self, {(i, (), (e,)): self.field.one})

    def gen(self, name: str) -> "PathElement":
        a = self.arrows[name]
        return PathElement(self, {(a.s, (name,), (0, 0)): self.field.one})

    def path(self, names, coeff=None) -> "PathElement":
        """Path from a composition-order list (leftmost applied last)."""
        el = None
        for nm in reversed(names):
            el = self.gen(nm) if el is None else self.gen(nm) * el
        if el is None:
            raise ValueError("empty path")
        return el if coeff is None else el.scale(coeff)

    def delta_of_key(self, key) -> "PathElement":
        start, arrows, exps = key
        out = self.zero()
        for i, name in enumerate(arrows):
            d = self.delta_table.get(name)
            if d is None or d.is_zero():
                continue
            sign_deg = sum(self.arrows[a].deg for a in arrows[i + 1:])
            a = self.arrows[name]
            left = PathElement(self, {(a.t, arrows[i + 1:], exps[i + 1:]): self.field.one})
            right = PathElement(self, {(start, arrows[:i], exps[: i + 1]): self.field.one})
            term = left * d * right
            if sign_deg % 2:
                term = -term
            out = out + term
        return out

    def delta(self, el: "PathElement") -> "PathElement":
        out = self.zero()
        for key, c in el.terms.items():
            out = out + self.delta_of_key(key).scale(c)
        return out


class PathElement:
    """k-linear combination of decorated paths in a fixed path algebra."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: PathAlgebra, terms: dict):
        self.alg = alg
        z = alg.field.zero
        self.terms = {k: c for k, c in terms.items() if c != z}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PathElement") -> "PathElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, self.alg.field.zero) + c
        return PathElement(self.alg, out)

    def __radd__(self, other):
        if other == 0:
            return self
        return self + other

    def __sub__(self, other: "PathElement") -> "PathElement":
        return self + (-other)

    def __neg__(self) -> "PathElement":
        return PathElement(self.alg, {k: -c for k, c in self.terms.items()})

    def scale(self, c) -> "PathElement":
        c = self.alg.field.of(c) if isinstance(c, int) else c
        return PathElement(self.alg, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "PathElement") -> "PathElement":
        out = {}
        z = self.alg.field.zero
        for kp, cp in self.terms.items():
            for kq, cq in other.terms.items():
                k = self.alg.mul_key(kp, kq)
                if k is None:
                    continue
                out[k] = out.get(k, z) + cp * cq
        return PathElement(self.alg, out)

    def degrees(self):
        return sorted({self.alg.key_degree(k) for k in self.terms})

    def degree_part(self, d: int) -> "PathElement":
        return PathElement(self.alg, {k: c for k, c in self.terms.items() if self.alg.key_degree(k) == d})

    def is_homogeneous(self, d: int) -> bool:
        return all(self.alg.key_degree(k) == d for k in self.terms)

    def endpoint_component(self, i: int, j: int) -> "PathElement":
        """The part of the element starting at i and ending at j."""
        return PathElement(
            self.alg,
            {k: c for k, c in self.terms.items() if k[0] == i and self.alg.key_end(k) == j},
        )

    def endpoint_pairs(self):
        return sorted({(k[0], self.alg.key_end(k)) for k in self.terms})

    def arrow_names(self):
        return {a for k in self.terms for a in k[1]}

    def __eq__(self, other):
        return isinstance(other, PathElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return path_element_str(self)


# ---------------------------------------------------------------------------
# the layered structure
# ---------------------------------------------------------------------------

class Ditalgebra:
    """A layered graded tensor algebra with derivation and ideal.

    `base[i]` is None for a trivial point (component k e_i) and a monic
    polynomial g for a rational point (component k[x]_g).  `delta` maps
    generator names to elements one degree higher.  `ideal` holds degree-0
    generators of a two-sided ideal.  `absorbed` marks full arrows that
    have been moved into the degree-0 base subalgebra by absorption; their
    derivation must vanish and modules treat them like ordinary arrows.
    """

    def __init__(
        self,
        field,
        base,
        full,
        dashed,
        delta=None,
        ideal=(),
        filtration=None,
        absorbed=frozenset(),
        labels=None,
        strict_delta=True,
    ):
        self.field = field
        self.base = tuple(base)
        self.full = tuple(full)
        self.dashed = tuple(dashed)
        self.alg = PathAlgebra(field, self.base, list(self.full) + list(self.dashed))
        self.delta = dict(delta or {})
        self.alg.delta_table = self.delta
        self.ideal = tuple(ideal)
        self.filtration = filtration
        self.absorbed = frozenset(absorbed)
        self.labels = tuple(labels) if labels else tuple(str(i + 1) for i in range(len(self.base)))
        self.strict_delta = strict_delta
        self.validate()

    # -- structure ------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.base)

    def points(self):
        return range(self.n)

    def is_rational(self, i: int) -> bool:
        return self.base[i] is not None

    def arrow(self, name: str) -> Arrow:
        return self.alg.arrows[name]

    def delta_of(self, name: str) -> PathElement:
        return self.delta.get(name, self.alg.zero())

    def apply_delta(self, el: PathElement) -> PathElement:
        return self.alg.delta(el)

    def full_names(self):
        return [a.name for a in self.full]

    def dashed_names(self):
        return [a.name for a in self.dashed]

    def validate(self):
        for a in self.full:
            if a.deg != 0:
                raise ValueError("full arrow with nonzero degree")
        for a in self.dashed:
            if a.deg != 1:
                raise ValueError("dashed arrow with degree != 1")
        for name, d in self.delta.items():
            if d.is_zero():
                continue
            a = self.alg.arrows[name]
            want = a.deg + 1
            if not d.is_homogeneous(want):
                raise ValueError(f"delta({name}) must be homogeneous of degree {want}")
            for key in d.terms:
                if key[0] != a.s or d.alg.key_end(key) != a.t:
                    raise ValueError(f"delta({name}) leaves the ({a.s},{a.t}) component")
        for name in self.absorbed:
            if not self.delta_of(name).is_zero():
                raise ValueError(f"absorbed arrow {name} must have zero derivation")
        for g in self.ideal:
            if not g.is_homogeneous(0) and not g.is_zero():
                raise ValueError("ideal generators must have degree 0")
        if self.strict_delta:
            for a in list(self.full) + list(self.dashed):
                dd = self.apply_delta(self.delta_of(a.name))
                if not dd.is_zero():
                    raise ValueError(f"delta^2 != 0 on {a.name}")

    # -- predicates -------------------------------------------------------
    def check_directed(self) -> bool:
        """No oriented cycle through arrows of either sort, and no
        rational points (their components already carry a loop x)."""
        if any(self.is_rational(i) for i in self.points()):
            return False
        adj = {i: set() for i in self.points()}
        for a in list(self.full) + list(self.dashed):
            if a.s == a.t:
                return False
            adj[a.s].add(a.t)
        seen, stack = {}, []

        def visit(v):
            seen[v] = 1
            for w in adj[v]:
                if seen.get(w) == 1:
                    return False
                if seen.get(w) is None and not visit(w):
                    return False
            seen[v] = 2
            return True

        return all(visit(v) for v in self.points() if seen.get(v) is None)

    def check_source(self, i0: int) -> bool:
        """No arrow of either sort ends at i0, the component there is
        trivial, and e_{i0} is not in the ideal."""
        if self.is_rational(i0):
            return False
        if any(a.t == i0 for a in list(self.full) + list(self.dashed)):
            return False
        try:
            if self.ideal_membership(self.alg.e(i0)):
                return False
        except UndecidableForCyclic:
            if any(not g.is_zero() for g in self.ideal):
                raise
        return True

    def sources(self):
        return [i for i in self.points() if self.check_source(i)]

    def check_stellar(self):
        """Smallest source point from which every full arrow starts, or
        None when no such star center exists."""
        for i0 in self.points():
            if not self.check_source(i0):
                continue
            if all(a.s == i0 for a in self.full):
                return i0
        return None

    def is_minimal(self) -> bool:
        return not self.full and not self.absorbed and all(g.is_zero() for g in self.ideal)

    # -- ideal ------------------------------------------------------------
    def degree0_path_basis(self):
        """All degree-0 paths (full arrows only, no decorations); finite
        exactly when the full-arrow graph is acyclic and points trivial."""
        if any(self.is_rational(i) for i in self.points()):
            raise UndecidableForCyclic("rational components give unbounded degree-0 paths")
        adj = {i: [] for i in self.points()}
        for a in self.full:
            adj[a.s].append(a)
            if a.s == a.t:
                raise UndecidableForCyclic("loop gives unbounded paths")
        keys = [(i, (), (0,)) for i in self.points()]
        frontier = list(keys)
        while frontier:
            new = []
            for key in frontier:
                end = self.alg.key_end(key)
                for a in adj[end]:
                    k2 = (key[0], key[1] + (a.name,), key[2] + (0,))
                    new.append(k2)
            keys.extend(new)
            frontier = new
            if frontier and len(frontier[0][1]) > self.n:
                raise UndecidableForCyclic("unbounded path length")
        return keys

    def ideal_membership(self, el: PathElement) -> bool:
        """Exact membership of a degree-0 element in the two-sided ideal
        generated by the recorded generators."""
        if not el.is_homogeneous(0):
            raise ValueError("membership is defined for degree-0 elements")
        gens = [g for g in self.ideal if not g.is_zero()]
        if el.is_zero():
            return True
        if not gens:
            return False
        keys = self.degree0_path_basis()
        index = {k: i for i, k in enumerate(keys)}
        paths = [PathElement(self.alg, {k: self.field.one}) for k in keys]

        def vec(x: PathElement):
            v = [self.field.zero] * len(keys)
            for k, c in x.terms.items():
                v[index[k]] = c
            return v

        spanning = []
        for g in gens:
            for p in paths:
                for q in paths:
                    w = p * g * q
                    if not w.is_zero():
                        spanning.append(vec(w))
        basis = span_basis(self.field, spanning)
        return span_contains(self.field, basis, vec(el))

    # -- triangularity ------------------------------------------------------
    def verify_filtration(self, filt) -> bool:
        """Check a two-sided triangularity witness: an ordered partition of
        the full arrows whose derivations only use earlier full arrows, and
        one of the dashed arrows whose derivations only use earlier dashed
        arrows."""
        filt_full, filt_dashed = filt
        listed_f = [x for grp in filt_full for x in grp]
        listed_d = [x for grp in filt_dashed for x in grp]
        if sorted(listed_f) != sorted(self.full_names()) or sorted(listed_d) != sorted(self.dashed_names()):
            return False
        avail = set()
        for grp in filt_full:
            for a in grp:
                used = self.delta_of(a).arrow_names()
                if any(self.alg.arrows[u].deg == 0 and u not in avail for u in used):
                    return False
            avail.update(grp)
        avail = set()
        for grp in filt_dashed:
            for v in grp:
                used = self.delta_of(v).arrow_names()
                if any(self.alg.arrows[u].deg == 1 and u not in avail for u in used):
                    return False
            avail.update(grp)
        return True

    def find_filtration(self):
        """Greedy triangularity witness, or None."""

        def order(names, deg):
            remaining = list(names)
            chosen = []
            avail = set()
            while remaining:
                layer = []
                for a in remaining:
                    used = {u for u in self.delta_of(a).arrow_names() if self.alg.arrows[u].deg == deg}
                    if used <= avail:
                        layer.append(a)
                if not layer:
                    return None
                chosen.append(tuple(layer))
                avail.update(layer)
                remaining = [a for a in remaining if a not in layer]
            return tuple(chosen)

        of = order(self.full_names(), 0)
        od = order(self.dashed_names(), 1)
        if of is None or od is None:
            return None
        return (of, od)

    # -- misc ---------------------------------------------------------------
    def relabel(self, labels) -> "Ditalgebra":
        return Ditalgebra(
            self.field, self.base, self.full, self.dashed, self.delta,
            self.ideal, self.filtration, self.absorbed, labels, self.strict_delta,
        )

    def content_hash(self) -> str:
        return hashlib.sha256(ditalgebra_to_text(self).encode()).hexdigest()[:16]

    def __repr__(self):
        kinds = ",".join("k" if g is None else f"k[x]_({poly_str(g)})" for g in self.base)
        return (
            f"Ditalgebra({self.field!r}; points={self.n} [{kinds}]; "
            f"full={len(self.full)}, dashed={len(self.dashed)}, ideal={len([g for g in self.ideal if not g.is_zero()])})"
        )


# ---------------------------------------------------------------------------
# operations named in the public surface
# ---------------------------------------------------------------------------

def build_path_algebra(field, base, arrows) -> PathAlgebra:
    """Standalone multiplication handle for a bigraph over a base."""
    return PathAlgebra(field, base, arrows)


def apply_derivation(dit: Ditalgebra, el: PathElement) -> PathElement:
    return dit.apply_delta(el)


def check_directed(dit: Ditalgebra) -> bool:
    return dit.check_directed()


def check_source(dit: Ditalgebra, i0: int) -> bool:
    return dit.check_source(i0)


def check_stellar(dit: Ditalgebra):
    return dit.check_stellar()


def ideal_membership(dit: Ditalgebra, el: PathElement) -> bool:
    return dit.ideal_membership(el)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def path_element_str(el: PathElement) -> str:
    if el.is_zero():
        return "0"
    parts = []
    for key in sorted(el.terms, key=lambda k: (len(k[1]), k)):
        c = el.terms[key]
        start, arrows, exps = key
        factors = []
        pt = start
        if exps[0]:
            factors.append(f"x{pt + 1}^{exps[0]}" if exps[0] != 1 else f"x{pt + 1}")
        for j, name in enumerate(arrows):
            factors.append(name)
            pt = el.alg.arrows[name].t
            e = exps[j + 1]
            if e:
                factors.append(f"x{pt + 1}^{e}" if e != 1 else f"x{pt + 1}")
        if not factors:
            factors.append(f"e{start + 1}")
        body = "*".join(reversed(factors))
        cs = str(c)
        if cs == "1":
            parts.append(body)
        elif cs == "-1":
            parts.append(f"-{body}")
        else:
            parts.append(f"{cs}*{body}")
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


_STATIONARY_RE = re.compile(r"^e(\d+)$")
_XPOW_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")
_SCALAR_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_path_element(alg: PathAlgebra, s: str) -> PathElement:
    s = s.strip()
    if s in ("0", ""):
        return alg.zero()
    s = s.replace(" - ", " + -")
    acc = alg.zero()
    for term in s.split(" + "):
        term = term.strip()
        neg = term.startswith("-")
        if neg:
            term = term[1:].strip()
        coeff = alg.field.one
        el = None
        factors = term.split("*")
        # factors are written composition-order (leftmost applied last)
        for f in reversed(factors):
            f = f.strip()
            if _SCALAR_RE.match(f):
                coeff = coeff * alg.field.parse(f)
                continue
            m = _STATIONARY_RE.match(f)
            if m:
                nxt = alg.e(int(m.group(1)) - 1)
            else:
                m = _XPOW_RE.match(f)
                if m:
                    nxt = alg.x(int(m.group(1)) - 1, int(m.group(2) or 1))
                elif f in alg.arrows:
                    nxt = alg.gen(f)
                else:
                    raise ParseError(f"unknown factor {f!r} in path element")
            el = nxt if el is None else nxt * el
        if el is None:
            raise ParseError(f"term {term!r} has no path part")
        el = el.scale(coeff)
        acc = acc + (-el if neg else el)
    return acc


def ditalgebra_to_text(dit: Ditalgebra) -> str:
    lines = ["ditalgebra", f"field {field_name(dit.field)}", f"points {dit.n}"]
    for i, g in enumerate(dit.base):
        comp = "k" if g is None else f"rat {poly_str(g)}"
        lines.append(f"point {i + 1} = {comp}")
        if dit.labels[i] != str(i + 1):
            lines.append(f"label {i + 1} = {dit.labels[i]}")
    for a in dit.full:
        lines.append(f"full {a.name} : {a.s + 1} -> {a.t + 1}")
    for a in dit.dashed:
        lines.append(f"dashed {a.name} : {a.s + 1} -> {a.t + 1}")
    for a in list(dit.full) + list(dit.dashed):
        d = dit.delta_of(a.name)
        if not d.is_zero():
            lines.append(f"delta {a.name} = {path_element_str(d)}")
    gens = [g for g in dit.ideal if not g.is_zero()]
    if gens:
        lines.append("ideal = [" + " ; ".join(path_element_str(g) for g in gens) + "]")
    if dit.absorbed:
        lines.append("absorbed = [" + " ".join(sorted(dit.absorbed)) + "]")
    if dit.filtration:
        ff, fd = dit.filtration
        lines.append("filtration full = [" + " | ".join(" ".join(g) for g in ff) + "]")
        lines.append("filtration dashed = [" + " | ".join(" ".join(g) for g in fd) + "]")
    return "\n".join(lines) + "\n"


def ditalgebra_from_text(text: str) -> Ditalgebra:
    field = None
    npoints = None
    base = []
    labels = {}
    full, dashed = [], []
    delta_lines = []
    ideal_src = None
    absorbed = frozenset()
    filt_full = filt_dashed = None
    header_seen = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line != "ditalgebra":
                raise ParseError("expected 'ditalgebra' header", ln)
            header_seen = True
            continue
        if line.startswith("field "):
            field = field_from_name(line[6:])
        elif line.startswith("points "):
            npoints = int(line[7:])
            base = [None] * npoints
        elif line.startswith("point "):
            m = re.match(r"^point\s+(\d+)\s*=\s*(.+)$", line)
            if not m or npoints is None:
                raise ParseError("bad point line", ln)
            i = int(m.group(1)) - 1
            comp = m.group(2).strip()
            if comp == "k":
                base[i] = None
            elif comp.startswith("rat"):
                base[i] = parse_poly(field, comp[3:]).monic()
            else:
                raise ParseError(f"unknown component {comp!r}", ln)
        elif line.startswith("label "):
            m = re.match(r"^label\s+(\d+)\s*=\s*(.+)$", line)
            labels[int(m.group(1)) - 1] = m.group(2).strip()
        elif line.startswith("full ") or line.startswith("dashed "):
            kind, rest = line.split(" ", 1)
            m = re.match(r"^(\S+)\s*:\s*(\d+)\s*->\s*(\d+)$", rest.strip())
            if not m:
                raise ParseError(f"bad arrow line {line!r}", ln)
            arr = Arrow(m.group(1), int(m.group(2)) - 1, int(m.group(3)) - 1, 0 if kind == "full" else 1)
            (full if kind == "full" else dashed).append(arr)
        elif line.startswith("delta "):
            m = re.match(r"^delta\s+(\S+)\s*=\s*(.+)$", line)
            if not m:
                raise ParseError(f"bad delta line {line!r}", ln)
            delta_lines.append((ln, m.group(1), m.group(2)))
        elif line.startswith("ideal"):
            m = re.match(r"^ideal\s*=\s*\[(.*)\]$", line)
            if not m:
                raise ParseError("bad ideal line", ln)
            ideal_src = m.group(1)
        elif line.startswith("absorbed"):
            m = re.match(r"^absorbed\s*=\s*\[(.*)\]$", line)
            absorbed = frozenset(m.group(1).split())
        elif line.startswith("filtration full"):
            m = re.match(r"^filtration full\s*=\s*\[(.*)\]$", line)
            filt_full = tuple(tuple(grp.split()) for grp in m.group(1).split("|") if grp.strip())
        elif line.startswith("filtration dashed"):
            m = re.match(r"^filtration dashed\s*=\s*\[(.*)\]$", line)
            filt_dashed = tuple(tuple(grp.split()) for grp in m.group(1).split("|") if grp.strip())
        else:
            raise ParseError(f"unrecognized line {line!r}", ln)
    if field is None or npoints is None:
        raise ParseError("missing field or points declaration")
    alg = PathAlgebra(field, base, full + dashed)
    delta = {}
    for ln, name, src in delta_lines:
        if name not in alg.arrows:
            raise ParseError(f"delta for unknown arrow {name!r}", ln)
        try:
            delta[name] = parse_path_element(alg, src)
        except ParseError:
            raise
        except Exception as e:
            raise ParseError(f"bad path element {src!r}: {e}", ln)
    ideal = []
    if ideal_src is not None and ideal_src.strip():
        for part in ideal_src.split(";"):
            ideal.append(parse_path_element(alg, part.strip()))
    filtration = (filt_full, filt_dashed) if filt_full is not None and filt_dashed is not None else None
    label_list = [labels.get(i, str(i + 1)) for i in range(npoints)]
    return Ditalgebra(field, base, full, dashed, delta, ideal, filtration, absorbed, label_list)
