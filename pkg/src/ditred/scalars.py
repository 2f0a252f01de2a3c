"""Exact scalar arithmetic.

Ground fields (rationals and prime fields), univariate polynomials over
them, the rational function field k(x) as fractions in lowest terms, and
localized polynomial algebras k[x]_g.  Everything is exact: no floats
appear anywhere in this package.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction


class IrreducibleFactorizationUnavailable(ArithmeticError):
    """Full irreducible factorization was requested but is out of reach
    for the implemented methods (rational coefficients, degree > 3 factor
    with no rational root)."""


class NotPrime(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class FpElt:
    """Element of a prime field, normalized to 0 <= v < p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElt):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other
        if isinstance(other, int):
            return FpElt(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElt(self.v + o.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElt(self.v - o.v, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElt(o.v - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElt(self.v * o.v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElt(self.v * pow(o.v, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __neg__(self):
        return FpElt(-self.v, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return FpElt(1, self.p) / self ** (-e)
        return FpElt(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElt):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class Rationals:
    """The field of rational numbers; elements are Fraction."""

    kind = "rationals"
    char = 0
    p = None

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def of(self, n) -> Fraction:
        return Fraction(n)

    def is_finite(self) -> bool:
        return False

    def elements(self):
        raise ValueError("rationals are not enumerable")

    def grid(self):
        """Default deterministic parameter grid for enumeration over Q."""
        return [Fraction(0), Fraction(1), Fraction(-1), Fraction(2)]

    def parse(self, s: str) -> Fraction:
        return Fraction(s.strip())

    def fmt(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The prime field F_p; elements are FpElt."""

    kind = "prime-field"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        self.p = p
        self.char = p

    @property
    def zero(self):
        return FpElt(0, self.p)

    @property
    def one(self):
        return FpElt(1, self.p)

    def of(self, n) -> FpElt:
        if isinstance(n, FpElt):
            return n
        if isinstance(n, Fraction):
            return FpElt(n.numerator, self.p) / FpElt(n.denominator, self.p)
        return FpElt(int(n), self.p)

    def is_finite(self) -> bool:
        return True

    def elements(self):
        return [FpElt(i, self.p) for i in range(self.p)]

    def grid(self):
        return self.elements()

    def parse(self, s: str) -> FpElt:
        s = s.strip()
        if "/" in s:
            a, b = s.split("/")
            return FpElt(int(a), self.p) / FpElt(int(b), self.p)
        return FpElt(int(s), self.p)

    def fmt(self, x) -> str:
        return str(x.v)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F{self.p}"


QQ = Rationals()


def field_from_name(name: str):
    name = name.strip().lower()
    if name in ("q", "qq", "rationals"):
        return QQ
    m = re.fullmatch(r"fp?[:_]?(\d+)", name)
    if m:
        return PrimeField(int(m.group(1)))
    raise ValueError(f"unknown field {name!r}")


def field_name(field) -> str:
    return "q" if field.char == 0 and isinstance(field, Rationals) else f"fp:{field.p}"


class Poly:
    """Univariate polynomial with coefficients in a base field.

    Coefficients are stored dense, low degree first, with no trailing
    zeros; the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = [field.of(c) if isinstance(c, int) else c for c in coeffs]
        while cs and cs[-1] == field.zero:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(field) -> "Poly":
        return Poly(field, [])

    @staticmethod
    def one(field) -> "Poly":
        return Poly(field, [field.one])

    @staticmethod
    def x(field) -> "Poly":
        return Poly(field, [field.zero, field.one])

    @staticmethod
    def const(field, c) -> "Poly":
        return Poly(field, [field.of(c) if isinstance(c, int) else c])

    @staticmethod
    def monomial(field, c, e: int) -> "Poly":
        return Poly(field, [field.zero] * e + [field.of(c) if isinstance(c, int) else c])

    # -- structure ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial gets -1."""
        return len(self.coeffs) - 1

    def lc(self):
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    def coeff(self, e: int):
        if 0 <= e < len(self.coeffs):
            return self.coeffs[e]
        return self.field.zero

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        c = self.lc()
        return Poly(self.field, [a / c for a in self.coeffs])

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        z = self.field.zero
        return Poly(self.field, [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        z = self.field.zero
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == z:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly":
        c = self.field.of(c) if isinstance(c, int) else c
        return Poly(self.field, [a * c for a in self.coeffs])

    def __pow__(self, e: int) -> "Poly":
        out = Poly.one(self.field)
        b = self
        while e:
            if e & 1:
                out = out * b
            b = b * b
            e >>= 1
        return out

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = Poly.zero(self.field)
        r = self
        dlc = other.lc()
        while not r.is_zero() and r.degree >= other.degree:
            t = Poly.monomial(self.field, r.lc() / dlc, r.degree - other.degree)
            q = q + t
            r = r - t * other
        return q, r

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def derivative(self) -> "Poly":
        return Poly(self.field, [self.coeffs[i] * self.field.of(i) for i in range(1, len(self.coeffs))])

    def eval(self, v):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def eval_matrix(self, mat):
        """Evaluate at a square matrix (Horner over the matrix ring)."""
        from .linalg import Mat

        n = mat.m
        acc = Mat.zeros(mat.field, n, n)
        for c in reversed(self.coeffs):
            acc = acc * mat + Mat.eye(mat.field, n).scale(c)
        return acc

    def shift_compose(self, a) -> "Poly":
        """Substitute x -> x + a."""
        x = Poly(self.field, [a, self.field.one])
        out = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            out = out * x + Poly.const(self.field, c)
        return out

    # -- comparisons ----------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return poly_str(self)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.field)
    return ((a * b) // poly_gcd(a, b)).monic()


def _rational_roots(h: Poly):
    """All roots of h in the base field: exhaustive for F_p, by the
    rational root test over Q."""
    field = h.field
    roots = []
    if field.is_finite():
        for v in field.elements():
            if h.eval(v) == field.zero:
                roots.append(v)
        return roots
    if h.eval(Fraction(0)) == field.zero:
        roots.append(Fraction(0))
    # rational root test on integer-cleared coefficients
    den = 1
    for c in h.coeffs:
        den = den * c.denominator // _gcd_int(den, c.denominator)
    ints = [int(c * den) for c in h.coeffs]
    low = 0
    while low < len(ints) and ints[low] == 0:
        low += 1
    if low >= len(ints):
        return roots
    a0, an = abs(ints[low]), abs(ints[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            for sgn in (1, -1):
                cand = Fraction(sgn * p, q)
                if h.eval(cand) == field.zero and cand not in roots:
                    roots.append(cand)
    return roots


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _fp_irreducible_factors(h: Poly):
    """Factor a squarefree polynomial over F_p by trial division against
    all monic polynomials of increasing degree (p and deg are small)."""
    field = h.field
    p = field.p
    factors = []
    h = h.monic()
    d = 1
    while h.degree >= 2 * d:
        for tail in itertools.product(range(p), repeat=d):
            cand = Poly(field, [field.of(c) for c in tail] + [field.one])
            if cand.degree != d:
                continue
            while (h % cand).is_zero():
                factors.append(cand)
                h = h // cand
            if h.degree < 2 * d:
                break
        d += 1
    if h.degree >= 1:
        factors.append(h.monic())
    return factors


def _q_split_factors(h: Poly, require_irreducible: bool):
    """Split a squarefree rational polynomial into linear factors (by root
    search) plus a rootless remainder.  Degree 2 and 3 rootless remainders
    are certified irreducible; larger ones raise when irreducibility is
    demanded."""
    field = h.field
    h = h.monic()
    factors = []
    for r in _rational_roots(h):
        lin = Poly(field, [-r, field.one])
        if (h % lin).is_zero():
            factors.append(lin)
            h = h // lin
    if h.degree >= 1:
        if h.degree > 3 and require_irreducible:
            raise IrreducibleFactorizationUnavailable(
                f"cannot certify irreducibility of degree-{h.degree} factor over Q"
            )
        factors.append(h.monic())
    return factors


def factor_squarefree(h: Poly, require_irreducible: bool = False):
    """Factor h into pairwise coprime monic factors with multiplicities.

    The product of factors^multiplicities recovers h up to its leading
    coefficient.  Over F_p the factors are irreducible; over Q linear
    factors are extracted exactly and rootless remainders of degree <= 3
    are certified irreducible.
    """
    if h.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    field = h.field
    h = h.monic()
    out = []
    while h.degree > 0:
        dh = h.derivative()
        if dh.is_zero():
            # char p: h = g(x^p); the p-th root is coefficientwise in F_p
            p = field.char
            root = Poly(field, [h.coeff(i * p) for i in range(h.degree // p + 1)])
            for f, m in factor_squarefree(root, require_irreducible):
                out.append((f, m * p))
            h = Poly.one(field)
            break
        g = poly_gcd(h, dh)
        square_free_part = h // g
        if field.is_finite():
            irr = _fp_irreducible_factors(square_free_part)
        else:
            irr = _q_split_factors(square_free_part, require_irreducible)
        for f in irr:
            m = 0
            while (h % f).is_zero():
                h = h // f
                m += 1
            out.append((f, m))
    merged = {}
    for f, m in out:
        merged[f] = merged.get(f, 0) + m
    items = sorted(merged.items(), key=lambda fm: (fm[0].degree, [str(c) for c in fm[0].coeffs]))
    return [(f, m) for f, m in items]


class RatFunc:
    """Rational function num/den in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.field)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = Poly.one(num.field)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            c = den.lc()
            num = num.scale(num.field.one / c)
            den = den.scale(den.field.one / c)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @staticmethod
    def of_poly(p: Poly) -> "RatFunc":
        return RatFunc(p)

    @staticmethod
    def const(field, c) -> "RatFunc":
        return RatFunc(Poly.const(field, c))

    @staticmethod
    def x(field) -> "RatFunc":
        return RatFunc(Poly.x(field))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __pow__(self, e: int):
        if e < 0:
            return RatFunc(Poly.one(self.field)) / self ** (-e)
        return RatFunc(self.num**e, self.den**e)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc(Poly.const(self.field, other))
        if isinstance(other, (Fraction, FpElt)):
            return RatFunc(Poly.const(self.field, other))
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def eval(self, v):
        d = self.den.eval(v)
        if d == self.field.zero:
            raise ZeroDivisionError("pole at evaluation point")
        return self.num.eval(v) / d

    def __repr__(self):
        if self.den.degree == 0:
            return poly_str(self.num)
        return f"({poly_str(self.num)}) / ({poly_str(self.den)})"


class FracField:
    """The rational function field k(x) over a base field; elements RatFunc."""

    kind = "ratfunc"

    def __init__(self, base):
        self.base = base
        self.char = base.char
        self.p = getattr(base, "p", None)

    @property
    def zero(self):
        return RatFunc(Poly.zero(self.base))

    @property
    def one(self):
        return RatFunc(Poly.one(self.base))

    def of(self, n) -> RatFunc:
        if isinstance(n, RatFunc):
            return n
        if isinstance(n, Poly):
            return RatFunc(n)
        return RatFunc(Poly.const(self.base, self.base.of(n) if isinstance(n, int) else n))

    @property
    def x(self) -> RatFunc:
        return RatFunc(Poly.x(self.base))

    def is_finite(self) -> bool:
        return False

    def elements(self):
        raise ValueError("k(x) is not enumerable")

    def grid(self):
        x = self.x
        return [self.zero, self.one, x, x + self.one]

    def parse(self, s: str) -> RatFunc:
        return parse_ratfunc(self.base, s)

    def fmt(self, f) -> str:
        return repr(f)

    def __eq__(self, other):
        return isinstance(other, FracField) and other.base == self.base

    def __hash__(self):
        return hash(("FracField", self.base))

    def __repr__(self):
        return f"{self.base!r}(x)"


class RationalAlgebra:
    """The localization k[x]_g: rational functions whose denominator's
    irreducible factors all divide g."""

    def __init__(self, g: Poly):
        if g.is_zero():
            raise ValueError("localizer must be nonzero")
        self.g = g.monic()
        self.field = g.field

    def contains(self, f: RatFunc) -> bool:
        return localize_membership(f, self)

    def fractions(self) -> FracField:
        return FracField(self.field)

    def spectrum_ok(self, lam) -> bool:
        """True when x - lam stays invertible after localization fails,
        i.e. lam is a point of the spectrum: g(lam) != 0."""
        return self.g.eval(lam) != self.field.zero

    def __eq__(self, other):
        return isinstance(other, RationalAlgebra) and self.g == other.g

    def __hash__(self):
        return hash(("RationalAlgebra", self.g))

    def __repr__(self):
        return f"k[x]_({poly_str(self.g)})"


def localize_membership(f: RatFunc, alg: RationalAlgebra) -> bool:
    """Decide f in k[x]_g by saturation: strip common factors of the
    denominator with g until nothing is left."""
    den = f.den
    g = alg.g
    while den.degree > 0:
        c = poly_gcd(den, g)
        if c.degree == 0:
            return False
        den = den // c
    return True


# ---------------------------------------------------------------------------
# parsing / printing
# ---------------------------------------------------------------------------

def poly_str(p: Poly) -> str:
    """Sparse `c*x^e` sum, highest degree first."""
    if p.is_zero():
        return "0"
    parts = []
    for e in range(p.degree, -1, -1):
        c = p.coeff(e)
        if c == p.field.zero:
            continue
        cs = str(c)
        if e == 0:
            parts.append(cs)
        else:
            xe = "x" if e == 1 else f"x^{e}"
            if cs == "1":
                parts.append(xe)
            elif cs == "-1":
                parts.append(f"-{xe}")
            else:
                parts.append(f"{cs}*{xe}")
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


_TERM_RE = re.compile(r"^\s*(?P<coef>[+-]?\s*\d+(?:/\d+)?)?\s*(?:\*?\s*x(?:\^(?P<exp>\d+))?)?\s*$")


def parse_poly(field, s: str) -> Poly:
    """Parse sparse `c*x^e` sums; inverse of poly_str."""
    s = s.strip()
    if s in ("0", ""):
        return Poly.zero(field)
    s = s.replace("-", "+-")
    terms = [t for t in s.split("+") if t.strip()]
    acc = Poly.zero(field)
    for t in terms:
        t = t.strip()
        neg = t.startswith("-")
        if neg:
            t = t[1:].strip()
        m = _TERM_RE.match(t)
        if not m or (m.group("coef") is None and "x" not in t):
            raise ValueError(f"cannot parse polynomial term {t!r}")
        coef_s = (m.group("coef") or "1").replace(" ", "")
        if coef_s == "":
            coef_s = "1"
        if "/" in coef_s:
            a, b = coef_s.split("/")
            coef = field.of(int(a)) / field.of(int(b))
        else:
            coef = field.of(int(coef_s))
        if neg:
            coef = -coef
        if "x" in t:
            exp = int(m.group("exp") or 1)
        else:
            exp = 0
        acc = acc + Poly.monomial(field, coef, exp)
    return acc


def parse_ratfunc(field, s: str) -> RatFunc:
    """Parse `num / den`; the fraction bar is a top-level '/' preceded by
    a space or ')'.  Scalar fractions like 1/2 sit between digits and are
    left to the polynomial parser.  Inverse of repr."""
    s = s.strip()
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and i > 0 and s[i - 1] in " )":
            num = parse_poly(field, _strip_parens(s[:i]))
            den = parse_poly(field, _strip_parens(s[i + 1:]))
            return RatFunc(num, den)
    return RatFunc(parse_poly(field, _strip_parens(s)))


def _strip_parens(s: str) -> str:
    s = s.strip()
    while s.startswith("(") and s.endswith(")"):
        depth = 0
        ok = True
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0 and i != len(s) - 1:
                    ok = False
                    break
        if ok:
            s = s[1:-1].strip()
        else:
            break
    return s
