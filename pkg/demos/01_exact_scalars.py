"""Exact scalar arithmetic: the ground fields, polynomials, rational
functions, and localized polynomial algebras that everything else builds
on.  No floats anywhere: rationals stay rational, fractions stay reduced.
"""

from ditred import QQ, Poly, PrimeField, RatFunc, RationalAlgebra
from ditred import factor_squarefree, localize_membership, poly_gcd

x = Poly.x(QQ)
one = Poly.one(QQ)

print("== polynomial gcd over the rationals ==")
a = (x - Poly.const(QQ, 2)) ** 2 * (x - Poly.const(QQ, 3))
b = (x - Poly.const(QQ, 2)) * (x - Poly.const(QQ, 5))
print(f"gcd({a}, {b}) = {poly_gcd(a, b)}")

print()
print("== squarefree factorization ==")
h = (x - one) ** 2 * x
print(f"{h} factors as", factor_squarefree(h))

F5 = PrimeField(5)
x5 = Poly.x(F5)
h5 = x5 * x5 + Poly.one(F5)
print(f"over F_5, x^2 + 1 factors as", factor_squarefree(h5))

print()
print("== rational functions in lowest terms ==")
f = RatFunc(x + one, (x - one) ** 3)
g = RatFunc((x - one) ** 2, x)
print(f"f = {f!r}")
print(f"g = {g!r}")
print(f"f * g = {f * g!r}   (common factors cancel, denominator monic)")

print()
print("== membership in a localized polynomial algebra ==")
A = RationalAlgebra((x - one) * (x - Poly.const(QQ, 4)))
print(f"algebra: {A!r}")
print(f"1/(x-1)^3 * (x+1) in it? {localize_membership(f, A)}")
bad = RatFunc(one, x - Poly.const(QQ, 2))
print(f"1/(x-2) in it?            {localize_membership(bad, A)}")
