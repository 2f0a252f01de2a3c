"""Finite-dimensional modules over a layer, two-component morphisms,
Hom spaces by exact linear algebra, endolength, indecomposability, and
the brute-force enumeration oracle."""

from ditred import (
    QQ,
    Arrow,
    DitModule,
    Ditalgebra,
    Mat,
    PrimeField,
    are_isomorphic,
    endolength,
    enumerate_indecomposables,
    hom_space,
    is_indecomposable,
)

F2 = PrimeField(2)
a2 = Ditalgebra(QQ, [None, None], [Arrow("a", 0, 1, 0)], [], {})

S1 = DitModule.simple(a2, 0)
S2 = DitModule.simple(a2, 1)
P = DitModule(a2, (1, 1), {"a": Mat(QQ, [[QQ.one]])})

print("== Hom spaces over the one-arrow layer ==")
for name, M, N in (("S2 -> P", S2, P), ("P -> S1", P, S1), ("P -> S2", P, S2)):
    print(f"dim Hom({name}) = {len(hom_space(a2, M, N))}")

print()
print("== endolength: length over the endomorphisms ==")
print("endolength(P) =", endolength(a2, P), " (scalar endomorphisms: equals dim)")
print("endolength(S1 + S1) =", endolength(a2, S1.direct_sum(S1)),
      " (a matrix algebra acts: length 1)")

print()
print("== indecomposability via idempotents of the endomorphism algebra ==")
print("P indecomposable:", is_indecomposable(a2, P))
print("S1 + S2 indecomposable:", is_indecomposable(a2, S1.direct_sum(S2)))

print()
print("== isomorphism testing distinguishes pencil parameters ==")
kron = Ditalgebra(QQ, [None, None], [Arrow("a", 0, 1, 0), Arrow("b", 0, 1, 0)], [], {})
M2 = DitModule(kron, (1, 1), {"a": Mat(QQ, [[QQ.one]]), "b": Mat(QQ, [[QQ.of(2)]])})
M3 = DitModule(kron, (1, 1), {"a": Mat(QQ, [[QQ.one]]), "b": Mat(QQ, [[QQ.of(3)]])})
print("parameter 2 vs parameter 3 isomorphic:", are_isomorphic(kron, M2, M3) is not None)

print()
print("== exhaustive enumeration over F_2 ==")
kron2 = Ditalgebra(F2, [None, None], [Arrow("a", 0, 1, 0), Arrow("b", 0, 1, 0)], [], {})
for M in enumerate_indecomposables(kron2, 2):
    print(f"dims {M.dims}  a = {M.arr['a']!r}  b = {M.arr['b']!r}  endolength {endolength(kron2, M)}")
