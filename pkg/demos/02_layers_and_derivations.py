"""Bigraphs with full and dashed arrows, their layered tensor algebras,
derivations extended by the graded Leibniz rule, and the structural
predicates (directed, source, stellar, triangular)."""

from ditred import QQ, Arrow, Ditalgebra, PathAlgebra, ditalgebra_to_text

# one full arrow a: 1 -> 2, one dashed arrow v: 1 -> 2, delta(a) = v
a, v = Arrow("a", 0, 1, 0), Arrow("v", 0, 1, 1)
alg = PathAlgebra(QQ, [None, None], [a, v])
dit = Ditalgebra(QQ, [None, None], [a], [v], {"a": alg.gen("v")})

print("== the layer in its text form ==")
print(ditalgebra_to_text(dit))

print("== products follow the projection rule ==")
print("e2 * a * e1 =", dit.alg.e(1) * dit.alg.gen("a") * dit.alg.e(0))
print("e1 * a      =", dit.alg.e(0) * dit.alg.gen("a"), " (wrong end: zero)")

print()
print("== the derivation raises degree by one ==")
print("delta(a) =", dit.delta_of("a"))
print("delta(v) =", dit.delta_of("v"))
s = dit.alg.gen("a")
t = dit.alg.e(0)
print("Leibniz on a * e1:", dit.apply_delta(s * t))

print()
print("== structural predicates ==")
print("directed:", dit.check_directed())
print("sources:", dit.sources())
print("stellar center:", dit.check_stellar())
print("triangular order:", dit.find_filtration())

print()
print("== a two-parallel-arrow layer (the pencil bigraph) ==")
kron = Ditalgebra(QQ, [None, None], [Arrow("a", 0, 1, 0), Arrow("b", 0, 1, 0)], [], {})
print("a * b =", kron.alg.gen("a") * kron.alg.gen("b"), " (not composable)")
print("stellar center:", kron.check_stellar())

print()
print("== ideal membership by exact spans ==")
with_ideal = Ditalgebra(QQ, [None, None], [Arrow("a", 0, 1, 0)], [], {},
                        ideal=[kron.alg.gen("a")])
print("a in <a>:", with_ideal.ideal_membership(with_ideal.alg.gen("a")))
print("e1 in <a>:", with_ideal.ideal_membership(with_ideal.alg.e(0)))
