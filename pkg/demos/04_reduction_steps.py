"""The individual reduction steps: deletion, regularization, factoring
out, absorption (including the loop-to-rational conversion), reduction at
an admissible module, detachment of a source, and unravelling."""

from ditred import (
    QQ,
    Arrow,
    DitModule,
    Ditalgebra,
    Mat,
    PathAlgebra,
    Poly,
    ditalgebra_to_text,
    step_absorb_loop,
    step_delete,
    step_detach,
    step_regularize,
    step_unravel,
)
from ditred.reduction import _edge_admissible, detach_restrict_module, step_reduce_X

print("== regularization kills a matched full/dashed pair ==")
a, v = Arrow("a", 0, 1, 0), Arrow("v", 0, 1, 1)
alg = PathAlgebra(QQ, [None, None], [a, v])
reg = Ditalgebra(QQ, [None, None], [a], [v], {"a": alg.gen("v")})
step = step_regularize(reg, "a", "v")
print(step.describe())

print()
print("== reduction at an admissible module: the one-arrow layer ==")
a2 = Ditalgebra(QQ, [None, None], [Arrow("a", 0, 1, 0)], [], {})
xstep = step_reduce_X(a2, ("a",), _edge_admissible(a2, "a"))
print(xstep.describe())
print(ditalgebra_to_text(xstep.tgt))
for q in range(3):
    img = xstep.apply_module(DitModule.simple(xstep.tgt, q))
    print(f"image of the simple at new point {q}: dims {img.dims}")

print()
print("== one arrow of the pencil bigraph: the derivation table appears ==")
kron = Ditalgebra(QQ, [None, None], [Arrow("a", 0, 1, 0), Arrow("b", 0, 1, 0)], [], {})
kstep = step_reduce_X(kron, ("a",), _edge_admissible(kron, "a"))
print(ditalgebra_to_text(kstep.tgt))

print("== detachment of a source restricts modules ==")
det = step_detach(a2, 0)
P = DitModule(a2, (1, 1), {"a": Mat(QQ, [[QQ.one]])})
print("Res(P) dims:", detach_restrict_module(det, P).dims)

print()
print("== a derivation-free loop becomes a rational point ==")
loopy = Ditalgebra(QQ, [None], [Arrow("l", 0, 0, 0)], [], {})
astep = step_absorb_loop(loopy, "l")
print(ditalgebra_to_text(astep.tgt))

print("== unravelling splits prime-power torsion off a rational point ==")
x = Poly.x(QQ)
stellar = Ditalgebra(QQ, [None, Poly.one(QQ)], [Arrow("w", 0, 1, 0)], [], {})
ustep = step_unravel(stellar, [1], {1: x * (x - Poly.one(QQ))}, 2)
tgt = ustep.tgt
print(f"{tgt.n} points:", ", ".join(
    f"{tgt.labels[i]}({'rational' if tgt.is_rational(i) else 'trivial'})"
    for i in tgt.points()))
