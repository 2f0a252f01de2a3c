"""Generic modules: the fraction-field column of a rational terminal
point realizes an indecomposable of infinite dimension but finite
endolength as a free module over a localized polynomial algebra;
evaluating x sweeps out the one-parameter family."""

from ditred import (
    QQ,
    Arrow,
    Ditalgebra,
    are_isomorphic,
    end_splitting_certificate,
    endolength,
    endolength_kx,
    generic_census,
    is_indecomposable,
)

kron = Ditalgebra(QQ, [None, None], [Arrow("a", 0, 1, 0), Arrow("b", 0, 1, 0)], [], {})

census, trace = generic_census(kron, 2)
print(f"census at endolength <= 2: {len(census)} realization(s)")
R = census[0]
print(R)
G = R.column
print(f"the realized generic module: dims {G.dims} over k(x), "
      f"a = {G.arr['a']!r}, b = {G.arr['b']!r}")
print(f"endolength over k(x): {endolength_kx(kron, G)} = rank {R.rank}")
split, dim_kx, rad = end_splitting_certificate(kron, G)
print(f"endomorphisms split as k(x) + nilpotent radical: {split} (radical dim {rad})")

print()
print("== specializations sweep the one-parameter family ==")
specs = []
for lam in (0, 1, 2, 3, 4):
    S = R.specialize(lam)
    specs.append(S)
    print(f"x = {lam}: dims {S.dims}, b-action {S.arr['b']!r}, "
          f"indecomposable {is_indecomposable(kron, S)}, endolength {endolength(kron, S)}")
distinct = all(
    are_isomorphic(kron, A, B) is None
    for i, A in enumerate(specs) for B in specs[i + 1:]
)
print("pairwise non-isomorphic:", distinct)
