"""The driver: chain reductions until no full arrows remain, keeping
every module of bounded endolength covered by the composite functor.
The two-parallel-arrow layer ends with finitely many trivial points plus
one rational point carrying the one-parameter family."""

from ditred import (
    Arrow,
    DitModule,
    Ditalgebra,
    PrimeField,
    endolength,
    reduce_to_minimal,
    verify_coverage,
)

F2 = PrimeField(2)
kron = Ditalgebra(F2, [None, None], [Arrow("a", 0, 1, 0), Arrow("b", 0, 1, 0)], [], {})

trace = reduce_to_minimal(kron, 3, dim_cap=4)
print(trace.describe())
print()

term = trace.terminal
print("images of the terminal points:")
for i in term.points():
    if term.is_rational(i):
        print(f"  {term.labels[i]}: rational point (one-parameter family)")
        continue
    img = trace.apply_module(DitModule.simple(term, i))
    print(f"  {term.labels[i]}: dims {img.dims}, endolength {endolength(kron, img)}")

print()
covered, missing = verify_coverage(trace, 3, dim_cap=4)
print(f"coverage of indecomposables with endolength <= 3 (dim <= 4): "
      f"{len(covered)} covered, {len(missing)} missing")
