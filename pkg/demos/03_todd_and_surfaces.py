"""
Curvature, the Todd form and a surface
======================================

On the two-torus with a curved torsion-free connection, the Todd form picks
up a 2-form and the cocycle follows it.
"""

from heatcocycle.forms import exterior_derivative, todd_form
from heatcocycle.geometry import ConnectionData, curvature, dirac_identities
from heatcocycle.jlo import dR_cocycle, jlo_component
from heatcocycle.phfun import to_text
from heatcocycle.samples import connection_c1, connection_c2, n2_p1_tuples
from heatcocycle.symbols import SymbolElem, contract_with_R, random_curvature

conn = connection_c2()
print("Dirac identities hold:", all(not v for v in dirac_identities(conn).values()))

T = todd_form(curvature(conn))
print("Todd form, 2-form part:", to_text(T.coefficient((0, 1))), "dx1 dx2")
print("closed:", not exterior_derivative(T))

# heat contraction against a constant curvature matrix, two ways
Rm = random_curvature(2, extra=4, seed=1)
res = contract_with_R(SymbolElem.dx_form(2, 0), Rm)
print("brute force = eps^-n X Todd(eps^2 R):", res["brute"] == res["closed"],
      "through eps^%d" % res["certified_up_to"])

# p = 1 values for three pairs and three connections
for name, c in [("flat", ConnectionData.flat(2)), ("c1", connection_c1()), ("c2", conn)]:
    row = [jlo_component(1, a, c) for a in n2_p1_tuples()]
    same = all(v == dR_cocycle(1, a, c) for v, a in zip(row, n2_p1_tuples()))
    print(f"{name:4s}", "  ".join(str(v) for v in row), "  matches de Rham:", same)
