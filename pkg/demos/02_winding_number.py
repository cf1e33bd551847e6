"""
A winding number on the circle
==============================

On the cosphere bundle of the circle the two covector directions are two
copies of the circle.  A pair of functions supported on one copy winds once,
and the cocycle computed from the Dirac operator sees exactly that.
"""

from heatcocycle.geometry import ConnectionData
from heatcocycle.jlo import dR_cocycle, jlo_component, naive_jlo_component, splus
from heatcocycle.phfun import PhFun
from heatcocycle.samples import connection_n1, n1_tuples

n = 1
a = [splus(n) * PhFun.sin(n, 0), splus(n) * PhFun.cos(n, 0)]

for name, conn in [("flat", ConnectionData.flat(1)), ("curved", connection_n1())]:
    print(f"{name:7s} jlo = {jlo_component(1, a, conn)}   de Rham = {dR_cocycle(1, a, conn)}")

# without the delta(D) insertion the odd component is blind to the winding
print("naive   jlo =", naive_jlo_component(1, a, connection_n1()))

# a few more pairs, some of them depending on the sign of the covector
for k, pair in enumerate(n1_tuples()):
    v, w = jlo_component(1, pair, connection_n1()), dR_cocycle(1, pair, connection_n1())
    print(f"pair {k + 1}: jlo = {str(v):>14s}   de Rham = {str(w):>14s}   equal: {v == w}")
