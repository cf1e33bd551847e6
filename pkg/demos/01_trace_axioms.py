"""
The trace on the heat bimodule
==============================

Functions on the punctured cotangent bundle, an operator sandwich around the
formal heat element, and the exact values its trace produces.
"""

from heatcocycle.exactnum import Q
from heatcocycle.formal import FBElem, fb_mul
from heatcocycle.opalg import PDOp
from heatcocycle.phfun import PhFun, sphere_integral
from heatcocycle.trace import supertrace, trace_F

n = 1
s, c = PhFun.sin(n, 0), PhFun.cos(n, 0)
qi = PhFun.q(n, -1)

# f exp(eps Delta) g for a degree 0 function f and a degree -1 function g
f = s + 2
g = s * qi
X = fb_mul(FBElem.from_op(PDOp.function(f), 8), fb_mul(FBElem.heat(n, 1, 8), PDOp.function(g)))
print("Tr_F(f e g)     =", trace_F(X))
print("eps^-1 int f g  =", sphere_integral(f * g))

# moving an operator from one side to the other does not change the trace
D = PDOp.function(c) * PDOp.dx(n, 0) + PDOp.function(PhFun.xi(n, 0)) * PDOp.dxi(n, 0)
Y = FBElem(n, {0: PDOp.function(qi * c), 1: PDOp.function(qi * s)}, 1, 12)
print("Tr_F(D Y)       =", trace_F(fb_mul(D, Y)))
print("Tr_F(Y D)       =", trace_F(fb_mul(Y, D)))

# the supertrace sees only the top exterior word
W = FBElem(n, {1: PDOp.function(qi) * PDOp.psi(n, 0) * PDOp.psibar(n, 0).scale(Q(1, 2))}, 1, 4)
print("STr(eps q^-1 psi psibar e / 2) =", supertrace(W))
