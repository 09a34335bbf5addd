"""Finitely presented abelian groups through Smith normal form."""

from tambara.zmodule import PresentedZModule, cyclic, smith_normal_form, tensor

A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
U, D, V = smith_normal_form(A)
print("Smith form diagonal:", [D[i][i] for i in range(3)])

M = PresentedZModule(3, A)
print("Z^3 / rows:", M.invariants)

Z4, Z6 = cyclic(4), cyclic(6)
print("Z/4 (x) Z/6 =", tensor(Z4, Z6)[0].invariants)
print("coordinates of 5 in Z/4:", Z4.coordinates([5]))
