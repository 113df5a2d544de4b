# Inside the group algebra kH over GF(2): the augmentation ideal filtration
# and the elements that end up forming a copy of G.
#
#   python3 demos/02_group_algebra.py

# %%
from mipcert import gf2
from mipcert.galgebra import GroupAlgebra
from mipcert.mipverify import build_tilde_generators
from mipcert.parsing import parse_algebra_literal
from mipcert.pcgroup import build_G, build_H

n, m = 4, 3
kG, kH = GroupAlgebra(build_G(n, m)), GroupAlgebra(build_H(n, m))
a, b, c = kH.generators()

# %% filtration I > I^2 > ... > 0, same shape for both algebras
for name, k in (("kG", kG), ("kH", kH)):
    F = k.filtration
    print(f"{name}: dim I^k/I^(k+1) = {F.quotient_dims}")
    print(f"    I^{F.nilpotency_index + 1} = 0, |D_k| = {[d.order for d in k.dimension_subgroups()]}")

# %% the tilde elements
xt, yt, zt = build_tilde_generators(kH)
print("yt =", yt)
print("zt = [yt, xt] has", len(zt.support()), "terms")
assert parse_algebra_literal("b(a+b+ab)c", kH) == yt

# %% C = c + 1 lies in I^2, and yt = b modulo I^2
I2 = kH.filtration[2]
C = c + 1
print("C in I^2:", gf2.in_span(C.bits, I2)[0])
print("yt + b in I^2:", I2.contains((yt + b).bits))

# %% relations of G, checked in kH
one = kH.one
print("xt^16 = 1:", xt**16 == one)
print("yt^8  = 1:", yt**8 == one)
print("zt^4  = 1:", zt**4 == one)
print("zt^xt = zt^-1:", kH.conjugate(zt, xt) == zt**-1)
print("zt^yt = zt^-1:", kH.conjugate(zt, yt) == zt**-1)

# %% why zt^4 = 1: 1 + zt lies in J = (C), and J^4 = 0
J = kH.two_sided_ideal(C)
print("dim J^k:", [P.dim for P in kH.ideal_powers(J, 4, [C])[1:]])
print("1 + zt in J:", J.contains((zt + one).bits))
