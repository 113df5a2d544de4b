# Two groups of order 512 that look alike but are not isomorphic.
#
#   python3 demos/01_two_groups.py

# %%
from mipcert.mipverify import brute_force_iso_search, verify_nonisomorphism
from mipcert.pcgroup import (
    build_G,
    build_H,
    center,
    centralizer,
    conjugacy_classes,
    derived_subgroup,
    frattini,
    subgroup_exponent,
)

n, m = 4, 3
G, H = build_G(n, m), build_H(n, m)
print("orders:", G.order, H.order)

# %% multiplication by collection
x, y = G.generator("x"), G.generator("y")
print("y*x  =", G.format(G.multiply(y, x)))
xy = G.multiply(x, y)
print("(xy)^2 =", G.format(G.power(xy, 2)))
print("[y, x] =", G.format(G.commutator(y, x)))

# %% the cheap invariants agree
for name, p in (("G", G), ("H", H)):
    print(
        f"{name}: |{name}'| = {derived_subgroup(p).order}, |Z| = {center(p).order}, "
        f"|Phi| = {frattini(p).order}, classes = {len(conjugacy_classes(p))}"
    )

# %% but the centralizer of the derived subgroup does not
for name, p in (("G", G), ("H", H)):
    C = centralizer(p, derived_subgroup(p))
    print(f"C_{name}({name}') has order {C.order} and exponent {subgroup_exponent(C, p)}")

step = verify_nonisomorphism(n, m, G, H)
print(step.status, step.witness)

# %% a second opinion: search all generator images x -> u, y -> v
res = brute_force_iso_search(G, H)
print(f"tested {res.pairs_tested} pairs, {res.relation_survivors} satisfy the relations,",
      "no isomorphism" if res.exhausted else f"found {res.isomorphism}")
