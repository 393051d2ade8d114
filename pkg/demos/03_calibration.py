# The small representation-theory toolkit: F, Ft and the projectors on V x V.
import sympy

from chromstack import replab
from chromstack.gaussian import Intertwiner

ops = replab.operators()
F, Ft, A = ops["F"], ops["Ft"], ops["A"]
sympy.pprint(F.T)

print("Ft F =", (Ft * F).tolist()[0], "...")
print("ranks of T, A, S:", [ops[k].rank() for k in "TAS"])

rep = replab.calibrate()
print("frozen wedge order:", rep.frozen_order)
for order, rels in rep.relations.items():
    print(order)
    for r in rels:
        print(f"  {r.name:8s} {r.measured}")

print(rep.hom_dimensions)

# equivariance is the defining property; a perturbed F fails it
print(replab.equivariance_check(replab.F_matrix()))
bump = Intertwiner.from_triplets((9, 3), [(0, 0, 1)])
print(replab.equivariance_check(replab.F_matrix() + bump))
