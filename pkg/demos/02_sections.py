# Building the section along a sweep and checking its boundary arrow.
from chromstack.penrose import chromatic_index
from chromstack.replab import Ft_matrix
from chromstack.section import audit_listing, build_section, nonvanishing_certificate, transport
from chromstack.surface import preset
from chromstack.sweep import reference_plan

tri = preset("octahedron")
plan = reference_plan("octahedron", tri)
sec = build_section(tri, plan)

for line in audit_listing(sec):
    print(line)

K = chromatic_index(tri)
c = sec.boundary[1][1].matrix.scalar_multiple_of(Ft_matrix())
print(f"boundary arrow = {c} Ft, K = {K}, 3c = {3 * c}")

# transport across the base edge on the far copy
T = transport(sec, ["a", "b"], "direct", copy=1)
print("direct transport along (a, b):", T)

cert = nonvanishing_certificate(sec, equivariance=True)
print("all arrows nonzero:", cert.all_nonvanishing)
print("all arrows intertwiners:", all(e.equivariant for e in cert.edges))

# kill one edge and watch the zero reach the boundary
bad = build_section(tri, plan, zero_edges=[("d", "e")])
cert = nonvanishing_certificate(bad)
print("zeroed arrows:", [e.name for e in cert.edges if not e.nonzero])
print("boundary scalar:", cert.boundary_scalar)
