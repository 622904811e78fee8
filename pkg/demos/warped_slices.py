"""Slices of constant scalar-curvature level on the warped sphere e^x (dx^2 + g_S2).

The level mu = |tau(P0) / tau|^(1/2) equals e^(x/2); the radial distance
between slices grows linearly in the level and the manifold ends at finite
distance where mu reaches 0.
"""
from hcg import lab, zoo

if __name__ == "__main__":
    g = zoo.build("warped.sphere", t=1.0)
    base = [0.0, 0.0, 0.0]
    levels = [0.5, 0.75, 1.5, 2.0, 3.0]
    arcs = lab.level_arc_lengths(g, levels, base)
    for c in levels:
        print(f"level {c:4.2f}: signed arc length from mu = 1 is {arcs[c]: .8f}")
    print("distance per unit level:", (arcs[3.0] - arcs[0.5]) / 2.5)
    probe = lab.incompleteness_probe(g, base)
    print(f"distance to the end along decreasing mu: {probe.length:.6f} ({probe.status})")
    flat_cone = lab.incompleteness_probe(zoo.build("warped.sphere", t=2.0), base, direction=[-1.0, 0.0, 0.0])
    print(f"t = 2 (flat cone), geodesic to the apex: {flat_cone.length:.6f}")
