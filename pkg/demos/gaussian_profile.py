"""Walker metric f = alpha(x) y^2 / 2 with alpha'' = exp(-x^2).

Levels 0, 1 and 2 of the curvature model match between x = 0 and x = 1,
each with its own scale; level 3 does not, since alpha''' changes sign.
"""
from hcg import lab, models, zoo

if __name__ == "__main__":
    ch = lab.variable_ch_construct(2)
    for x in (-1.0, 0.0, 1.0):
        vals = [lab.normalized_component(ch, l, [x, 0.7, 0.0]) for l in range(3)]
        print(f"x = {x:+.1f}: normalized components " + ", ".join(f"{v:.12f}" for v in vals))
    g = zoo.build("walker.quad", alpha="gaussian", k=2)
    M1 = models.build_model(g, [0.0, 0.5, 0.1], 3)
    M2 = models.build_model(g, [1.0, 0.8, -0.3], 3)
    for l, m in enumerate(models.variable_match(M1, M2).levels):
        print(f"level {l}: {m.status:10s} lambda {m.lam:.6f} residual {m.max_residual:.1e}")
