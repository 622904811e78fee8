"""Compare curvature models of Walker metrics at two points.

The exponential profile is homogeneous, so an isometry matches the models.
The logarithmic profile only admits a homothety, with scale y_Q / y_P.
"""
from hcg import models, zoo


def compare(name, P, Q, k=2, **params):
    g = zoo.build(name, **params)
    M1, M2 = models.build_model(g, P, k), models.build_model(g, Q, k)
    iso = models.isometry_match(M1, M2)
    hom = models.homothety_match(M1, M2)
    print(f"{name}{params or ''}  P={P}  Q={Q}")
    print(f"  isometry : {iso.status:10s} residual {iso.max_residual:.2e}")
    print(f"  homothety: {hom.status:10s} residual {hom.max_residual:.2e}  lambda = {hom.lam:.10f}")
    if hom.converged:
        print(f"  operator-form check: {models.lemma12_equivalence_check(hom, M1, M2):.1e}")


if __name__ == "__main__":
    compare("walker.exp", [0.1, 0.2, 0.3], [1.0, -0.7, 2.0])
    compare("walker.log", [0.1, 1.0, 0.3], [0.4, 2.0, -1.0])
    compare("walker.pow", [0.0, 1.0, 0.0], [0.5, 1.5, 0.25], eps=3.0)
