"""The conformal family: one scale, one center, any dimension.

Unlike the elliptical family (a full scatter matrix), the conformal family
fits only a scalar scale a and a center b; its parameters live in the
hyperbolic upper half-space of dimension n+1.  The family is closed under
Euclidean similarities, and the fit is equivariant under them.
"""

import numpy as np

from cauchymle import conformal
from cauchymle.datasets import GeneratorSpec, generate
from cauchymle.descent import DescentConfig
from cauchymle.halfspace import INFINITY

# --- symmetric configurations land on the symmetric point --------------------
data = [np.array([1.0, 0.0]), np.array([-1.0, 0.0]),
        np.array([0.0, 1.0]), np.array([0.0, -1.0])]
z, report = conformal.fit(data, n=2)
print("four unit vectors:")
print(f"  center {np.round(z.b, 8)}, scale {z.a:.8f} "
      f"({report.status.value} in {report.iterations} iterations)")

# --- a 2-d normal cloud -------------------------------------------------------
sample = generate(GeneratorSpec(kind="gaussian_nd", sample_size=100_000,
                                seed=30, mean_vector=np.zeros(2),
                                covariance=np.eye(2)))
z, report = conformal.fit(sample, n=2)
print("\n100k standard 2-d normal draws:")
print(f"  center {np.round(z.b, 4)}, scale {z.a:.4f} (population value 1.105)")

# --- the point at infinity is a legal observation -----------------------------
z, report = conformal.fit([np.array([0.0]), np.array([1.0]), INFINITY], n=1)
print("\n{0, 1, infinity} at n=1:")
print(f"  center {z.b[0]:.6f}, scale {z.a:.6f} (= the univariate fit)")

# --- similarity equivariance ---------------------------------------------------
rng = np.random.default_rng(31)
cloud = rng.standard_normal((2_000, 2)) * [1.5, 0.5] + [4.0, -1.0]
config = DescentConfig(tol=1e-11, max_iters=1000)
z0, _ = conformal.fit(cloud, n=2, config=config)
lam, theta, c = 3.0, 0.7, np.array([-2.0, 5.0])
R = np.array([[np.cos(theta), -np.sin(theta)],
              [np.sin(theta), np.cos(theta)]])
z1, _ = conformal.fit(lam * cloud @ R.T + c, n=2, config=config)
print("\nsimilarity equivariance:")
print(f"  scale:   fitted {z1.a:.6f}  vs mapped {lam * z0.a:.6f}")
print(f"  center:  fitted {np.round(z1.b, 6)}  vs mapped "
      f"{np.round(lam * R @ z0.b + c, 6)}")
