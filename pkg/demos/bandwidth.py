"""rms duration times rms bandwidth for a few pulse shapes.

A Gaussian sits exactly on the bound 1/(4 pi). Sharp edges push the spectral
width far above it.
"""

import math

from tord import Envelope, bandwidth_product

shapes = {
    "gaussian sigma=1": Envelope.gaussian(1.0, 0.0, 1.0),
    "gaussian sigma=0.1": Envelope.gaussian(1.0, 3.0, 0.1),
    "triangle": Envelope.tabulated([0.0, 1.0, 2.0], [0.0, 1.0, 0.0]),
    "trapezoid": Envelope.tabulated([1.0, 3.0, 4.0, 6.0], [0.0, 1.0, 1.0, 0.0]),
    "rectangle": Envelope.rectangular(1.0, 0.0, 1.0),
}

print(f"bound 1/(4 pi) = {1 / (4 * math.pi):.6f}")
for name, env in shapes.items():
    print(f"{name:20s} {bandwidth_product(env):.6f}")
