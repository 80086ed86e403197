"""The regulated step function in the energy domain.

The transform of exp(-eta t) on t > 0 is 1/(eta + i x). As eta shrinks, the
real part turns into a narrow Lorentzian of area pi, and the imaginary part
turns into the principal value -1/x.
"""

import numpy as np

from tord import eta_sweep, sign_transform

x = np.linspace(-10, 10, 21)

for row in eta_sweep(x, [0.1, 0.01, 0.001]):
    sgn = sign_transform(x, row.eta)
    print(
        f"eta={row.eta:<6g} mass={row.lorentzian_mass:.6f} (pi={np.pi:.6f})  "
        f"max|pv-1/x| off pole={row.pv_deviation:.2e}  sign(x=2)={sgn[12]:.8f}"
    )
