"""Transfer by a delta kick versus a square pulse with the same area.

For degenerate levels only the pulse area matters: a kick of strength pi/2
and a square pulse of area pi/2 both move all of the population.
"""

import math

from tord import GridSpec, evolve_exact, pulse_area
from tord.corpus import kick_transfer, rectangular_transfer

for theta in (0.0, math.pi / 8, math.pi / 4, math.pi / 2):
    spec, grid = kick_transfer(theta)
    p2 = evolve_exact(spec, grid, 0, samples=2).final_populations[1]
    print(f"kick theta={theta:.4f}: p2={p2:.12f}  sin^2(theta)={math.sin(theta) ** 2:.12f}")

spec, grid = rectangular_transfer()
env = spec.terms[0].envelope
area = pulse_area(env, grid.t1, grid.t2)
p2 = evolve_exact(spec, grid, 0, samples=2).final_populations[1]
print(f"square pulse area={area:.12f}: p2={p2:.12f}")

# Halve the observation window: the pulse is over by t = 1.1, so nothing changes.
half = evolve_exact(spec, GridSpec(grid.t1, 1.5, 150), 0, samples=2).final_populations[1]
print(f"observed to t=1.5 instead: p2={half:.12f}")
