"""
Growth exponent and the h^6 step law
====================================

Tabulate the a priori growth exponent, show how the advised step shrinks with
the grid, and watch an oversized step blow up once the horizon is long enough.
"""

import numpy as np

from coupled_kdv import AnalyticFamily, BlowupMonitor, GridSpec, TimeSpec, advise_tau, preset, run, sample_initial
from coupled_kdv.scheme import zero_state
from coupled_kdv.stability import exact_step_norm, growth_exponent
from coupled_kdv.system_model import make_system

# Zero state, pure dispersion: a = 9 tau d^2 / h^6.
spec = make_system(1, {}, [0.5], ["w"])
z = zero_state(spec, GridSpec(0, 1, 11))
print("a(1e-4, 0.1) =", growth_exponent(spec, z, 1e-4, h=0.1).a_exponent)
for h in (0.4, 0.2, 0.1, 0.05):
    print(f"h={h:<5} tau_rec={advise_tau(spec, z, h=h):.3e}")

# Bound versus the true norm of one step on a small grid.
kdv = preset("kdv")
grid = GridSpec.from_step(-4, 4, 0.2)
init = sample_initial(AnalyticFamily("two-component", a=1.0), kdv, grid)
for tau in (1e-4, 1e-3):
    bound = 1 + tau * growth_exponent(kdv, init, tau).a_exponent
    print(f"tau={tau:g}: ||T||^2 = {exact_step_norm(kdv, init, tau) ** 2:.6f} <= bound {bound:.6f}")

# Over-stepping by 100x: harmless over 0.02, explosive over 0.1.
k3 = preset("kdv-mkdv-3")
grid = GridSpec.from_step(-10, 10, 0.1)
init = sample_initial(AnalyticFamily("r", a=1.0, r=0.5), k3, grid)
tau = 100 * advise_tau(k3, init)
for t_end in (0.02, 0.05, 0.1):
    mon = BlowupMonitor()
    run(k3, init, TimeSpec.until(t_end, tau), monitors=[mon])
    peak = max(n for _, n in mon.history) / mon.history[0][1]
    print(f"T={t_end}: flagged={mon.flagged} at step {mon.flagged_step}, peak norm ratio {peak:.3g}")
