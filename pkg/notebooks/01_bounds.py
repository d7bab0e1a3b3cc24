"""
Closed-form uplink bounds
=========================

Evaluate the four association policies on the reference link budget and
look at how the bounds depend on the macro distance and the small-cell
density.
"""

# %%
import numpy as np

from dudecap import (AssociationPolicy, LinkBudget, Scenario, bound_general,
                     bound_general_approx, integral_xlogx, EULER_GAMMA)

link = LinkBudget()
print(f"noise power  {link.noise_power_dbm:.2f} dBm")
print(f"gamma        {10 * np.log10(link.gamma):.2f} dB")

# %%
# One scenario per policy at d0 = 250 m, lambda = 6.25e-6 SC/m^2.
for kind in ("macro", "sc", "decoupled", "coupled"):
    s = Scenario(link, AssociationPolicy(kind), 6.25e-6, 250.0)
    b = bound_general(s)
    print(f"{kind:10s} alpha={s.alpha:<8.4g} P(SC)={b.p_sc:.4f}  bound={b.total_nats:.4f} nats")

# %%
# The truncated-distance integral stops moving once its upper limit passes 4,
# which is what makes the saturated approximation usable.
for u in (0.5, 1.0, 2.0, 3.0, 4.0, 6.0):
    print(f"u={u:3.1f}  integral={integral_xlogx(u):+.10f}  (limit {-EULER_GAMMA / 4:+.10f})")

# %%
# Exact vs approximate bound past the saturation point.
s = Scenario(link, AssociationPolicy("decoupled"), 1e-4, 500.0)
print(s.saturation_arg, bound_general(s).total_nats, bound_general_approx(s).total_nats)

# %%
# Decoupled vs coupled bound along d0 (the shape of the rate-vs-distance figure).
for d0 in np.linspace(50, 2000, 9):
    dec = bound_general(Scenario(link, AssociationPolicy("decoupled"), 6.25e-6, d0)).total_nats
    cpl = bound_general(Scenario(link, AssociationPolicy("coupled"), 6.25e-6, d0)).total_nats
    print(f"d0={d0:7.1f}  decoupled={dec:.4f}  coupled={cpl:.4f}")
