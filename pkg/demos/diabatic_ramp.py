"""
Diabatic error of a field ramp
==============================

Ramping the bias field down from B_i to B_f rotates the eigenbasis. A ramp
that is too fast leaves population behind. We compare the closed form, the
first-order estimate and direct integration for ramps linear in the mixing
angle and linear in B.
"""

import numpy as np

from clockmag import diabatic as db

print("   T    closed     Dyson      simulated  simulated(linear-B)")
for T in (0.0, 0.3, 1.0, 3.0, 10.0):
    ramp = db.RampSpec(500.0, 5.0, 1.0, T)
    closed, bound = db.epsilon_d_linear_gamma(ramp)
    sim = db.simulate_ramp(ramp)
    lin = db.simulate_ramp(db.RampSpec(500.0, 5.0, 1.0, T, "linear-B"))
    print(f"{T:5.1f}  {closed:.3e}  {db.epsilon_d_dyson(ramp):.3e}  {sim:.3e}  {lin:.3e}")

# slow ramps fall off as 1/T^2
T = np.array([10.0, 100.0])
eps = [db.epsilon_d_dyson(db.RampSpec(500.0, 5.0, 1.0, t)) for t in T]
print("\nlog-log slope:", np.polyfit(np.log(T), np.log(eps), 1)[0])
