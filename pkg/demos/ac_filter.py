"""
AC filter response
==================

A modulated drive turns the clock into a narrow-band filter around the
modulation frequency. The three normalizations differ in overall scale, and
the dressed one is what direct simulation follows.
"""

import warnings

import numpy as np

from clockmag import ac
from clockmag.errors import RegimeWarning

drive = ac.ACDriveSpec.fig7()
# the passband is about 1/n wide, so sample on that scale
ratios = 1 + np.linspace(-1.5, 1.5, 13) / drive.n

# the printed scale overshoots a probability at resonance
print(" w/w_m   printed  consistent  dressed  simulated")
with warnings.catch_warnings():
    warnings.simplefilter("ignore", RegimeWarning)
    for x in ratios:
        s = ac.ACSignal(0.005, x * drive.omega_m, 0.0)
        row = [ac.filter_response(s, drive, norm) for norm in ("printed", "consistent")]
        row.append(ac.filter_response(s, drive, "dressed", linear=False))
        row.append(ac.simulate_ac(s, drive)[1][-1])
        print(f"{x:.3f}  " + "  ".join(f"{v:.5f}" for v in row))

# averaging over an unknown signal phase
s = ac.ACSignal(0.005, drive.omega_m, "random")
print("\nunlocked, exact:", ac.unlocked_spectrometer(drive, s))
print("unlocked, 10^4 shots:", ac.unlocked_spectrometer(drive, s, samples=10_000, seed=1))
