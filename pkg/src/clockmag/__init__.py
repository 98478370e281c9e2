"""Simulation and analysis of geometric magnetometry with clock states.

Submodules
----------
dynamics     time-step Schrödinger integrator and first-order Dyson term
two_spin     two spin-1/2 toy model and lab-frame projected pulses
hyperfine    F = 1, 2 ground-state manifold and the clock-pair Hamiltonian
dc           two-pulse DC protocol, exact fringe and fringe phase
ac           modulated-drive AC protocol and its filter function
diabatic     diabatic leakage during the field ramp
sensitivity  Cramér-Rao sensitivity, error budget and optimization
cli          command-line front end
"""

__version__ = "0.1.0"
