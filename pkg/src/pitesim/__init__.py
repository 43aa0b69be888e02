"""Ground-state preparation toolkit: probabilistic imaginary-time evolution,
its amplitude-amplified multi-step variant, and a phase-estimation baseline,
simulated densely on small Heisenberg chains."""

__version__ = "0.1.0"
