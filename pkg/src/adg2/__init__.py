"""Numerical and exact verification toolkit for adiabatic fibred geometry
on R^3 + R^4: pointwise structure algebra, spinor identities, the maximal
positive-section solver, and discretized fibred gauge theory."""

__version__ = "0.1.0"
