"""Homogeneous algorithms, optimal recovery and adaptive cone solvers."""
