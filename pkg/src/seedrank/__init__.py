"""Seed-based candidate prioritization on weighted interaction networks.

Three graph scorers (random walk with restart, network propagation,
shortest paths) and a disease-similarity evidence count are fused by
weighted summation, with step weights derived by TOPSIS over ANP/AHP
criterion weights, and evaluated by leave-one-out cross-validation.
"""

__version__ = "0.1.0"
