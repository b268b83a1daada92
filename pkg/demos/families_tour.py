"""Every damping family at d=4: transition matrix and detected capacity.

Run: python demos/families_tour.py
"""
import numpy as np

from dampcap import ChannelSpec, detected_capacity

np.set_printoptions(precision=3, suppress=True)
examples = [
    ("bosonic", {"gamma": 0.3}),
    ("hypergeometric", {"M": 4, "L": 6}),
    ("negative_hypergeometric", {"M": 3, "L": 10}),
    ("beta_binomial", {"alpha": 2.0, "beta": 1.5}),
    ("geometric", {"gamma": 0.5}),
    ("constant_ratio", {"gamma": 0.4}),
    ("two_jump", {"gamma1": 0.5, "gamma2": 0.2}),
    ("lambda", {"gamma": 1.0}),
    ("v", {"gamma": 0.5}),
]
for family, params in examples:
    spec = ChannelSpec(family, 4, params)
    r = detected_capacity(spec)
    print(f"{family} {params}")
    print(spec.transition())
    print(f"  C_DET = {r.c_det:.4f} bits via {r.winner}, chi_fourier = {r.chi_fourier:.4f}\n")
