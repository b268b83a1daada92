"""Qubit amplitude damping: Kraus operators, the two coding bases, and why Fourier wins.

Run: python demos/qubit_damping.py
"""
import math

import numpy as np

from dampcap import (ChannelSpec, amplitudes_from_transition, apply_channel,
                     detected_capacity, fourier_basis, kraus_operators)

gamma = 0.3
spec = ChannelSpec("bosonic", 2, {"gamma": gamma})
q = spec.transition()
c = amplitudes_from_transition(q)
a0, a1 = kraus_operators(c)
print("Q =\n", q)
print("A0 =\n", a0.real)
print("A1 =\n", a1.real)

# |1> decays to |0> with probability gamma
excited = np.diag([0.0, 1.0])
print("E(|1><1|) diagonal:", np.real(np.diag(apply_channel([a0, a1], excited))))

# a Fourier state keeps part of its coherence, shrunk by sqrt(1 - gamma)
plus = fourier_basis(2)[:, 0]
out = apply_channel([a0, a1], np.outer(plus, plus.conj()))
print(f"coherence of E(|+><+|): {out[0, 1].real:.4f}  (sqrt(1-g)/2 = {math.sqrt(1 - gamma) / 2:.4f})")

print("\n gamma   I_direct  I_fourier  winner")
for g in np.linspace(0.1, 0.9, 9):
    r = detected_capacity(ChannelSpec("bosonic", 2, {"gamma": round(g, 2)}))
    print(f" {g:.1f}   {r.i_direct:.5f}   {r.i_fourier:.5f}    {r.winner}")
