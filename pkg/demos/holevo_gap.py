"""How far the detected capacity sits from the Fourier-ensemble Holevo quantity.

Bosonic dissipation at d=8, then a few high-damping points at d=3 and d=4
where plain direct coding beats the Fourier code.  Last, the Lambda
channel: there direct coding beats even the Fourier Holevo quantity, so
the rescaled gap delta turns negative.

Run: python demos/holevo_gap.py
"""
from dampcap import ChannelSpec, detected_capacity

print("d=8 bosonic")
print(" gamma  C_DET    chi_fourier  delta")
for k in range(0, 11):
    g = k / 10
    r = detected_capacity(ChannelSpec("bosonic", 8, {"gamma": g}))
    print(f"  {g:.1f}  {r.c_det:.5f}  {r.chi_fourier:.5f}     {r.delta:+.5f}")

print("\nhigh damping, small d")
print(" d  gamma  I_direct  I_fourier  delta     winner")
for d, g in [(3, 0.9), (3, 0.95), (4, 0.8), (4, 0.85), (4, 0.9), (4, 0.95)]:
    r = detected_capacity(ChannelSpec("bosonic", d, {"gamma": g}))
    print(f" {d}  {g:.2f}   {r.i_direct:.5f}   {r.i_fourier:.5f}   {r.delta:+.5f}  {r.winner}")

print("\nLambda channel, d=4")
print(" gamma  C_DET    chi_fourier  delta")
for g in (0.25, 0.5, 1.0, 1.5, 2.0):
    r = detected_capacity(ChannelSpec("lambda", 4, {"gamma": g}))
    print(f"  {g:.2f} {r.c_det:.5f}  {r.chi_fourier:.5f}     {r.delta:+.5f}")
