"""Space-time exponent bookkeeping and bounded-ratio checks.

Two pure decision procedures decide which exponents are admissible; the
numerical side then verifies boundedness of the corresponding estimates as
a stability property of a measured ratio, since the hidden constants are
not computable.
"""

import math

from dispdecay import dispersion, strichartz as stz

print("=== admissible time exponents for a two-power decay profile ===")
for q, th1, th2 in ((4.0, 0.5, 0.5), (6.0, 1 / 3, 2 / 3), (4.0, 1 / 3, 2 / 3),
                    (2.0, 1 / 3, 2 / 3), (math.inf, 1 / 3, 2 / 3)):
    print(f"q = {q:4}: theta = ({th1:.2f}, {th2:.2f}) -> "
          f"{stz.in_exponent_set(q, th1, th2)}")

print("\n=== two-power convolution kernels (variant HLS) ===")
cases = [
    stz.HlsKernelSpec(1.0, 1.0, 4 / 3, 4.0, 2),
    stz.HlsKernelSpec(0.5, 2.0, 2.0, 2.0, 1),
    stz.HlsKernelSpec(1.0, 1.0, 2.0, 2.0, 1),
]
for spec in cases:
    print(f"gammas ({spec.gamma1:g}, {spec.gamma2:g}), p={spec.p:g}, "
          f"q={spec.q:g}, n={spec.n}: {stz.hls_admissible(spec)}")

print("\nnumeric bounded-ratio check for the admissible (d) case:")
result = stz.hls_numeric_check(stz.HlsKernelSpec(0.5, 2.0, 2.0, 2.0, 1),
                               trials=10, grid_n=2048, seed=0)
print(f"max ||f*k||_2 / ||f||_2 = {result['max_ratio']:.3f}, refined "
      f"{result['refined_ratio']:.3f}, stable: {result['stable']}")

print("\n=== bounded Strichartz ratio, free Schrodinger n = 1, (q,p) = (8,4) ===")
profile = stz.DecayProfile(theta1=0.25, theta2=0.25, alpha=0.0, p=4.0)
report = stz.strichartz_stability_report(
    dispersion.builtin("power(2)"), 1, 8.0, 4.0, 0.0, 0.0, profile,
    trials=10, T_list=(4.0, 8.0), N=512, seed=0)
for label, value in report["ratios"].items():
    print(f"  {label:8s}: max ratio {value:.4f}")
print(f"spread {report['spread']:.3f} -> stable: {report['pass']}")
