"""Walk through the dispersion-relation registry.

Each relation carries its phase, closed-form derivatives and the four
growth/curvature exponents.  We verify the comparability hypotheses on a
dyadic grid and print the decay exponents the theory predicts for a single
frequency shell and for the summed low-frequency block.
"""

from dispdecay import dispersion

print("=== builtin relations ===")
for name in ("klein_gordon", "beam", "schrodinger4", "wave", "power(2)"):
    rel = dispersion.builtin(name)
    print(f"{name:14s} m1={rel.m1:g} alpha1={rel.alpha1} "
          f"m2={rel.m2:g} alpha2={rel.alpha2}")

print("\n=== hypothesis checks at C = 10 over r in [2^-20, 2^20] ===")
for name in ("klein_gordon", "beam", "schrodinger4", "wave"):
    rep = dispersion.verify_hypotheses(dispersion.builtin(name), C=10.0)
    flags = " ".join(f"{k}={'ok' if c.passed else 'no'}"
                     for k, c in sorted(rep.checks.items()))
    print(f"{name:14s} {flags}")

print("\nA phase with the wrong growth order fails: phi(r) = log(1+r)")
logphase = dispersion.relation_from_expressions(
    "logphase", "log(1+r)", "1/(1+r)", "-1/(1+r)**2", m1=1.0, m2=1.0)
check = dispersion.verify_hypotheses(logphase, C=10.0).checks["h1"]
print(f"  ratio drifts {check.comparability:.1e}x across the grid -> fail")

print("\n=== predicted decay exponents (time power, frequency power) ===")
kg = dispersion.builtin("klein_gordon")
for n in (1, 2, 3):
    best = dispersion.predicted_high_exponents(kg, n, branch="best")
    agg = dispersion.predicted_lowfreq_aggregate(kg, n)
    print(f"klein_gordon n={n}: shell best {best}, low-frequency sum "
          f"decays like (1+|t|)^-{agg:g}")

print("\nCurvature-matched orders collapse the two bound branches:")
beam = dispersion.builtin("beam")
for theta in (0.0, 0.5, 1.0):
    b = dispersion.predicted_high_exponents(beam, 2, theta, "B")
    theta_a = 0.5 * (2 - 1 + theta)
    print(f"  theta={theta:.1f}: branch B {b} == branch A formula at "
          f"theta'={theta_a:.2f}")
