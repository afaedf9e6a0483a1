"""Dispersion relation registry, growth/curvature hypothesis checks, and
predicted decay exponents.

A relation is a radial phase phi(r) with closed-form first and second
derivatives plus four exponents: m1/m2 give the homogeneity order of phi'
at high/low frequency, alpha1/alpha2 the order of phi'' (absent when the
curvature comparability fails, e.g. the linear wave phase).  The predicted
exponent functions return the (time, frequency) decay powers of the
sup-norm bound for a single dyadic block:

  branch A : |t|**time_exp * 2**(k*freq_exp) with time_exp = -theta,
             freq_exp = n - m*theta, admissible 0 <= theta <= (n-1)/2;
  branch B : requires the curvature order alpha; time_exp = -(n-1+theta)/2,
             freq_exp = n - m*(n-1+theta)/2 - theta*(alpha-m)/2,
             admissible 0 <= theta <= 1.

Low-frequency aggregation of all blocks k <= 0 decays like
(1+|t|)**(-theta_agg) with theta_agg = min(n/m2, (n-1)/2), sharpened to
min(n/m2, n/2) when alpha2 == m2.
"""

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "DispersionRelation",
    "HypothesisCheck",
    "HypothesisReport",
    "builtin",
    "builtin_names",
    "relation_from_expressions",
    "default_r_grid",
    "verify_hypotheses",
    "predicted_high_exponents",
    "predicted_low_exponents",
    "predicted_lowfreq_aggregate",
]


@dataclass(frozen=True)
class DispersionRelation:
    """Radial phase with closed-form derivatives and exponent metadata."""

    name: str
    phi: Callable
    dphi: Callable
    d2phi: Callable
    m1: float
    m2: float
    alpha1: Optional[float] = None
    alpha2: Optional[float] = None

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ValueError("homogeneity orders m1, m2 must be positive")
        if self.alpha1 is not None and self.alpha1 > self.m1:
            raise ValueError("curvature order alpha1 cannot exceed m1")
        if self.alpha2 is not None and self.alpha2 < self.m2:
            raise ValueError("curvature order alpha2 cannot fall below m2")


def _kg():
    return DispersionRelation(
        name="klein_gordon",
        phi=lambda r: np.sqrt(1.0 + r * r),
        dphi=lambda r: r / np.sqrt(1.0 + r * r),
        d2phi=lambda r: (1.0 + r * r) ** -1.5,
        m1=1.0, alpha1=-1.0, m2=2.0, alpha2=2.0,
    )


def _beam():
    return DispersionRelation(
        name="beam",
        phi=lambda r: np.sqrt(1.0 + r ** 4),
        dphi=lambda r: 2.0 * r ** 3 / np.sqrt(1.0 + r ** 4),
        d2phi=lambda r: (6.0 * r ** 2 + 2.0 * r ** 6) / (1.0 + r ** 4) ** 1.5,
        m1=2.0, alpha1=2.0, m2=4.0, alpha2=4.0,
    )


def _schrodinger4():
    return DispersionRelation(
        name="schrodinger4",
        phi=lambda r: r ** 2 + r ** 4,
        dphi=lambda r: 2.0 * r + 4.0 * r ** 3,
        d2phi=lambda r: 2.0 + 12.0 * r ** 2,
        m1=4.0, alpha1=4.0, m2=2.0, alpha2=2.0,
    )


def _wave():
    # curvature vanishes identically: no alpha metadata
    return DispersionRelation(
        name="wave",
        phi=lambda r: np.asarray(r, dtype=float),
        dphi=lambda r: np.ones_like(np.asarray(r, dtype=float)),
        d2phi=lambda r: np.zeros_like(np.asarray(r, dtype=float)),
        m1=1.0, m2=1.0,
    )


def _power(m):
    if not m > 0:
        raise ValueError("power(m) requires m > 0")
    return DispersionRelation(
        name=f"power({m:g})",
        phi=lambda r: np.asarray(r, dtype=float) ** m,
        dphi=lambda r: m * np.asarray(r, dtype=float) ** (m - 1.0),
        d2phi=lambda r: m * (m - 1.0) * np.asarray(r, dtype=float) ** (m - 2.0),
        m1=m, m2=m, alpha1=m, alpha2=m,
    )


_BUILTINS = {
    "klein_gordon": _kg,
    "beam": _beam,
    "schrodinger4": _schrodinger4,
    "wave": _wave,
}

_POWER_RE = re.compile(r"^power\(\s*([-+0-9.eE]+)\s*\)$")


def builtin_names():
    return sorted(_BUILTINS) + ["power(m)"]


def builtin(name: str) -> DispersionRelation:
    """Look up a named relation; 'power(m)' takes a literal exponent."""
    factory = _BUILTINS.get(name)
    if factory is not None:
        return factory()
    match = _POWER_RE.match(name.strip())
    if match:
        return _power(float(match.group(1)))
    raise ValueError(f"unknown dispersion relation {name!r}; known: {builtin_names()}")


def relation_from_expressions(name, phi_expr, dphi_expr, d2phi_expr,
                              m1, m2, alpha1=None, alpha2=None):
    """Build a relation from numpy expression strings in the variable r."""
    ns = {"np": np, "pi": math.pi, "e": math.e,
          "sqrt": np.sqrt, "exp": np.exp, "log": np.log,
          "sin": np.sin, "cos": np.cos, "abs": np.abs}

    def compile_expr(expr):
        code = compile(expr, "<relation>", "eval")
        return lambda r: np.asarray(eval(code, {"__builtins__": {}}, {**ns, "r": r}),
                                    dtype=float)

    return DispersionRelation(name=name,
                              phi=compile_expr(phi_expr),
                              dphi=compile_expr(dphi_expr),
                              d2phi=compile_expr(d2phi_expr),
                              m1=m1, m2=m2, alpha1=alpha1, alpha2=alpha2)


@dataclass(frozen=True)
class HypothesisCheck:
    """Outcome of one comparability check over a sample grid.

    ``rho_min``/``rho_max`` is the raw range of the tested ratio and
    ``comparability`` its drift rho_max/rho_min across the grid; the check
    passes when the drift stays within the configured constant C (the
    comparability relations hide a free scale, so only drift is meaningful).
    For the one-sided derivative bounds ``upper_excess`` is the worst ratio
    relative to the anchor octave around r = 1.
    """

    passed: bool
    rho_min: float
    rho_max: float
    n_samples: int
    comparability: float
    upper_excess: float = 0.0
    note: str = ""

    def to_dict(self):
        return {
            "passed": bool(self.passed),
            "rho_min": self.rho_min,
            "rho_max": self.rho_max,
            "n_samples": self.n_samples,
            "comparability": self.comparability,
            "upper_excess": self.upper_excess,
            "note": self.note,
        }


@dataclass(frozen=True)
class HypothesisReport:
    relation: str
    C: float
    checks: dict = field(default_factory=dict)  # keys h1..h4

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks.values())

    def to_dict(self):
        return {"relation": self.relation, "C": self.C,
                "pass": self.all_passed,
                "checks": {k: v.to_dict() for k, v in sorted(self.checks.items())},
                "convention": "pass iff ratio drift rho_max/rho_min <= C; "
                              "hidden proportionality constants are not checked"}


def default_r_grid(j_min=-20, j_max=20, per_octave=4):
    """Dyadic sample grid 2**j with intermediate points, away from r = 0."""
    count = (j_max - j_min) * per_octave + 1
    return 2.0 ** np.linspace(j_min, j_max, count)


def _third_derivative(rel, r):
    h = r * 1e-5
    return (rel.d2phi(r + h) - rel.d2phi(r - h)) / (2.0 * h)


def _comparability_check(values, targets, C, n_samples, note=""):
    ratio = np.abs(values) / targets
    rho_min, rho_max = float(ratio.min()), float(ratio.max())
    if rho_min <= 0 or not np.isfinite(rho_max):
        return HypothesisCheck(False, rho_min, rho_max, n_samples,
                               math.inf, note=note or "ratio degenerate")
    comp = rho_max / rho_min
    return HypothesisCheck(comp <= C, rho_min, rho_max, n_samples, comp, note=note)


def _upper_bound_excess(values, targets, r):
    # One-sided bound |f| <~ target: a decaying ratio satisfies it trivially,
    # so detect upward drift away from r ~ 1 relative to the anchor octave.
    ratio = np.abs(values) / targets
    top = float(ratio.max())
    if top == 0.0:
        return 0.0
    anchor = ratio[(r >= 0.5) & (r <= 2.0)]
    scale = float(anchor.max()) if anchor.size else 0.0
    if scale == 0.0:
        return math.inf
    return top / scale


def verify_hypotheses(rel: DispersionRelation, C: float = 10.0, r_grid=None):
    """Check the growth/curvature comparability of phi over a dyadic grid.

    h1/h2: |phi'(r)| ~ r**(m-1) on r >= 1 / r < 1, together with the
    derivative bounds |phi''| <~ r**(m-2) and |phi'''| <~ r**(m-3) (the
    third derivative by centered differences of d2phi).  h3/h4: |phi''(r)|
    ~ r**(alpha-2) on the matching half-line; reported as lacking when the
    alpha metadata is absent.  Since the comparability relations hide
    constants, ratios are scale-normalized before the pass decision.
    """
    if not C > 1:
        raise ValueError("comparability constant C must exceed 1")
    if r_grid is None:
        r_grid = default_r_grid()
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0):
        raise ValueError("r_grid must avoid r = 0 (phi only smooth away from the origin)")
    if r_grid.min() > 2.0 ** -20 or r_grid.max() < 2.0 ** 20:
        raise ValueError("r_grid must cover the dyadic range 2**-20 .. 2**20")

    high = r_grid[r_grid >= 1.0]
    low = r_grid[r_grid < 1.0]
    checks = {}
    for key, r, m in (("h1", high, rel.m1), ("h2", low, rel.m2)):
        base = _comparability_check(rel.dphi(r), r ** (m - 1.0), C, len(r))
        excess = max(_upper_bound_excess(rel.d2phi(r), r ** (m - 2.0), r),
                     _upper_bound_excess(_third_derivative(rel, r), r ** (m - 3.0), r))
        checks[key] = HypothesisCheck(base.passed and excess <= C,
                                      base.rho_min, base.rho_max, base.n_samples,
                                      base.comparability, upper_excess=excess,
                                      note=base.note)
    for key, r, alpha in (("h3", high, rel.alpha1), ("h4", low, rel.alpha2)):
        if alpha is None:
            checks[key] = HypothesisCheck(False, math.nan, math.nan, 0, math.inf,
                                          note="curvature order not declared")
        else:
            checks[key] = _comparability_check(rel.d2phi(r), r ** (alpha - 2.0),
                                               C, len(r))
    return HypothesisReport(relation=rel.name, C=C, checks=checks)


def _require_branch_a_theta(n, theta):
    if not 0.0 <= theta <= 0.5 * (n - 1):
        raise ValueError(f"branch A requires 0 <= theta <= (n-1)/2, got {theta}")


def _require_branch_b(alpha, theta):
    if alpha is None:
        raise ValueError("branch B requires the curvature order alpha")
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"branch B requires 0 <= theta <= 1, got {theta}")


def _exponent_pair(n, m, alpha, theta, branch):
    if branch == "A":
        _require_branch_a_theta(n, theta)
        return (-theta, n - m * theta)
    if branch == "B":
        _require_branch_b(alpha, theta)
        half = 0.5 * (n - 1 + theta)
        return (-half, n - m * half - 0.5 * theta * (alpha - m))
    raise ValueError(f"branch must be 'A', 'B' or 'best', got {branch!r}")


def _best_pair(n, m, alpha):
    # branch B at theta=1 dominates branch A at theta=(n-1)/2 whenever available
    if alpha is not None:
        return _exponent_pair(n, m, alpha, 1.0, "B")
    return _exponent_pair(n, m, alpha, 0.5 * (n - 1), "A")


def predicted_high_exponents(rel, n, theta=None, branch="A"):
    """(time_exp, freq_exp) for a dyadic block with k >= 0.

    branch='best' ignores theta and returns the pair with the most negative
    time exponent over both branches and all admissible theta.
    """
    if n < 1:
        raise ValueError("spatial dimension must be >= 1")
    if branch == "best":
        return _best_pair(n, rel.m1, rel.alpha1)
    return _exponent_pair(n, rel.m1, rel.alpha1, theta, branch)


def predicted_low_exponents(rel, n, theta=None, branch="A"):
    """(time_exp, freq_exp) for a dyadic block with k < 0 (m2/alpha2 mirror)."""
    if n < 1:
        raise ValueError("spatial dimension must be >= 1")
    if branch == "best":
        return _best_pair(n, rel.m2, rel.alpha2)
    return _exponent_pair(n, rel.m2, rel.alpha2, theta, branch)


def predicted_lowfreq_aggregate(rel, n):
    """Decay order theta_agg of the summed low-frequency kernel."""
    if n < 1:
        raise ValueError("spatial dimension must be >= 1")
    if rel.alpha2 is not None and rel.alpha2 == rel.m2:
        return min(n / rel.m2, 0.5 * n)
    return min(n / rel.m2, 0.5 * (n - 1))
