"""Power-law exponent fitting for sup-norm decay sweeps.

Fits log M against log t by ordinary least squares and compares the slope
with a predicted exponent.  Theoretical bounds are one-sided (decay may be
faster than predicted), so the default verdict is fitted <= predicted +
slack; designated sharpness cases additionally pin |fitted - predicted|.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DecaySeries",
    "fit_exponent",
    "decay_series",
    "kernel_decay_series",
    "lowfreq_decay_series",
    "dyadic_scaling_fit",
    "default_time_grid",
]

DEFAULT_SLACK = 0.1


def default_time_grid(t_min=10.0, t_max=1e3, n=16):
    return np.geomspace(t_min, t_max, n)


def fit_exponent(t, M):
    """Least-squares slope/intercept/residual of log M against log t.

    Returns natural-log intercept; the residual is the RMS deviation of the
    fit in log-log coordinates.  Rejects nonpositive M (a sup norm of zero
    indicates a broken grid) and nonpositive t.
    """
    t = np.asarray(t, dtype=float)
    M = np.asarray(M, dtype=float)
    if t.shape != M.shape or t.ndim != 1 or len(t) < 2:
        raise ValueError("need matching 1-d sample arrays with >= 2 points")
    if np.any(M <= 0):
        raise ValueError("sup norms must be positive")
    if np.any(t <= 0):
        raise ValueError("times must be positive")
    x = np.log(t)
    # slopes from M/M[0] so a uniform power-of-two rescaling cancels exactly
    y = np.log(M / M[0])
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    intercept = float(np.mean(np.log(M)) - slope * x.mean())
    resid = y - y.mean() - slope * xc
    residual = float(np.sqrt(np.mean(resid * resid)))
    return slope, intercept, residual


@dataclass(frozen=True)
class DecaySeries:
    """A fitted sup-norm time sweep with its predicted exponent and verdict."""

    t: np.ndarray
    M: np.ndarray
    fitted_exponent: float
    intercept: float
    residual: float
    predicted_exponent: float
    slack: float = DEFAULT_SLACK
    sharp: bool = False
    label: str = ""

    @property
    def verdict(self):
        if self.sharp:
            return abs(self.fitted_exponent - self.predicted_exponent) <= self.slack
        return self.fitted_exponent <= self.predicted_exponent + self.slack

    def to_dict(self):
        return {
            "label": self.label,
            "predicted": self.predicted_exponent,
            "fitted": self.fitted_exponent,
            "residual": self.residual,
            "slack": self.slack,
            "sharp": self.sharp,
            "verdict": bool(self.verdict),
            "t": [float(v) for v in self.t],
            "M": [float(v) for v in self.M],
        }


def decay_series(t, M, predicted, slack=DEFAULT_SLACK, sharp=False, label=""):
    t = np.asarray(t, dtype=float)
    M = np.asarray(M, dtype=float)
    if len(t) < 8:
        raise ValueError("a decay series needs at least 8 samples")
    slope, intercept, residual = fit_exponent(t, M)
    return DecaySeries(t=t, M=M, fitted_exponent=slope, intercept=intercept,
                       residual=residual, predicted_exponent=predicted,
                       slack=slack, sharp=sharp, label=label)


def kernel_decay_series(rel, n, k, t_values=None, predicted=None,
                        slack=DEFAULT_SLACK, sharp=False):
    """Sup-norm sweep of the dyadic kernel at scale k, fitted in time."""
    from . import dispersion, kernel

    if t_values is None:
        t_values = default_time_grid()
    if predicted is None:
        branch = "best"
        predicted = dispersion.predicted_high_exponents(rel, n, branch=branch)[0] \
            if k >= 0 else dispersion.predicted_low_exponents(rel, n, branch=branch)[0]
    M = kernel.sup_norm_series(rel, n, k, t_values)
    return decay_series(t_values, M, predicted, slack=slack, sharp=sharp,
                        label=f"{rel.name} n={n} k={k}")


def lowfreq_decay_series(rel, n, t_values=None, tol=1e-6,
                         slack=DEFAULT_SLACK, sharp=False):
    """Sup-norm sweep of the summed low-frequency kernel."""
    from . import dispersion, kernel

    if t_values is None:
        t_values = default_time_grid()
    predicted = -dispersion.predicted_lowfreq_aggregate(rel, n)
    M = kernel.lowfreq_sup_series(rel, n, t_values, tol=tol)
    return decay_series(t_values, M, predicted, slack=slack, sharp=sharp,
                        label=f"{rel.name} n={n} lowfreq")


def dyadic_scaling_fit(rel, n, t_fixed, k_list):
    """Slope of log2 sup-norm against the dyadic scale k at fixed time.

    t_fixed has to be large enough that every scale is past its decay onset;
    the slope estimates the frequency exponent of the kernel bound.
    """
    from . import kernel

    k_list = list(k_list)
    if not k_list or min(k_list) < 0 or max(k_list) > 8:
        raise ValueError("k_list must be a nonempty subset of 0..8")
    M = np.array([kernel.sup_norm(rel, n, k, t_fixed)[0] for k in k_list])
    if np.any(M <= 0):
        raise ValueError("sup norms must be positive")
    k_arr = np.asarray(k_list, dtype=float)
    y = np.log2(M / M[0])
    kc = k_arr - k_arr.mean()
    slope = float(np.dot(kc, y - y.mean()) / np.dot(kc, kc))
    return slope
