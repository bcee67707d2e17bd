"""Bootstrap error bars for Monte Carlo summaries.

Every tolerance statement in the verification suite is expressed in
bootstrap standard deviations, never absolute percentages, so a single
resampling policy lives here: 500 percentile-bootstrap resamples, with
the spread of the resampled statistic taken as its one-sigma error bar.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "BOOTSTRAP_RESAMPLES",
    "bootstrap_sigma",
    "covariance_entry_sigma",
    "entrywise_agreement",
]

BOOTSTRAP_RESAMPLES = 500

# resample rows held in memory at once (index matrices are resamples x n)
_RESAMPLE_BATCH = 50


def bootstrap_sigma(values, statistic, rng, *, resamples=BOOTSTRAP_RESAMPLES) -> float:
    """One-sigma bootstrap error of ``statistic`` over ``values``.

    ``statistic`` must map a (batch, n) matrix of resampled rows to a
    (batch,) vector, e.g. ``lambda m: m.mean(axis=1)``.
    """
    values = np.asarray(values)
    n = values.shape[0]
    if n < 2:
        raise ValueError("need at least two samples to resample")
    stats = np.empty(resamples)
    done = 0
    while done < resamples:
        batch = min(_RESAMPLE_BATCH, resamples - done)
        idx = rng.integers(0, n, size=(batch, n))
        stats[done : done + batch] = statistic(values[idx])
        done += batch
    return float(np.std(stats, ddof=1))


def covariance_entry_sigma(amplitudes, rng, *, resamples=BOOTSTRAP_RESAMPLES):
    """Per-entry bootstrap sigma of the empirical covariance mean(conj(a) a).

    ``amplitudes`` has shape (realizations, modes); the point estimate is
    ``amplitudes.conj().T @ amplitudes / realizations``.  Resampling uses
    multinomial weights, which reproduces resampling realizations with
    replacement at matrix-multiply cost.

    Returns ``(point_estimate, sigma_matrix)``.
    """
    a = np.asarray(amplitudes)
    n = a.shape[0]
    point = a.conj().T @ a / n
    acc = np.zeros(point.shape, dtype=float)
    pvals = np.full(n, 1.0 / n)
    for _ in range(resamples):
        w = rng.multinomial(n, pvals) / n
        c = (a.conj() * w[:, None]).T @ a
        acc += np.abs(c - point) ** 2
    # RMS spread of resampled entries around the point estimate
    sigma = np.sqrt(acc / resamples)
    return point, sigma


def entrywise_agreement(first, second, sigma, *, z=5.0, slack=0.0):
    """Do two matrices agree within z sigma (plus a deterministic slack)?

    The z multiplier is chosen for simultaneous coverage over all entries
    (a few thousand comparisons at z = 5 keep the familywise false-alarm
    rate in the per-mille range); ``slack`` absorbs the deterministic
    tolerance of a quadrature reference.  Returns ``(ok, worst_excess)``
    where worst_excess is the largest violation of |a-b| - z*sigma -
    slack (negative when everything agrees).
    """
    gap = np.abs(np.asarray(first) - np.asarray(second))
    excess = gap - z * np.asarray(sigma) - slack
    worst = float(np.max(excess))
    return worst <= 0.0, worst
