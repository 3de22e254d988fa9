"""Independent reference implementations the tests compare against.

Everything here is deliberately written the dumb, obvious way: masks
and pair counting instead of prefix sums, itertools instead of bit
tricks.  The split oracle keeps the same arithmetic formula shape
(p = count/n, impurity = 1 - p*p - q*q, weighted = (nl*gl + nr*gr)/n)
so that agreement with the library can be asserted bit for bit.
"""

from itertools import combinations

import numpy as np

from solvency.dataset import NUMERIC


def gini_two_counts(c1: float, c0: float, n: float) -> float:
    p1 = c1 / n
    p0 = c0 / n
    return 1.0 - p1 * p1 - p0 * p0


def brute_force_best_split(data, variables=None):
    """Exhaustive split search over every feature and cut.

    Returns (decrease, feature_name, detail) where detail is a float
    threshold for numeric features or a frozenset of codes for
    categorical ones, or None when no admissible split exists.  Ties
    resolve to the lowest feature index, then the lowest threshold,
    then the lexicographically smallest sorted code tuple.
    """
    names = list(variables) if variables is not None else data.schema.names
    specs = sorted((data.schema[n] for n in names), key=lambda s: s.index)
    y = data.binary_target().astype(float)
    n = float(y.shape[0])
    c1 = float(y.sum())
    c0 = n - c1
    if y.shape[0] < 2 or c1 == 0.0 or c0 == 0.0:
        return None
    parent = gini_two_counts(c1, c0, n)

    best = None  # (decrease, feature, detail)
    for spec in specs:
        values = data.feature_array([spec.name])[:, 0]
        cand = None
        if spec.kind == NUMERIC:
            distinct = np.unique(values)
            feature_best = None
            for i in range(distinct.shape[0] - 1):
                threshold = (distinct[i] + distinct[i + 1]) / 2.0
                left = values <= distinct[i]
                dec = _decrease(y, left, parent, c1, c0, n)
                # ascending thresholds + strict > keeps the lowest one
                if feature_best is None or dec > feature_best[0]:
                    feature_best = (dec, float(threshold))
            if feature_best is not None:
                cand = (feature_best[0], spec.name, feature_best[1])
        else:
            codes = sorted(int(c) for c in np.unique(values))
            if len(codes) >= 2:
                feature_best = None
                for subset in _half_partitions(codes):
                    left = np.isin(values, subset)
                    dec = _decrease(y, left, parent, c1, c0, n)
                    if (feature_best is None or dec > feature_best[0]
                            or (dec == feature_best[0]
                                and subset < feature_best[1])):
                        feature_best = (dec, subset)
                cand = (feature_best[0], spec.name,
                        frozenset(feature_best[1]))
        if cand is not None and (best is None or cand[0] > best[0]):
            best = cand
    if best is None or best[0] < 0.0:
        return None
    return best


def _half_partitions(codes):
    """Every proper nonempty subset containing the smallest code."""
    first, rest = codes[0], codes[1:]
    for size in range(len(rest)):
        for tail in combinations(rest, size):
            yield (first,) + tail


def _decrease(y, left_mask, parent, c1, c0, n):
    nl = float(left_mask.sum())
    nr = n - nl
    if nl < 1 or nr < 1:
        return -np.inf
    cl1 = float(y[left_mask].sum())
    cl0 = nl - cl1
    gl = gini_two_counts(cl1, cl0, nl)
    gr = gini_two_counts(c1 - cl1, c0 - cl0, nr)
    weighted = (nl * gl + nr * gr) / n
    return parent - weighted


def mann_whitney_auc(actual, scores) -> float:
    """Pairwise rank AUC: P(score_pos > score_neg) + half-credit ties."""
    actual = np.asarray(actual)
    scores = np.asarray(scores, dtype=float)
    pos = scores[actual == 1]
    neg = scores[actual == 0]
    wins = 0.0
    for p in pos:
        wins += float(np.sum(p > neg)) + 0.5 * float(np.sum(p == neg))
    return wins / (pos.shape[0] * neg.shape[0])


def central_difference_gradient(f, x, h=1e-4):
    """Central finite differences of a scalar function at x."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for j in range(x.shape[0]):
        step = np.zeros_like(x)
        step[j] = h
        grad[j] = (f(x + step) - f(x - step)) / (2.0 * h)
    return grad


def chi_square_density_1df(t: float) -> float:
    """Density of the chi-square distribution with one degree of
    freedom, used as a quadrature integrand."""
    return np.exp(-t / 2.0) / np.sqrt(2.0 * np.pi * t)
