"""Independent reference implementations used to check the production code.

Written from the definitions only; none of these import the code under test
beyond plain value types.
"""
import math
from fractions import Fraction


def gini_exact(counts):
    n = sum(counts)
    return 1 - sum(Fraction(c, n) ** 2 for c in counts)


def best_split_exhaustive(X, y, features=None, n_classes=5):
    """Every (feature, midpoint) pair scored with exact rational Gini.

    Returns (feature, threshold, weighted_gini) or None when no candidate is
    strictly purer than the parent. Ties keep the first pair in (feature,
    threshold) order.
    """
    n = len(y)
    if n < 2:
        return None
    parent = gini_exact([sum(1 for c in y if c == k) for k in range(n_classes)])
    if parent == 0:
        return None
    feats = range(len(X[0])) if features is None else sorted(features)
    best = None
    for f in feats:
        values = sorted(set(row[f] for row in X))
        for a, b in zip(values, values[1:]):
            thr = (a + b) / 2
            left = [c for row, c in zip(X, y) if row[f] < thr]
            right = [c for row, c in zip(X, y) if row[f] >= thr]
            if not left or not right:
                continue
            g = sum(Fraction(len(side), n) * gini_exact([side.count(k) for k in range(n_classes)])
                    for side in (left, right))
            if best is None or g < best[2]:
                best = (f, thr, g)
    if best is None or not best[2] < parent:
        return None
    return best


def knn_bruteforce(X, y, q, k):
    """Sort every training point by (distance, index); majority vote, vote ties
    go to the class whose nearest member ranks first."""
    order = sorted(range(len(y)), key=lambda i: (math.dist(X[i], q), i))[:k]
    votes = {}
    for i in order:
        votes[y[i]] = votes.get(y[i], 0) + 1
    top = max(votes.values())
    return next(y[i] for i in order if votes[y[i]] == top)


def ray_hit(origin, angle, polygons, max_range):
    """Distance along one ray to the nearest polygon edge, by parametric solve."""
    ox, oy = origin
    dx, dy = math.cos(angle), math.sin(angle)
    best = max_range
    for poly in polygons:
        for (ax, ay), (bx, by) in zip(poly, poly[1:] + poly[:1]):
            ex, ey = bx - ax, by - ay
            den = dx * ey - dy * ex
            if abs(den) < 1e-15:
                continue
            t = ((ax - ox) * ey - (ay - oy) * ex) / den
            u = ((ax - ox) * dy - (ay - oy) * dx) / den
            if t >= 0 and 0 <= u <= 1:
                best = min(best, t)
    return best


def dense_sweep(origin, bearing, polygons, half_width_deg=7.5, rays=31, max_range=450.0):
    """Minimum over ``rays`` evenly spaced rays covering bearing +/- half_width."""
    step = 2 * half_width_deg / (rays - 1)
    return min(ray_hit(origin, bearing + math.radians(-half_width_deg + i * step), polygons, max_range)
               for i in range(rays))
