"""Inner loops for split search, tree traversal and nearest-neighbour voting.

Each kernel has a numba loop version and a vectorised numpy version; both
evaluate the same arithmetic in the same order so results match bit-for-bit.
"""
import numpy as np

from .._accel import njit, select

N_CLASSES = 5


# -- split search ------------------------------------------------------------

def _best_split_loop(X, y, features):
    n = X.shape[0]
    total = np.zeros(N_CLASSES, dtype=np.int64)
    for i in range(n):
        total[y[i]] += 1
    best_gini = np.inf
    best_feature = -1
    best_threshold = 0.0
    for fi in range(features.shape[0]):
        f = features[fi]
        col = X[:, f].copy()
        order = np.argsort(col, kind="mergesort")
        left = np.zeros(N_CLASSES, dtype=np.int64)
        sq_left = 0
        sq_right = 0
        for c in range(N_CLASSES):
            sq_right += total[c] * total[c]
        for i in range(n - 1):
            lab = y[order[i]]
            # (c+1)^2 - c^2 = 2c + 1 keeps the running sums exact integers
            sq_left += 2 * left[lab] + 1
            right_c = total[lab] - left[lab]
            sq_right -= 2 * right_c - 1
            left[lab] += 1
            a = col[order[i]]
            b = col[order[i + 1]]
            if a == b:
                continue
            n_left = i + 1
            n_right = n - n_left
            score = sq_left / n_left + sq_right / n_right
            g = 1.0 - score / n
            if g < best_gini:
                best_gini = g
                best_feature = f
                best_threshold = (a + b) / 2
    return best_feature, best_threshold, best_gini


def _best_split_numpy(X, y, features):
    n = X.shape[0]
    total = np.bincount(y, minlength=N_CLASSES).astype(np.int64)
    best = (-1, 0.0, np.inf)
    for f in features:
        col = X[:, f]
        order = np.argsort(col, kind="mergesort")
        xs = col[order]
        onehot = np.zeros((n, N_CLASSES), dtype=np.int64)
        onehot[np.arange(n), y[order]] = 1
        left = np.cumsum(onehot, axis=0)[:-1]
        right = total[None, :] - left
        sq_left = (left * left).sum(axis=1)
        sq_right = (right * right).sum(axis=1)
        n_left = np.arange(1, n, dtype=np.int64)
        score = sq_left / n_left + sq_right / (n - n_left)
        g = 1.0 - score / n
        valid = xs[:-1] != xs[1:]
        if not valid.any():
            continue
        g = np.where(valid, g, np.inf)
        i = int(np.argmin(g))
        if g[i] < best[2]:
            best = (int(f), float((xs[i] + xs[i + 1]) / 2), float(g[i]))
    return best


best_split_jit = njit(_best_split_loop)
best_split_kernel = select(best_split_jit, _best_split_numpy)


# -- tree traversal ----------------------------------------------------------

def _tree_predict_loop(X, feature, threshold, left, right, leaf):
    out = np.empty(X.shape[0], dtype=np.int64)
    for r in range(X.shape[0]):
        node = 0
        while leaf[node] < 0:
            if X[r, feature[node]] < threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[r] = leaf[node]
    return out


def _tree_predict_numpy(X, feature, threshold, left, right, leaf):
    node = np.zeros(X.shape[0], dtype=np.int64)
    active = leaf[node] < 0
    while active.any():
        idx = np.flatnonzero(active)
        nd = node[idx]
        go_left = X[idx, feature[nd]] < threshold[nd]
        node[idx] = np.where(go_left, left[nd], right[nd])
        active = leaf[node] < 0
    return leaf[node]


tree_predict_jit = njit(_tree_predict_loop)
tree_predict_kernel = select(tree_predict_jit, _tree_predict_numpy)


# -- nearest neighbours ------------------------------------------------------

def _vote(neigh_labels):
    counts = np.zeros(N_CLASSES, dtype=np.int64)
    for lab in neigh_labels:
        counts[lab] += 1
    top = counts.max()
    # neighbours arrive nearest-first: the first one in a tied class wins
    for lab in neigh_labels:
        if counts[lab] == top:
            return lab
    return neigh_labels[0]


_vote_jit = njit(_vote)


def _knn_predict_loop(X, y, Q, k):
    n = X.shape[0]
    out = np.empty(Q.shape[0], dtype=np.int64)
    d = np.empty(n)
    for q in range(Q.shape[0]):
        for i in range(n):
            acc = 0.0
            for j in range(X.shape[1]):
                diff = X[i, j] - Q[q, j]
                acc += diff * diff
            d[i] = acc
        order = np.argsort(d, kind="mergesort")
        out[q] = _vote_jit(y[order[:k]])
    return out


def _knn_predict_numpy(X, y, Q, k, chunk=256):
    out = np.empty(Q.shape[0], dtype=np.int64)
    for s in range(0, Q.shape[0], chunk):
        diff = X[None, :, :] - Q[s:s + chunk, None, :]
        d = (diff * diff).sum(axis=2)
        order = np.argsort(d, axis=1, kind="stable")[:, :k]
        for r, nn in enumerate(order):
            out[s + r] = _vote(y[nn])
    return out


knn_predict_jit = njit(_knn_predict_loop)
knn_predict_kernel = select(knn_predict_jit, _knn_predict_numpy)
