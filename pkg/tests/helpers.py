"""Random instance generators and brute-force oracles shared by the tests.

Everything here works by enumeration and avoids the library's algorithms,
except for building matrices.
"""

from __future__ import annotations

import itertools

import numpy as np

from picncp.solver import ProblemInstance

NINF = -np.inf

PAIR_A = np.array([[NINF, NINF, NINF], [2, NINF, NINF], [NINF, NINF, -1]])
PAIR_B = np.array([[NINF, -2, 1], [0, NINF, NINF], [NINF, -2, NINF]])

TRI_P = np.array([[NINF, NINF, NINF], [NINF, NINF, NINF], [NINF, NINF, -4]])
TRI_I = np.array([[NINF, 0, NINF], [NINF, NINF, 0.5], [NINF, NINF, 0]])
TRI_C = np.array([[NINF, -3, NINF], [2, NINF, NINF], [6, 0.5, NINF]])


def three_node() -> ProblemInstance:
    return ProblemInstance(TRI_P, TRI_I, TRI_C)


def empty_instance(n: int) -> ProblemInstance:
    E = np.full((n, n), NINF)
    return ProblemInstance(E, E, E)


# -- generators -------------------------------------------------------------------

def half_int_matrix(rng, n, density=1.0, lo=-10.0, hi=10.0) -> np.ndarray:
    vals = rng.integers(int(2 * lo), int(2 * hi) + 1, size=(n, n)) / 2.0
    mask = rng.random((n, n)) < density
    return np.where(mask, vals, NINF)


def gamma_matrix(rng, n, density=0.6, x=None, max_slack=3.0) -> np.ndarray:
    """Random matrix whose every circuit has weight <= 0 (potential-shifted arcs)."""
    if x is None:
        x = rng.integers(-10, 11, size=n) / 2.0
    slack = rng.integers(0, int(2 * max_slack) + 1, size=(n, n)) / 2.0
    vals = x[:, None] - x[None, :] - slack
    mask = rng.random((n, n)) < density
    return np.where(mask, vals, NINF)


def random_instance(rng, n, density) -> ProblemInstance:
    return ProblemInstance(*(half_int_matrix(rng, n, density) for _ in range(3)))


def leaning_instance(rng, n, density) -> ProblemInstance:
    """C without positive circuits and sparser P/I, so non-empty answers are common."""
    C = gamma_matrix(rng, n, density)
    P = half_int_matrix(rng, n, density * 0.6)
    I = half_int_matrix(rng, n, density * 0.6)
    return ProblemInstance(P, I, C)


# -- brute force ------------------------------------------------------------------

def brute_power(A, r):
    """(A^r)[i, j] as the best weight over all length-r node sequences j -> ... -> i."""
    n = A.shape[0]
    out = np.full((n, n), NINF)
    if r == 0:
        np.fill_diagonal(out, 0.0)
        return out
    for seq in itertools.product(range(n), repeat=r + 1):
        w = 0.0
        for a, b in zip(seq, seq[1:]):
            if A[b, a] == NINF:
                w = NINF
                break
            w += A[b, a]
        j, i = seq[0], seq[-1]
        out[i, j] = max(out[i, j], w)
    return out


def elementary_circuits(n):
    """Every elementary circuit once, as a node tuple starting at its smallest node."""
    for k in range(1, n + 1):
        for combo in itertools.combinations(range(n), k):
            first, rest = combo[0], combo[1:]
            for perm in itertools.permutations(rest):
                yield (first,) + perm


def circuit_weights(A, circuit):
    nxt = circuit[1:] + circuit[:1]
    return [A[b, a] for a, b in zip(circuit, nxt)]


def brute_positive_circuit(A) -> bool:
    for c in elementary_circuits(A.shape[0]):
        ws = circuit_weights(A, c)
        if NINF not in ws and sum(ws) > 0:
            return True
    return False


def brute_mcm(A) -> float:
    best = NINF
    for c in elementary_circuits(A.shape[0]):
        ws = circuit_weights(A, c)
        if NINF not in ws:
            best = max(best, sum(ws) / len(ws))
    return best


def brute_multi_positive(mats) -> bool:
    """Positive circuit in the multi-precedence graph, choosing every arc label explicitly."""
    n = mats[0].shape[0]
    for c in elementary_circuits(n):
        arcs = list(zip(c, c[1:] + c[:1]))
        for labels in itertools.product(range(len(mats)), repeat=len(arcs)):
            ws = [mats[z][b, a] for (a, b), z in zip(arcs, labels)]
            if NINF not in ws and sum(ws) > 0:
                return True
    return False


def reachability(A):
    n = A.shape[0]
    R = (A != NINF) | np.eye(n, dtype=bool)
    for k in range(n):
        R = R | (R[:, k, None] & R[None, k, :])
    return R  # R[i, j]: j reaches i


def brute_nodes_on_positive_circuit(A):
    """Nodes lying on some positive closed walk."""
    n = A.shape[0]
    R = reachability(A)
    marked = np.zeros(n, dtype=bool)
    for c in elementary_circuits(n):
        ws = circuit_weights(A, c)
        if NINF in ws or sum(ws) <= 0:
            continue
        for i in range(n):
            if any(R[v, i] and R[i, v] for v in c):
                marked[i] = True
    return marked


def brute_star(A):
    """Best weight over all walks of length 0..n-1 (the star of a graph without positive circuits)."""
    n = A.shape[0]
    out = brute_power(A, 0)
    for r in range(1, n):
        out = np.maximum(out, brute_power(A, r))
    return out


def sat_product(A, B):
    """Max-plus product written out entry by entry, with ε absorbing against +inf."""
    n = A.shape[0]
    out = np.full((n, n), NINF)
    for i in range(n):
        for j in range(n):
            best = NINF
            for k in range(n):
                a, b = A[i, k], B[k, j]
                if a == NINF or b == NINF:
                    continue
                best = max(best, a + b)
            out[i, j] = best
    return out


def truncated_star_diag(A, K):
    """Diagonal of ⊕_{k<=K} A^k, with (-inf) + (+inf) forced to -inf."""
    n = A.shape[0]
    Ak = np.full((n, n), NINF)
    np.fill_diagonal(Ak, 0.0)
    diag = np.zeros(n)
    for _ in range(K):
        with np.errstate(invalid="ignore"):
            T = A[:, :, None] + Ak[None, :, :]
        T[np.isnan(T)] = NINF
        Ak = T.max(axis=1)
        diag = np.maximum(diag, np.diag(Ak))
    return diag
