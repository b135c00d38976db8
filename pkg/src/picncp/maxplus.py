"""Max-plus scalar and matrix arithmetic over R ∪ {-inf, +inf}.

Scalars are plain floats and matrices are square ``float64`` numpy arrays.
``-inf`` is the zero element ε and ``+inf`` the top element ⊤.  Entry
``A[i, j]`` is the weight of the arc ``j -> i`` in the precedence graph of
``A``.

Native float addition turns ``-inf + inf`` into ``nan``; every operation here
that can meet both sentinels overrides that with ``-inf`` (ε is absorbing).
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

EPS = -np.inf
TOP = np.inf

# k-slabs per product chunk; bounds the product temporary to _BLOCK * n**2.
_BLOCK = 8


class MaxPlusError(ValueError):
    """Base class for max-plus domain errors."""


class DimensionError(MaxPlusError):
    """Operands do not have matching square shapes."""


class TopEntryError(MaxPlusError):
    """A +inf entry was passed where only R ∪ {-inf} is allowed."""


class PositiveCircuitError(MaxPlusError):
    """The precedence graph has a circuit with positive weight."""


# -- scalars -----------------------------------------------------------------

def oplus(a: float, b: float) -> float:
    """``a ⊕ b = max(a, b)``."""
    return a if a >= b else b


def otimes(a: float, b: float) -> float:
    """``a ⊗ b = a + b`` with ``-inf`` absorbing, even against ``+inf``."""
    if a == EPS or b == EPS:
        return EPS
    return a + b


def inv(a: float) -> float:
    """Max-plus inverse ``a⁻¹ = -a``; swaps the two sentinels."""
    return -a


# -- matrices ----------------------------------------------------------------

def as_matrix(A) -> np.ndarray:
    """Convert ``A`` to a square float64 array, rejecting NaN and bad shapes."""
    M = np.array(A, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {M.shape}")
    if np.isnan(M).any():
        raise MaxPlusError("NaN is not a max-plus value")
    return M


def zeros(n: int) -> np.ndarray:
    """The all-ε matrix 𝓔."""
    return np.full((n, n), EPS)


def identity(n: int) -> np.ndarray:
    """The max-plus identity E⊗ (0 on the diagonal, ε elsewhere)."""
    E = np.full((n, n), EPS)
    np.fill_diagonal(E, 0.0)
    return E


def _check_same(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")


def check_no_top(A: np.ndarray) -> None:
    if np.isposinf(A).any():
        raise TopEntryError("matrix contains a +inf entry")


def mat_oplus(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    _check_same(A, B)
    return np.maximum(A, B)


def mat_otimes(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Max-plus product ``(A ⊗ B)[i, j] = max_k A[i, k] + B[k, j]``.

    The reduction over ``k`` runs in fixed-size slabs so the temporary never
    exceeds a constant multiple of ``n**2`` entries.
    """
    _check_same(A, B)
    n = A.shape[0]
    saturating = np.isposinf(A).any() or np.isposinf(B).any()
    out = np.full((n, n), EPS)
    for k0 in range(0, n, _BLOCK):
        k1 = min(k0 + _BLOCK, n)
        with np.errstate(invalid="ignore"):
            T = A[:, k0:k1, None] + B[None, k0:k1, :]
        if saturating:
            T[np.isnan(T)] = EPS
        np.maximum(out, T.max(axis=1), out=out)
    return out


def mat_chain(*Ms: np.ndarray) -> np.ndarray:
    """Left-to-right product ``M1 ⊗ M2 ⊗ ... ⊗ Mk``."""
    out = Ms[0]
    for M in Ms[1:]:
        out = mat_otimes(out, M)
    return out


def scalar_mat_mul(lam: float, A: np.ndarray) -> np.ndarray:
    """Entrywise ``lam ⊗ A[i, j]`` with ε absorbing."""
    if lam == EPS:
        return np.full(A.shape, EPS)
    out = A + lam
    out[A == EPS] = EPS
    return out


def mat_power(A: np.ndarray, r: int) -> np.ndarray:
    if r < 0:
        raise ValueError("power must be non-negative")
    out = identity(A.shape[0])
    for _ in range(r):
        out = mat_otimes(A, out)
    return out


def trace(A: np.ndarray) -> float:
    """Max-plus trace: the maximum diagonal entry."""
    return float(np.max(np.diag(A)))


def kleene_star(A: np.ndarray, check: bool = True) -> np.ndarray:
    """``A* = E⊗ ⊕ A ⊕ A² ⊕ ...`` by Floyd-Warshall.

    Only defined here for graphs without positive circuits; that is verified
    first unless ``check`` is false (callers that just ran the detection
    themselves).

    Raises:
        TopEntryError: ``A`` has a +inf entry.
        PositiveCircuitError: ``G(A)`` has a positive circuit.
    """
    check_no_top(A)
    if check:
        from .graph import has_positive_circuit

        if has_positive_circuit(A):
            raise PositiveCircuitError("Kleene star diverges: G(A) has a positive circuit")
    S = A.copy()
    n = S.shape[0]
    for k in range(n):
        # row and column k are stable during step k because S[k, k] <= 0
        np.maximum(S, S[:, k, None] + S[None, k, :], out=S)
    np.fill_diagonal(S, np.maximum(np.diag(S), 0.0))
    return S


def kleene_plus(A: np.ndarray) -> np.ndarray:
    """``A⁺ = A ⊗ A*``."""
    return mat_otimes(A, kleene_star(A))


# -- maximum circuit mean ----------------------------------------------------

def _karp(W: np.ndarray) -> float:
    """Karp's maximum circuit mean on a strongly connected block ``W``."""
    m = W.shape[0]
    D = np.full((m + 1, m), EPS)
    D[0, 0] = 0.0
    for k in range(1, m + 1):
        D[k] = (W + D[k - 1][None, :]).max(axis=1)
    with np.errstate(invalid="ignore"):
        Q = (D[m][None, :] - D[:m]) / (m - np.arange(m))[:, None]
    Q[np.isnan(Q)] = np.inf  # D[k, v] and D[m, v] both ε
    worst = Q.min(axis=0)
    worst[D[m] == EPS] = EPS
    return float(worst.max())


def strong_components(A: np.ndarray) -> list[np.ndarray]:
    """Node sets of the strongly connected components of ``G(A)``."""
    adj = csr_matrix(np.isfinite(A).astype(np.int8))
    count, labels = connected_components(adj, directed=True, connection="strong")
    return [np.flatnonzero(labels == c) for c in range(count)]


def mcm(A: np.ndarray) -> float:
    """Maximum circuit mean of ``G(A)``; ``-inf`` when the graph is acyclic.

    Karp's algorithm is run on each strongly connected component; a
    component without any circuit contributes ``-inf``.
    """
    check_no_top(A)
    best = EPS
    for nodes in strong_components(A):
        if len(nodes) == 1 and A[nodes[0], nodes[0]] == EPS:
            continue
        best = max(best, _karp(A[np.ix_(nodes, nodes)]))
    return float(best)


def mcm_trace(A: np.ndarray) -> float:
    """Maximum circuit mean from the trace formula ``⊕_k tr(A^k)^(1/k)``.

    O(n⁴); kept as an independent cross-check for :func:`mcm`.
    """
    check_no_top(A)
    best = EPS
    Ak = identity(A.shape[0])
    for k in range(1, A.shape[0] + 1):
        Ak = mat_otimes(A, Ak)
        t = trace(Ak)
        if t != EPS:
            best = max(best, t / k)
    return float(best)
