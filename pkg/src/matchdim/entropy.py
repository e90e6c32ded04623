"""Order-2 (collision) entropy rates: closed forms and empirical estimates.

Closed forms covered:
- i.i.d. source: -log sum_i p_i^2.
- Markov chain: -log p with p the Perron eigenvalue of the entrywise square
  of the transition matrix; independent of the initial distribution.
- zero-inflated contamination of an i.i.d. source with noise level epsilon:
  (1 - epsilon) times the clean rate.
- weight-stretched Markov chain ("scrabble" scoring): -log p with p computed
  two independent ways, as the Perron eigenvalue of the entrywise square of
  the expanded transition matrix, and as the largest root in (0, 1) of
  det([q_ij^2] - diag(lambda^w(i))) = 0. Both are returned and must agree
  to 1e-9.

Empirical estimates plug observed block frequencies into
-log(collision)/k and select a plateau block length k automatically.

All entropies are in nats.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .sources import SymbolSeq, collision_probability, _check_probability_vector

EIGEN_ROOT_ATOL = 1e-9


@dataclass(frozen=True)
class EntropyEstimate:
    """One entropy value with its provenance.

    For empirical estimates, value = -log(collision)/k and distinct_blocks
    counts the observed distinct windows; closed forms carry k=None.
    """

    value: float
    method: str
    k: int | None = None
    collision: float | None = None
    distinct_blocks: int | None = None


@dataclass(frozen=True)
class ScrabbleSpectrum:
    """Dominant-decay data of a weight-stretched chain."""

    qstar: np.ndarray
    p_eigen: float
    p_root: float
    expanded_size: int
    entropy: float


def renyi2_iid(probs) -> float:
    """-log of the collision probability of one symbol draw."""
    p = _check_probability_vector(np.asarray(probs, dtype=float), "probs")
    return float(-np.log(np.sum(p * p)))


def _check_stochastic(P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
        raise ValueError("transition matrix must be square and nonempty")
    if P.min() < 0 or np.max(np.abs(P.sum(axis=1) - 1.0)) > 1e-12:
        raise ValueError("transition matrix must be row-stochastic")
    return P


def _is_irreducible(M: np.ndarray) -> bool:
    """Strong connectivity of the support graph (forward and backward BFS)."""
    n = M.shape[0]
    support = M > 0
    for adj in (support, support.T):
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            nxt = adj[frontier].any(axis=0) & ~seen
            seen |= nxt
            frontier = np.flatnonzero(nxt).tolist()
        if not seen.all():
            return False
    return True


def dominant_eigenvalue(M, tol: float = 1e-13, max_iter: int = 200_000) -> float:
    """Perron eigenvalue of a nonnegative irreducible matrix.

    Power iteration runs on M + I (same Perron vector, spectrum shifted by 1,
    primitive whenever M is irreducible, so periodicity cannot stall it) with
    a Rayleigh-quotient estimate and residual stopping test.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if M.min() < 0:
        raise ValueError("matrix must be nonnegative")
    n = M.shape[0]
    shifted = M + np.eye(n)
    x = np.full(n, 1.0 / math.sqrt(n))
    lam = 0.0
    for _ in range(max_iter):
        y = shifted @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            raise ArithmeticError("iterate vanished; matrix is not irreducible")
        x = y / norm
        lam = float(x @ (shifted @ x))
        residual = np.linalg.norm(shifted @ x - lam * x, ord=np.inf)
        if residual <= tol * max(1.0, abs(lam)):
            return lam - 1.0
    raise ArithmeticError(f"power iteration did not converge within {max_iter} iterations")


def renyi2_markov(P) -> float:
    """-log of the Perron eigenvalue of the entrywise square of P."""
    P = _check_stochastic(P)
    if not _is_irreducible(P):
        raise ValueError("transition matrix must be irreducible")
    return float(-np.log(dominant_eigenvalue(P * P)))


def renyi2_zero_inflated(probs, epsilon: float) -> float:
    """Clean i.i.d. rate shrunk by the surviving-symbol fraction 1 - epsilon."""
    if not 0.0 <= epsilon < 1.0:
        raise ValueError(f"epsilon must be in [0, 1), got {epsilon}")
    return (1.0 - epsilon) * renyi2_iid(probs)


def build_qstar(P, weights) -> np.ndarray:
    """Transition matrix of the weight-stretched chain.

    Symbol i becomes a deterministic run of states i_1 .. i_w(i); the run
    steps forward with probability 1 and exits its last state into j_1 with
    the original probability P[i, j]. States are ordered
    1_1..1_w(1), 2_1..2_w(2), ....
    """
    P = _check_stochastic(P)
    d = P.shape[0]
    w = [int(v) for v in (weights if not isinstance(weights, dict)
                          else [weights[s] for s in range(d)])]
    if len(w) != d or any(v < 1 for v in w):
        raise ValueError("weights must give a positive integer per symbol")
    offsets = np.concatenate([[0], np.cumsum(w)])
    total = int(offsets[-1])
    Q = np.zeros((total, total))
    for i in range(d):
        base = offsets[i]
        for step in range(w[i] - 1):
            Q[base + step, base + step + 1] = 1.0
        for j in range(d):
            Q[base + w[i] - 1, offsets[j]] = P[i, j]
    return Q


def _det_weighted(P_sq: np.ndarray, w: list[int], lam: float) -> float:
    return float(np.linalg.det(P_sq - np.diag([lam ** v for v in w])))


def _largest_weighted_root(P_sq: np.ndarray, w: list[int],
                           lo: float = 1e-9, hi: float = 1.0 - 1e-9,
                           grid: int = 4096) -> float:
    """Largest root in (0, 1] of det(P_sq - diag(lambda^w)) by scan + bisection."""
    # deterministic chains put the root exactly at 1
    if abs(_det_weighted(P_sq, w, 1.0)) < 1e-12:
        return 1.0
    xs = np.linspace(lo, hi, grid)
    vals = np.array([_det_weighted(P_sq, w, x) for x in xs])
    signs = np.sign(vals)
    nonzero = signs != 0
    flips = np.flatnonzero(np.diff(signs[nonzero]) != 0)
    if flips.size == 0:
        raise ArithmeticError("no sign change of det(P_sq - diag(lambda^w)) in (0, 1)")
    # smaller eigenvalues of the expanded chain may also cross; the largest
    # crossing is the decay rate, and the eigenvalue route cross-checks it
    idx = np.flatnonzero(nonzero)
    a, b = float(xs[idx[flips[-1]]]), float(xs[idx[flips[-1] + 1]])
    fa = _det_weighted(P_sq, w, a)
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = _det_weighted(P_sq, w, mid)
        if fm == 0.0:
            return mid
        if (fa < 0) == (fm < 0):
            a, fa = mid, fm
        else:
            b = mid
        if b - a < 1e-14:
            break
    return 0.5 * (a + b)


def renyi2_scrabble(P, weights) -> ScrabbleSpectrum:
    """Dominant decay rate of a weight-stretched chain, computed two ways.

    p_eigen comes from the Perron eigenvalue of the entrywise square of the
    expanded matrix; p_root from the largest root of
    det([P_ij^2] - diag(lambda^w(i))) in (0, 1). Disagreement beyond 1e-9 is
    an internal-consistency error. A weight gcd above 1 does not guarantee an
    aperiodic stretched chain and only triggers a warning.
    """
    P = _check_stochastic(P)
    if not _is_irreducible(P):
        raise ValueError("transition matrix must be irreducible")
    d = P.shape[0]
    w = [int(v) for v in (weights if not isinstance(weights, dict)
                          else [weights[s] for s in range(d)])]
    if len(w) != d or any(v < 1 for v in w):
        raise ValueError("weights must give a positive integer per symbol")
    if (math.gcd(*w) if len(w) > 1 else w[0]) != 1:
        warnings.warn("weight gcd != 1: stretched chain may be periodic",
                      RuntimeWarning, stacklevel=2)
    qstar = build_qstar(P, w)
    p_eigen = dominant_eigenvalue(qstar * qstar)
    p_root = _largest_weighted_root(P * P, w)
    if abs(p_eigen - p_root) >= EIGEN_ROOT_ATOL:
        raise ArithmeticError(
            f"eigenvalue/root disagreement: {p_eigen!r} vs {p_root!r}")
    return ScrabbleSpectrum(qstar=qstar, p_eigen=p_eigen, p_root=p_root,
                            expanded_size=qstar.shape[0],
                            entropy=float(-np.log(p_eigen)))


def renyi2_empirical(seq: SymbolSeq, k: int) -> EntropyEstimate:
    """Plug-in estimate -log(collision probability at block length k)/k."""
    guideline = 100 * seq.alphabet.size ** k
    if seq.length < guideline:
        warnings.warn(
            f"sequence length {seq.length} below the {guideline} guideline "
            f"for k={k}; estimate may be undersampled", RuntimeWarning,
            stacklevel=2)
    col = collision_probability(seq, k)
    distinct = _count_distinct_blocks(seq, k)
    return EntropyEstimate(value=float(-np.log(col) / k), method="empirical",
                           k=k, collision=col, distinct_blocks=distinct)


def _count_distinct_blocks(seq: SymbolSeq, k: int) -> int:
    from .sources import block_codes, block_counts
    try:
        return int(np.unique(block_codes(seq, k)).size)
    except ValueError:
        return len(block_counts(seq, k))


def empirical_plateau(seq: SymbolSeq, k_max: int | None = None,
                      min_coincidences: float = 100.0
                      ) -> tuple[EntropyEstimate, list[EntropyEstimate]]:
    """Empirical estimate at an automatically selected block length.

    The plug-in value -log(collision)/k carries an O(1/k) bias from the
    collision prefactor, so k is pushed as high as the sample supports:
    blocks lengthen until the observed collision probability drops below
    min_coincidences per window (where the +1/M counting bias and sampling
    noise take over) or the packed-code limit is hit. The reported k then
    minimizes the step |H(k+1) - H(k)| over that range: the flattest step is
    the best bias/noise tradeoff.
    """
    size = max(seq.alphabet.size, 2)
    hard_cap = min(int(62 / math.log2(size)), seq.length // 4, 256)
    windows = seq.length  # within a factor of the window count for k << n
    table: list[EntropyEstimate] = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for k in range(2, max(k_max or hard_cap, 3) + 1):
            est = renyi2_empirical(seq, k)
            table.append(est)
            if k_max is None and est.collision * windows < min_coincidences:
                break
    steps = [abs(table[i + 1].value - table[i].value) for i in range(len(table) - 1)]
    best = int(np.argmin(steps)) if steps else 0
    return table[best], table
