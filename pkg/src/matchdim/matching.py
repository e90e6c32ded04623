"""Longest common substring and highest-scoring match statistics.

Two routes are provided for the longest common substring of two symbol
sequences: a quadratic dynamic-programming oracle (`lcs_oracle`) and a fast
path (`lcs_fast`) built on a suffix automaton of the first sequence streamed
against the second. The fast path is the production route; the oracle exists
to cross-check it and is kept independent of it.

`highest_score` generalizes match length to weighted match score: every
symbol carries a positive integer weight and a common substring scores the
sum of its symbol weights.

Witnesses are (i, j, k): start positions in each sequence and the match
length. Ties are broken toward the lexicographically smallest (i, j) so
results are reproducible; length/score is the contract, the witness is
diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .encoders import Encoder, encode
from .sources import SymbolSeq


@dataclass(frozen=True)
class MatchResult:
    """Optimal match statistic plus one witness realizing it.

    `length` is the common-substring length, or the accumulated weight for
    scored matches (the witness component k then holds the match length).
    A zero-length result carries the trivial witness (0, 0, 0).
    """

    length: int
    witness: tuple[int, int, int]


def _check_pair(x: SymbolSeq, y: SymbolSeq) -> None:
    if x.length == 0 or y.length == 0:
        raise ValueError("sequences must be nonempty")
    if x.alphabet.size != y.alphabet.size:
        raise ValueError("sequences must share an alphabet")


def lcs_oracle(x: SymbolSeq, y: SymbolSeq) -> MatchResult:
    """Exact longest common substring by the quadratic match-suffix table.

    T[i, j] = length of the maximal common run starting at (i, j), computed
    row by row from the bottom; the answer is the table maximum.
    """
    _check_pair(x, y)
    xd, yd = x.data, y.data
    prev = np.zeros(yd.size + 1, dtype=np.int64)
    cur = np.zeros(yd.size + 1, dtype=np.int64)
    best, bi, bj = 0, 0, 0
    for i in range(xd.size - 1, -1, -1):
        np.add(prev[1:], 1, out=cur[:-1])
        np.multiply(cur[:-1], yd == xd[i], out=cur[:-1])
        rm = int(cur.max())
        if rm > 0 and rm >= best:
            best = rm
            bi = i
            bj = int(np.argmax(cur == rm))
        prev, cur = cur, prev
    return MatchResult(best, (bi, bj, best) if best else (0, 0, 0))


class SuffixAutomaton:
    """Suffix automaton with online extension and first-occurrence tracking."""

    def __init__(self):
        self._len = [0]
        self._link = [-1]
        self._trans: list[dict[int, int]] = [{}]
        self._first_end = [-1]
        self._clone = [False]
        self._last = 0
        self.size = 0

    def extend(self, c: int) -> None:
        pos = self.size
        self.size += 1
        cur = len(self._len)
        self._len.append(self._len[self._last] + 1)
        self._link.append(-1)
        self._trans.append({})
        self._first_end.append(pos)
        self._clone.append(False)
        p = self._last
        while p != -1 and c not in self._trans[p]:
            self._trans[p][c] = cur
            p = self._link[p]
        if p == -1:
            self._link[cur] = 0
        else:
            q = self._trans[p][c]
            if self._len[p] + 1 == self._len[q]:
                self._link[cur] = q
            else:
                clone = len(self._len)
                self._len.append(self._len[p] + 1)
                self._link.append(self._link[q])
                self._trans.append(dict(self._trans[q]))
                self._first_end.append(self._first_end[q])
                self._clone.append(True)
                while p != -1 and self._trans[p].get(c) == q:
                    self._trans[p][c] = clone
                    p = self._link[p]
                self._link[q] = clone
                self._link[cur] = clone
        self._last = cur

    def extend_all(self, symbols) -> None:
        for c in symbols:
            self.extend(c)

    def longest_match_length(self, ys) -> int:
        """Length of the longest substring of `ys` occurring in the automaton."""
        trans, link, lens = self._trans, self._link, self._len
        v, l, best = 0, 0, 0
        for c in ys:
            t = trans[v].get(c)
            if t is not None:
                v = t
                l += 1
            else:
                while v != -1 and c not in trans[v]:
                    v = link[v]
                if v == -1:
                    v, l = 0, 0
                else:
                    l = lens[v] + 1
                    v = trans[v][c]
            if l > best:
                best = l
        return best

    def _min_end_positions(self) -> list[int]:
        # exact min of each state's end-position set, by propagating up the
        # suffix-link tree in decreasing-length order (counting sort)
        n = len(self._len)
        order = sorted(range(1, n), key=self._len.__getitem__, reverse=True)
        min_end = list(self._first_end)
        for v in order:
            p = self._link[v]
            if min_end[v] < min_end[p]:
                min_end[p] = min_end[v]
        return min_end

    def match_witness(self, ys, length: int) -> tuple[int, int]:
        """Smallest (i, j) with automaton-text[i:i+length] == ys[j:j+length]."""
        if length <= 0:
            return (0, 0)
        trans, link, lens = self._trans, self._link, self._len
        min_end = self._min_end_positions()
        first_j: dict[int, int] = {}
        v, l = 0, 0
        for jj, c in enumerate(ys):
            t = trans[v].get(c)
            if t is not None:
                v = t
                l += 1
            else:
                while v != -1 and c not in trans[v]:
                    v = link[v]
                if v == -1:
                    v, l = 0, 0
                    continue
                l = lens[v] + 1
                v = trans[v][c]
            if l >= length:
                # state of the length-`length` suffix ending here
                t = v
                while lens[link[t]] >= length:
                    t = link[t]
                if t not in first_j:
                    first_j[t] = jj - length + 1
        if not first_j:
            raise ValueError("no match of the requested length exists")
        best_i = min(min_end[t] - length + 1 for t in first_j)
        best_j = min(j for t, j in first_j.items()
                     if min_end[t] - length + 1 == best_i)
        return (best_i, best_j)


def lcs_fast(x: SymbolSeq, y: SymbolSeq, want_witness: bool = True) -> MatchResult:
    """Longest common substring via a suffix automaton of x streamed by y.

    Matches lcs_oracle in length on every input; the witness pass is skipped
    when want_witness is False (bulk statistics only need the length).
    """
    _check_pair(x, y)
    sa = SuffixAutomaton()
    sa.extend_all(x.data.tolist())
    ys = y.data.tolist()
    best = sa.longest_match_length(ys)
    if best == 0 or not want_witness:
        return MatchResult(best, (0, 0, 0))
    i, j = sa.match_witness(ys, best)
    return MatchResult(best, (i, j, best))


def lcs_lengths_over_schedule(x: SymbolSeq, y: SymbolSeq, schedule) -> list[int]:
    """Longest-common-substring lengths of matched prefixes for each n in schedule.

    The automaton is grown incrementally over x, so the total cost is about
    one build at max(schedule) plus one scan of y per scheduled n.
    """
    _check_pair(x, y)
    ns = [int(n) for n in schedule]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("schedule must be strictly increasing")
    if ns[0] < 1 or ns[-1] > min(x.length, y.length):
        raise ValueError("schedule out of range for the given sequences")
    sa = SuffixAutomaton()
    xl = x.data.tolist()
    yl = y.data.tolist()
    out = []
    done = 0
    for n in ns:
        sa.extend_all(xl[done:n])
        done = n
        out.append(sa.longest_match_length(yl[:n]))
    return out


def encoded_lcs(x: SymbolSeq, y: SymbolSeq, encoder: Encoder, n: int) -> MatchResult:
    """Longest common substring of the two length-n encoded images."""
    return lcs_fast(encode(encoder, x, n), encode(encoder, y, n))


def _masked_window_match_exists(xd, yd, mask_x, mask_y, n: int, k: int) -> bool:
    if not 1 <= k <= n:
        return k <= 0
    keys = []
    for data, mask in ((xd, mask_x), (yd, mask_y)):
        w = sliding_window_view(data[:n].astype(np.uint8), k) * mask[:k].astype(np.uint8)
        w = np.ascontiguousarray(w)
        keys.append(w.view(np.dtype((np.void, k))).ravel())
    return np.intersect1d(keys[0], keys[1]).size > 0


def masked_window_lcs(x: SymbolSeq, y: SymbolSeq, mask_x, mask_y=None,
                      schedule=None) -> list[int]:
    """Longest matching window pair with the mask re-anchored to window starts.

    A contamination mask is a fixed environment: comparing a window of x
    starting at i with a window of y starting at j applies the same mask
    prefix to both, i.e. position t of the windows matches when
    mask_x[t]*x[i+t] == mask_y[t]*y[j+t]. With a shared mask this keeps the
    masked positions aligned across the pair (they act as wildcards), which
    is the matching event whose rate is set by the contaminated entropy; the
    plain substring match of the two encoded strings compares mask bits from
    unrelated positions instead and decays at a different rate.

    Returns the optimal length for each n in `schedule` (default: the full
    common length). Alphabets up to 256 symbols.
    """
    _check_pair(x, y)
    if x.alphabet.size > 256:
        raise ValueError("masked matching supports alphabets up to 256 symbols")
    mask_x = np.asarray(mask_x, dtype=np.int64)
    mask_y = mask_x if mask_y is None else np.asarray(mask_y, dtype=np.int64)
    ns = [min(x.length, y.length)] if schedule is None else [int(v) for v in schedule]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("schedule must be strictly increasing")
    if ns[-1] > min(x.length, y.length) or ns[0] < 1:
        raise ValueError("schedule out of range for the given sequences")
    if mask_x.size < ns[-1] or mask_y.size < ns[-1]:
        raise ValueError("masks must cover the largest scheduled n")
    xd, yd = x.data, y.data
    out = []
    best = 0
    for n in ns:
        # exponential probe then bisect; optimum is nondecreasing in n
        step = 1
        while best + step <= n and _masked_window_match_exists(
                xd, yd, mask_x, mask_y, n, best + step):
            best += step
            step *= 2
        lo, hi = best, min(best + step, n + 1)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _masked_window_match_exists(xd, yd, mask_x, mask_y, n, mid):
                lo = mid
            else:
                hi = mid
        best = lo
        out.append(best)
    return out


def _weight_vector(weights, alphabet_size: int) -> np.ndarray:
    if isinstance(weights, dict):
        try:
            w = [int(weights[s]) for s in range(alphabet_size)]
        except KeyError as e:
            raise ValueError(f"missing weight for symbol {e.args[0]}") from None
    else:
        w = [int(v) for v in weights]
        if len(w) < alphabet_size:
            raise ValueError("missing weight: weight vector shorter than alphabet")
    if any(v < 1 for v in w):
        raise ValueError("weights must be positive integers")
    return np.asarray(w, dtype=np.int64)


def highest_score(x: SymbolSeq, y: SymbolSeq, n: int, weights) -> MatchResult:
    """Maximum summed weight over common substrings of the length-n prefixes.

    Weighted analogue of lcs_oracle: the table carries accumulated weight of
    the maximal run starting at each cell (positive weights make the maximal
    run optimal among runs starting there).
    """
    _check_pair(x, y)
    if not 1 <= n <= min(x.length, y.length):
        raise ValueError(f"n={n} out of range for sequences of lengths "
                         f"{x.length}, {y.length}")
    w = _weight_vector(weights, x.alphabet.size)
    xd, yd = x.data[:n], y.data[:n]
    prev_w = np.zeros(n + 1, dtype=np.int64)
    prev_k = np.zeros(n + 1, dtype=np.int64)
    cur_w = np.zeros(n + 1, dtype=np.int64)
    cur_k = np.zeros(n + 1, dtype=np.int64)
    best, bi, bj, bk = 0, 0, 0, 0
    for i in range(n - 1, -1, -1):
        eq = yd == xd[i]
        np.add(prev_w[1:], w[xd[i]], out=cur_w[:-1])
        np.multiply(cur_w[:-1], eq, out=cur_w[:-1])
        np.add(prev_k[1:], 1, out=cur_k[:-1])
        np.multiply(cur_k[:-1], eq, out=cur_k[:-1])
        rm = int(cur_w.max())
        if rm > 0 and rm >= best:
            best = rm
            bi = i
            bj = int(np.argmax(cur_w == rm))
            bk = int(cur_k[bj])
        prev_w, cur_w = cur_w, prev_w
        prev_k, cur_k = cur_k, prev_k
    return MatchResult(best, (bi, bj, bk) if best else (0, 0, 0))
