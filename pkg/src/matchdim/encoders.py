"""Symbolic encoders: identity, zero-inflating contamination, and weight stretch.

An encoder maps a raw symbol sequence to an encoded one. Each encoder also
reports how far into the raw sequence one must look to determine a length-n
encoded prefix (`block_span`), and the exact raw prefix consumed for a given
input (`required_input_length`).

- identity: passes symbols through unchanged.
- zero inflation: multiplies symbol i by an i.i.d. 0/1 mask bit with
  P(mask=1) = 1 - epsilon, derived deterministically from mask_seed. Symbol 0
  is the contamination target, so alphabets must contain 0. One encoder
  instance (one mask stream) is shared by both sequences of a matched pair;
  use distinct mask seeds for independent-mask experiments.
- stretch: symbol a is repeated weight(a) times, so matches of the encoded
  pair accumulate weight like scored matches of the raw pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .sources import Alphabet, SymbolSeq


class InputExhausted(ValueError):
    """Raw input too short to produce the requested encoded length."""


@dataclass(frozen=True)
class IdentityEncoder:
    kind = "identity"

    def output_alphabet(self, input_alphabet: Alphabet) -> Alphabet:
        return input_alphabet

    def encode(self, seq: SymbolSeq, n_out: int) -> SymbolSeq:
        if seq.length < n_out:
            raise InputExhausted(
                f"input exhausted: need {n_out} symbols, input has {seq.length}")
        return seq.prefix(n_out)

    def block_span(self, n: int) -> int:
        return n

    def required_input_length(self, n_out: int, seq: SymbolSeq) -> int:
        if seq.length < n_out:
            raise InputExhausted(
                f"input exhausted: need {n_out} symbols, input has {seq.length}")
        return n_out


@dataclass(frozen=True)
class ZeroInflation:
    """Per-position contamination z_i -> mask_i * z_i with P(mask=1)=1-epsilon."""

    epsilon: float
    mask_seed: int

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in [0, 1), got {self.epsilon}")

    kind = "zero_inflation"

    def output_alphabet(self, input_alphabet: Alphabet) -> Alphabet:
        return input_alphabet

    def mask(self, n: int) -> np.ndarray:
        """First n mask bits (0/1), deterministic in mask_seed."""
        rng = np.random.default_rng(self.mask_seed)
        return (rng.random(n) < 1.0 - self.epsilon).astype(np.int64)

    def encode(self, seq: SymbolSeq, n_out: int) -> SymbolSeq:
        if seq.length < n_out:
            raise InputExhausted(
                f"input exhausted: need {n_out} symbols, input has {seq.length}")
        return SymbolSeq(seq.alphabet, seq.data[:n_out] * self.mask(n_out))

    def block_span(self, n: int) -> int:
        return n

    def required_input_length(self, n_out: int, seq: SymbolSeq) -> int:
        if seq.length < n_out:
            raise InputExhausted(
                f"input exhausted: need {n_out} symbols, input has {seq.length}")
        return n_out


@dataclass(frozen=True)
class StretchEncoder:
    """Repeat symbol a weight(a) times; weights are positive integers per symbol."""

    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(v) for v in self.weights)
        if len(w) == 0 or any(v < 1 for v in w):
            raise ValueError("weights must be positive integers for every symbol")
        object.__setattr__(self, "weights", w)

    kind = "stretch"

    @property
    def v_min(self) -> int:
        return min(self.weights)

    @property
    def v_max(self) -> int:
        return max(self.weights)

    @property
    def weights_gcd(self) -> int:
        return math.gcd(*self.weights) if len(self.weights) > 1 else self.weights[0]

    def output_alphabet(self, input_alphabet: Alphabet) -> Alphabet:
        if input_alphabet.size > len(self.weights):
            raise ValueError("weights do not cover the input alphabet")
        return input_alphabet

    def _weight_array(self, seq: SymbolSeq) -> np.ndarray:
        if int(seq.data.max(initial=0)) >= len(self.weights):
            raise ValueError("weights do not cover the input alphabet")
        return np.asarray(self.weights, dtype=np.int64)[seq.data]

    def encode(self, seq: SymbolSeq, n_out: int) -> SymbolSeq:
        w = self._weight_array(seq)
        cum = np.cumsum(w)
        total = int(cum[-1]) if cum.size else 0
        if total < n_out:
            raise InputExhausted(
                f"input exhausted: need an encoded image of length {n_out}, "
                f"input of length {seq.length} stretches to only {total}")
        m = int(np.searchsorted(cum, n_out, side="left")) + 1
        out = np.repeat(seq.data[:m], w[:m])[:n_out]
        return SymbolSeq(seq.alphabet, out)

    def block_span(self, n: int) -> int:
        # ceil(n / v_min): smallest raw prefix guaranteed to cover n encoded symbols
        return -(-n // self.v_min)

    def required_input_length(self, n_out: int, seq: SymbolSeq) -> int:
        w = self._weight_array(seq)
        cum = np.cumsum(w)
        total = int(cum[-1]) if cum.size else 0
        if total < n_out:
            raise InputExhausted(
                f"input exhausted: need an encoded image of length {n_out}, "
                f"input of length {seq.length} stretches to only {total}")
        return int(np.searchsorted(cum, n_out, side="left")) + 1

    def image_length(self, seq: SymbolSeq, n_raw: int) -> int:
        """Exact encoded length of the first n_raw input symbols."""
        if n_raw > seq.length:
            raise ValueError(f"n_raw={n_raw} exceeds input length {seq.length}")
        return int(self._weight_array(seq.prefix(n_raw)).sum())


Encoder = Union[IdentityEncoder, ZeroInflation, StretchEncoder]


def encode(encoder: Encoder, seq: SymbolSeq, n_out: int) -> SymbolSeq:
    """First n_out symbols of the encoded image of seq."""
    return encoder.encode(seq, n_out)


def block_span(encoder: Encoder, n: int) -> int:
    """Raw prefix length sufficient to determine any length-n encoded block."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return encoder.block_span(n)


def required_input_length(encoder: Encoder, n_out: int, seq: SymbolSeq) -> int:
    """Exact raw prefix length consumed to emit n_out encoded symbols."""
    return encoder.required_input_length(n_out, seq)
