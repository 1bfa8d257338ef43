"""Rotary position embedding in its exact paired-rotation form.

A head vector of even dimension d is read as d/2 complex coordinates
(x[2k] + i*x[2k+1]).  Encoding position m multiplies coordinate k by
exp(i * m * theta_k) with theta_k = base**(-2k/d), so the attention score
between two encoded vectors depends only on their relative distance.

Everything here is float64 and pure; `rope_score_oracle` recomputes the
score through explicit complex arithmetic and exists to cross-check the
real-valued kernel in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_POSITION = 2**53  # largest position exactly representable in float64


@dataclass(frozen=True)
class RotaryConfig:
    """Head dimension and rotation frequencies for one attention head."""

    head_dim: int
    base: float = 10000.0

    def __post_init__(self):
        if self.head_dim < 2 or self.head_dim % 2 != 0:
            raise ValueError(f"head_dim must be an even integer >= 2, got {self.head_dim}")
        if not self.base > 0:
            raise ValueError(f"base must be positive, got {self.base}")

    @property
    def num_pairs(self) -> int:
        return self.head_dim // 2

    @cached_property
    def theta(self) -> np.ndarray:
        """Per-pair angular frequencies, theta[0] == 1.0 exactly."""
        k = np.arange(self.num_pairs, dtype=np.float64)
        freqs = self.base ** (-2.0 * k / self.head_dim)
        freqs.setflags(write=False)
        return freqs


def as_head_vector(x, cfg: RotaryConfig | None = None) -> np.ndarray:
    """Validate an embedding vector: 1-d, finite, matching head_dim if given."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    if arr.size % 2 != 0 or arr.size < 2:
        raise ValueError(f"vector length must be even and >= 2, got {arr.size}")
    if cfg is not None and arr.size != cfg.head_dim:
        raise ValueError(f"vector length {arr.size} does not match head_dim {cfg.head_dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector components must be finite")
    return arr


def _check_position(m) -> float:
    if m < 0:
        raise ValueError(f"position must be non-negative, got {m}")
    if m > MAX_POSITION:
        raise ValueError(f"position {m} exceeds exactly-representable range 2**53")
    return float(m)


def rotate_pairs(x: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Rotate adjacent component pairs of x by the given per-pair radians.

    Works on any array whose last axis holds the d components; `angles`
    must broadcast against the leading axes with last axis d/2.  Each
    pair's magnitude is preserved (every rotation is an isometry).
    """
    x = np.asarray(x, dtype=np.float64)
    angles = np.asarray(angles, dtype=np.float64)
    if x.shape[-1] % 2 != 0:
        raise ValueError(f"last axis must have even length, got {x.shape[-1]}")
    if angles.shape[-1] != x.shape[-1] // 2:
        raise ValueError(
            f"need {x.shape[-1] // 2} angles for {x.shape[-1]} components, "
            f"got {angles.shape[-1]}"
        )
    cos = np.cos(angles)
    sin = np.sin(angles)
    even = x[..., 0::2]
    odd = x[..., 1::2]
    out = np.empty(np.broadcast_shapes(x.shape, angles.shape[:-1] + (x.shape[-1],)))
    out[..., 0::2] = even * cos - odd * sin
    out[..., 1::2] = even * sin + odd * cos
    return out


def apply_rope(x, m, cfg: RotaryConfig) -> np.ndarray:
    """Encode position m into x by rotating pair k through m * theta_k."""
    vec = as_head_vector(x, cfg)
    pos = _check_position(m)
    return rotate_pairs(vec, pos * cfg.theta)


def rope_score(q, k, m, n, cfg: RotaryConfig) -> float:
    """Attention score of an encoded query/key pair; depends only on m - n."""
    q_enc = apply_rope(q, m, cfg)
    k_enc = apply_rope(k, n, cfg)
    return float(q_enc @ k_enc)


def rope_score_oracle(q, k, m, n, cfg: RotaryConfig) -> float:
    """Same score via explicit complex products; test cross-check only.

    Sums the real parts of (q[2j] + i*q[2j+1]) * (k[2j] - i*k[2j+1]) *
    exp(i * (m - n) * theta_j), a structurally different route from the
    rotate-then-dot kernel.
    """
    q = as_head_vector(q, cfg)
    k = as_head_vector(k, cfg)
    _check_position(m)
    _check_position(n)
    qc = q[0::2] + 1j * q[1::2]
    kc = k[0::2] - 1j * k[1::2]
    phase = np.exp(1j * (float(m) - float(n)) * cfg.theta)
    return float(np.sum(qc * kc * phase).real)
