"""Shared test utilities: tolerances, random-instance builders, strategies."""

import numpy as np
from hypothesis import strategies as st

from prony.signal_model import Signal


def relerr(a, b):
    """Relative difference scaled against max(1, |a|, |b|)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return float(np.max(np.abs(a - b) / scale))


def random_signal(rng, d, min_gap=0.1, max_gap=2.0, amp_lo=0.1, amp_hi=10.0):
    x0 = rng.uniform(-3.0, 3.0)
    gaps = rng.uniform(min_gap, max_gap, size=d - 1) if d > 1 else np.empty(0)
    nodes = np.concatenate([[x0], x0 + np.cumsum(gaps)]) if d > 1 else np.array([x0])
    amps = rng.uniform(amp_lo, amp_hi, size=d) * rng.choice([-1.0, 1.0], size=d)
    return Signal(amplitudes=amps, nodes=nodes)


@st.composite
def signal_strategy(draw, min_d=1, max_d=5, min_gap=0.1):
    d = draw(st.integers(min_d, max_d))
    x0 = draw(st.floats(-3.0, 3.0, allow_nan=False))
    gaps = draw(
        st.lists(st.floats(min_gap, 2.0, allow_nan=False), min_size=d - 1, max_size=d - 1)
    )
    nodes = np.concatenate([[x0], x0 + np.cumsum(gaps)]) if d > 1 else np.array([x0])
    mags = draw(st.lists(st.floats(0.1, 10.0, allow_nan=False), min_size=d, max_size=d))
    signs = draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=d, max_size=d))
    return Signal(amplitudes=np.array(mags) * np.array(signs), nodes=nodes)
