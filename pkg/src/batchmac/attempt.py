"""Attempt-probability profiles built from backoff-window convolutions.

Stage k of the binary exponential backoff draws uniformly from
{0, ..., W_k - 1}.  d_k is the distribution of the slot on which the k-th
CCA lands given that every earlier CCA found the channel busy; it is the
convolution of the per-stage draws.  The per-slot attempt probability
a(t) sums the stages and is independent of the channel by construction.

Two re-sensing semantics are supported:

* naive      -- a zero draw re-senses the slot that was just sensed, so
                stage pmfs chain with no offset;
* corrected  -- the busy CCA consumes its slot and the new draw counts
                from the next one, inserting a deterministic one-slot
                shift per retry (d_k is the naive d_k shifted by k).

Under naive semantics a(t) is an expected CCA count rather than a
probability and can exceed 1 for degenerate windows (e.g. be_min=0);
profile construction rejects such configurations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .protocol import BackoffSemantics, ProtocolParams, window_size, window_sizes

#: tolerance for a pmf to be accepted as normalized
MASS_TOL = 1e-12

#: tolerance on the total attempt mass sum(a) == nb_max + 1
TOTAL_ATTEMPT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function over slot offsets 0..len-1.

    Canonical form: trailing zeros are trimmed at construction so the
    last entry is nonzero and ``support_max`` is ``len(probs) - 1``.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.probs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("pmf must be a non-empty 1-d array")
        if np.any(arr < 0.0):
            raise ValueError("pmf entries must be non-negative")
        nonzero = np.flatnonzero(arr)
        if nonzero.size == 0:
            raise ValueError("pmf must carry positive mass")
        arr = np.array(arr[: nonzero[-1] + 1])
        total = float(arr.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"pmf mass {total!r} deviates from 1 by more than {MASS_TOL}")
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    def __len__(self) -> int:
        return self.probs.size

    @property
    def support_max(self) -> int:
        """Largest offset carrying positive mass."""
        return self.probs.size - 1


def delta(offset: int) -> Pmf:
    """Unit mass at a single slot offset."""
    if offset < 0:
        raise ValueError(f"offset must be >= 0, got {offset}")
    probs = np.zeros(offset + 1)
    probs[offset] = 1.0
    return Pmf(probs)


def shifted(p: Pmf, slots: int) -> Pmf:
    """The pmf delayed by a deterministic number of slots."""
    if slots < 0:
        raise ValueError(f"shift must be >= 0, got {slots}")
    if slots == 0:
        return p
    return Pmf(np.concatenate([np.zeros(slots), p.probs]))


def convolve(p: Pmf, q: Pmf) -> Pmf:
    """Distribution of the sum of two independent offsets.

    Direct summation (numpy's convolve); support length is
    len(p) + len(q) - 1 and mass is preserved.
    """
    return Pmf(np.convolve(p.probs, q.probs))


def uniform_backoff_pmf(params: ProtocolParams, k: int) -> Pmf:
    """Uniform draw over {0, ..., W_k - 1} for backoff stage k."""
    w = window_size(params, k)
    return Pmf(np.full(w, 1.0 / w))


@dataclass(frozen=True, eq=False)
class AttemptProfile:
    """Per-slot attempt probabilities and their stage components.

    ``stage_pmfs[k]`` is d_k, ``a[t]`` the summed attempt probability and
    ``t_max`` the largest slot with a(t) > 0 (the support maximum of the
    last stage).
    """

    params: ProtocolParams
    semantics: BackoffSemantics
    stage_pmfs: tuple[Pmf, ...]
    a: np.ndarray
    t_max: int

    @property
    def n_stages(self) -> int:
        return len(self.stage_pmfs)

    def a_at(self, t: int) -> float:
        """a(t), zero beyond the reachable horizon."""
        if 0 <= t <= self.t_max:
            return float(self.a[t])
        return 0.0

    def d_last_at(self, t: int) -> float:
        """d_{nb_max}(t), zero beyond the reachable horizon."""
        last = self.stage_pmfs[-1]
        if 0 <= t <= last.support_max:
            return float(last.probs[t])
        return 0.0


def max_reach_slot(params: ProtocolParams, semantics: BackoffSemantics) -> int:
    """Largest slot a station's CCAs can reach.

    Naive: sum of (W_k - 1) over all stages.  Corrected: the same plus
    one deterministic slot per retry, i.e. plus nb_max.
    """
    base = sum(w - 1 for w in window_sizes(params))
    if semantics is BackoffSemantics.CORRECTED:
        return base + params.nb_max
    return base


def corrected_reach_closed_form(params: ProtocolParams) -> int:
    """Closed form for the corrected reach:

        (2 + nb_max - (be_max - be_min)) * 2**be_max - 2**be_min - 1

    Matches the convolution support maximum whenever the window cap is
    reached or missed by one stage (nb_max >= be_max - be_min - 1); below
    that regime the geometric series never saturates and the closed form
    undercounts, so prefer :func:`max_reach_slot`.
    """
    spread = params.be_max - params.be_min
    return (2 + params.nb_max - spread) * 2**params.be_max - 2**params.be_min - 1


def attempt_profile(
    params: ProtocolParams,
    semantics: BackoffSemantics,
    max_slots: int = 1_000_000,
) -> AttemptProfile:
    """Build the full attempt profile for one parameter set.

    Raises ValueError if the reachable horizon exceeds ``max_slots`` or
    if a(t) leaves [0, 1] (possible only under naive semantics with
    degenerate windows).
    """
    reach = max_reach_slot(params, semantics)
    if reach > max_slots:
        raise ValueError(
            f"reachable horizon {reach} exceeds the {max_slots}-slot cap; "
            "lower nb_max/be_max or raise max_slots"
        )

    stage_pmfs = [uniform_backoff_pmf(params, 0)]
    for k in range(1, params.nb_max + 1):
        stage_pmfs.append(convolve(stage_pmfs[-1], uniform_backoff_pmf(params, k)))
    if semantics is BackoffSemantics.CORRECTED:
        stage_pmfs = [shifted(d, k) for k, d in enumerate(stage_pmfs)]

    last = stage_pmfs[-1]
    if last.support_max != reach:
        raise RuntimeError(
            f"stage support {last.support_max} disagrees with reach {reach}"
        )

    a = np.zeros(reach + 1)
    for d in stage_pmfs:
        a[: len(d)] += d.probs
    if float(a.max()) > 1.0 + MASS_TOL:
        raise ValueError(
            f"a(t) peaks at {float(a.max()):.6g} > 1 under {semantics.value} semantics; "
            "the zero-draw re-sensing makes this configuration inconsistent"
        )
    total = float(a.sum())
    expected = params.nb_max + 1
    if abs(total - expected) > TOTAL_ATTEMPT_TOL:
        raise RuntimeError(f"attempt mass {total} deviates from {expected}")
    a.flags.writeable = False

    return AttemptProfile(
        params=params,
        semantics=semantics,
        stage_pmfs=tuple(stage_pmfs),
        a=a,
        t_max=reach,
    )
