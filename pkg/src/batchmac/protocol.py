"""Validated MAC/network parameters and the backoff-window law.

Slotted CSMA/CA contention: a station backs off a random number of slots,
senses the channel (CCA), and doubles its backoff window on every busy
assessment until it either transmits or gives up after the last permitted
attempt.  Everything else in the package consumes these records.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence


class BackoffSemantics(enum.Enum):
    """Meaning of a zero backoff draw after a busy CCA."""

    #: a zero draw re-senses the slot that was just found busy
    NAIVE = "naive"
    #: the busy CCA consumes its slot; a zero draw senses the next slot
    CORRECTED = "corrected"


class RetryPolicy(enum.Enum):
    """What a station does once it has transmitted."""

    #: no acknowledgements: a transmitter is finished, collision or not
    NACK_DONE = "nack_done"
    #: a collided station re-enters backoff at the next stage without
    #: resetting any parameter
    COLLISION_CONTINUE = "collision_continue"


FIELD_ORDER = ("be_min", "be_max", "nb_max", "cw", "packet_len", "n_stations")


@dataclass(frozen=True)
class ProtocolParams:
    """MAC and network parameter record.

    ``be_min``/``be_max`` bound the backoff exponent, ``nb_max`` is the
    index of the last permitted CCA attempt (attempts 0..nb_max), ``cw``
    is the number of consecutive clear CCA slots required before
    transmitting, ``packet_len`` is the packet length in slots and
    ``n_stations`` the batch size.  Invalid records raise ValueError at
    construction.
    """

    be_min: int = 3
    be_max: int = 5
    nb_max: int = 4
    cw: int = 1
    packet_len: int = 1
    n_stations: int = 1

    def __post_init__(self) -> None:
        _check(self)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def _check(p: ProtocolParams) -> None:
    for name in FIELD_ORDER:
        value = getattr(p, name)
        _require(isinstance(value, int), f"{name} must be an integer, got {value!r}")
    _require(p.be_min >= 0, f"be_min must be >= 0, got {p.be_min}")
    _require(
        p.be_min <= p.be_max,
        f"be_min must not exceed be_max, got be_min={p.be_min}, be_max={p.be_max}",
    )
    _require(p.be_max <= 15, f"be_max must be <= 15, got {p.be_max}")
    _require(p.nb_max >= 0, f"nb_max must be >= 0, got {p.nb_max}")
    _require(p.cw in (1, 2), f"cw must be 1 or 2, got {p.cw}")
    _require(p.packet_len >= 1, f"packet_len must be >= 1, got {p.packet_len}")
    _require(p.n_stations >= 1, f"n_stations must be >= 1, got {p.n_stations}")


def validate(raw) -> ProtocolParams:
    """Build a validated parameter record.

    Accepts an existing ProtocolParams, a mapping of field names, or a
    sequence ordered (be_min, be_max, nb_max, cw, packet_len, n_stations).
    Raises ValueError naming the first violated field.
    """
    if isinstance(raw, ProtocolParams):
        _check(raw)
        return raw
    if isinstance(raw, Mapping):
        unknown = set(raw) - set(FIELD_ORDER)
        if unknown:
            raise ValueError(f"unknown parameter field(s): {sorted(unknown)}")
        return ProtocolParams(**raw)
    if isinstance(raw, (str, bytes)):
        raise ValueError("cannot build ProtocolParams from a string")
    if isinstance(raw, Sequence):
        values = tuple(raw)
        if len(values) != len(FIELD_ORDER):
            raise ValueError(
                f"expected {len(FIELD_ORDER)} values ordered {FIELD_ORDER}, got {len(values)}"
            )
        return ProtocolParams(*values)
    raise ValueError(f"cannot build ProtocolParams from {type(raw).__name__}")


def window_size(params: ProtocolParams, k: int) -> int:
    """Backoff window at stage k: W_k = 2**min(be_min + k, be_max)."""
    if not 0 <= k <= params.nb_max:
        raise ValueError(f"stage {k} out of range 0..{params.nb_max}")
    return 2 ** min(params.be_min + k, params.be_max)


def window_sizes(params: ProtocolParams) -> tuple[int, ...]:
    """Window sizes for every stage 0..nb_max."""
    return tuple(window_size(params, k) for k in range(params.nb_max + 1))
