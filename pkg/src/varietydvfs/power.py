"""Server power and per-slot energy accounting.

Busy power is affine in CPU utilization between idle and full-load power;
full-load power depends on frequency through a power law anchored at a
reference frequency, or through a measured table.
"""
from __future__ import annotations

import bisect
import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidParameterError, OutOfRangeError

GHZ = 1e9


class EnergyMode(enum.Enum):
    # slot duration x slot-average power
    SLOT_AVERAGE = "slot-average"
    # busy time x busy power, no idle charge
    BUSY_TIME_LITERAL = "busy-literal"

    @classmethod
    def parse(cls, value) -> "EnergyMode":
        if isinstance(value, cls):
            return value
        aliases = {
            "slot-average": cls.SLOT_AVERAGE,
            "slotaverage": cls.SLOT_AVERAGE,
            "slot_average": cls.SLOT_AVERAGE,
            "busy-literal": cls.BUSY_TIME_LITERAL,
            "busytimeliteral": cls.BUSY_TIME_LITERAL,
            "busy_time_literal": cls.BUSY_TIME_LITERAL,
            "busy-time-literal": cls.BUSY_TIME_LITERAL,
        }
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise InvalidParameterError(f"unknown energy mode {value!r}") from None


@dataclass(frozen=True)
class PowerCurve:
    p_idle: float = 100.0
    anchor_freq: float = 2.8
    p_full_at_anchor: float = 200.0
    exponent_alpha: float = 3.0
    table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if not self.p_idle >= 0:
            raise InvalidParameterError("p_idle must be >= 0")
        if not self.p_full_at_anchor > self.p_idle:
            raise InvalidParameterError("p_full_at_anchor must exceed p_idle")
        if not self.anchor_freq > 0:
            raise InvalidParameterError("anchor_freq must be > 0")
        if not self.exponent_alpha >= 0:
            raise InvalidParameterError("exponent_alpha must be >= 0")
        if self.table is not None:
            table = tuple((float(f), float(p)) for f, p in self.table)
            if not table:
                raise InvalidParameterError("power table is empty")
            freqs = [f for f, _ in table]
            if any(b <= a for a, b in zip(freqs, freqs[1:])) or freqs[0] <= 0:
                raise InvalidParameterError("power table frequencies must be positive and strictly ascending")
            watts = [p for _, p in table]
            if any(b < a for a, b in zip(watts, watts[1:])):
                raise InvalidParameterError("power table must be non-decreasing in frequency")
            if any(p < self.p_idle for p in watts):
                raise InvalidParameterError("power table entries must be >= p_idle")
            object.__setattr__(self, "table", table)


@dataclass(frozen=True)
class ServerModel:
    frequencies: tuple[float, ...] = (1.6, 2.8)
    curve: PowerCurve = PowerCurve()
    u_full: float = 0.68

    def __post_init__(self):
        freqs = tuple(float(f) for f in self.frequencies)
        if not freqs:
            raise InvalidParameterError("server needs at least one frequency")
        if freqs[0] <= 0 or any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise InvalidParameterError("frequencies must be positive and strictly ascending")
        if not 0 < self.u_full <= 1:
            raise InvalidParameterError("u_full must lie in (0, 1]")
        object.__setattr__(self, "frequencies", freqs)

    @property
    def f_max(self) -> float:
        return self.frequencies[-1]

    @property
    def p_idle(self) -> float:
        return self.curve.p_idle


def load_power_table(path) -> tuple[tuple[float, float], ...]:
    """Read a two-column CSV of (GHz, watts); a non-numeric first row is a header."""
    rows = []
    with open(Path(path), newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if i == 0:
                    continue
                raise InvalidParameterError(f"{path}: bad power table row {i + 1}: {row}") from None
    return tuple(rows)


def p_full_at(curve: PowerCurve, f: float) -> float:
    """Full-load power at frequency ``f`` (GHz)."""
    if not f > 0:
        raise InvalidParameterError(f"frequency must be > 0, got {f}")
    if curve.table is None:
        return curve.p_idle + (curve.p_full_at_anchor - curve.p_idle) * (f / curve.anchor_freq) ** curve.exponent_alpha
    freqs = [row[0] for row in curve.table]
    if f < freqs[0] or f > freqs[-1]:
        raise OutOfRangeError(f"{f} GHz outside power table range [{freqs[0]}, {freqs[-1]}]")
    i = bisect.bisect_left(freqs, f)
    if freqs[i] == f:
        return curve.table[i][1]
    (f0, p0), (f1, p1) = curve.table[i - 1], curve.table[i]
    return p0 + (p1 - p0) * (f - f0) / (f1 - f0)


def utilize_factor(pt: float, ts: float) -> float:
    """Busy fraction of a slot. Overruns come back as values above 1."""
    if not ts > 0:
        raise InvalidParameterError(f"slot duration must be > 0, got {ts}")
    if pt < 0:
        raise InvalidParameterError(f"processing time must be >= 0, got {pt}")
    return pt / ts


def cpu_utilization(uf: float, u_full: float) -> float:
    if uf < 0:
        raise InvalidParameterError("utilize factor must be >= 0")
    if not 0 < u_full <= 1:
        raise InvalidParameterError("u_full must lie in (0, 1]")
    return uf * u_full


def busy_power(server: ServerModel, f: float, u_cpu: float) -> float:
    if not 0 <= u_cpu <= 1:
        raise InvalidParameterError(f"cpu utilization must lie in [0, 1], got {u_cpu}")
    return (p_full_at(server.curve, f) - server.p_idle) * u_cpu + server.p_idle


def dynamic_energy(server: ServerModel, f: float, pt: float) -> float:
    """Frequency-dependent part of a slot's energy: ``pt * (P_full(f) - P_idle) * u_full``."""
    return pt * (p_full_at(server.curve, f) - server.p_idle) * server.u_full


def slot_energy(server: ServerModel, f: float, pt: float, ts: float, mode=EnergyMode.SLOT_AVERAGE) -> float:
    """Energy charged for one slot.

    SLOT_AVERAGE equals ``ts * busy_power(f, pt/ts * u_full)`` while the work
    fits the slot; an overrun keeps drawing idle power until it ends, so the
    idle term is ``max(pt, ts) * P_idle``. BUSY_TIME_LITERAL is
    ``pt * busy_power(f, u_full)``.
    """
    mode = EnergyMode.parse(mode)
    utilize_factor(pt, ts)
    pf = p_full_at(server.curve, f)
    if mode is EnergyMode.SLOT_AVERAGE:
        return pt * (pf - server.p_idle) * server.u_full + max(pt, ts) * server.p_idle
    return pt * ((pf - server.p_idle) * server.u_full + server.p_idle)


def total_energy(per_slot_energies) -> float:
    values = list(per_slot_energies)
    if any(e < 0 for e in values):
        raise InvalidParameterError("slot energies must be >= 0")
    return math.fsum(values)
