"""Piecewise coupling schedules: alternating-hop transport and the
meet-in-the-middle entangling protocol.

A schedule is a list of segments, each either a hold (constant profile) or a
ramp (linear crossfade between two profiles).  Crossfades of duration tau
are centered on the ideal switching instants: every hold gives up tau / 2 to
each adjacent ramp, which turns each coupling pulse into a trapezoid whose
integrated coupling equals that of the ideal rectangular pulse.  The total
duration therefore equals the ideal protocol time for every tau, and each
hop still realizes a complete population transfer to leading order.  With
tau = 0 a schedule contains holds only and the trapezoids become rectangles.

Link ``i`` (1-based) joins sites ``i`` and ``i+1``.  A hold that should move
an atom across link ``i`` activates the parity family of ``i`` (odd links
carry j_odd, even links j_even) and switches the other family off, which
decouples every double well not involved in the hop.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

from .analytic import t_hop, t_interact
from .hamiltonian import CouplingProfile

__all__ = [
    "Segment",
    "Schedule",
    "compile_transport",
    "compile_entangle",
    "profile_at",
    "format_schedule",
    "hold_trajectory",
]


@dataclass(frozen=True)
class Segment:
    label: str
    kind: str
    duration: float
    start: CouplingProfile
    end: CouplingProfile


@dataclass(frozen=True)
class Schedule:
    """Validated sequence of hold and ramp segments on one chain."""

    n_sites: int
    segments: tuple[Segment, ...]

    def __post_init__(self):
        for k, seg in enumerate(self.segments):
            if seg.kind not in ("hold", "ramp"):
                raise ValueError(f"segment {k}: unknown kind {seg.kind!r}")
            if not seg.duration > 0:
                raise ValueError(
                    f"segment {k}: duration must be positive, got {seg.duration}"
                )
            if seg.kind == "hold" and seg.start != seg.end:
                raise ValueError(f"segment {k}: hold profile must be constant")
        # Ramps must join their neighbours continuously; adjacent holds may
        # jump, which is the sudden-switch limit tau = 0 compiles to.
        for k in range(len(self.segments) - 1):
            a, b = self.segments[k], self.segments[k + 1]
            if (a.kind == "ramp" or b.kind == "ramp") and a.end != b.start:
                raise ValueError(
                    f"profile discontinuity between segments {k} and {k + 1}"
                )

    @property
    def total_duration(self) -> float:
        return math.fsum(seg.duration for seg in self.segments)

    def boundaries(self) -> list[float]:
        """Cumulative segment end times (same length as segments)."""
        return list(accumulate(seg.duration for seg in self.segments))


def _hop_profile(link: int, j: float, u: float) -> CouplingProfile:
    """Profile that activates the parity family of 1-based link ``link``."""
    if link % 2 == 1:
        return CouplingProfile(j_odd=j, j_even=0.0, u=u)
    return CouplingProfile(j_odd=0.0, j_even=j, u=u)


def _check_common(n_sites: int, tau: float, j: float) -> None:
    if n_sites < 2:
        raise ValueError(f"need at least 2 sites, got {n_sites}")
    if tau < 0:
        raise ValueError(f"ramp time must be non-negative, got {tau}")
    if j <= 0:
        raise ValueError(f"coupling must be positive, got {j}")


def compile_transport(
    n_sites: int, start_site: int, direction: str, tau: float, j: float
) -> Schedule:
    """Schedule that walks one atom from ``start_site`` to the chain end.

    Moving right ends at site N, moving left at site 1.  Each hop drives the
    link ahead of the atom with an integrated coupling of j * pi / (2 j);
    consecutive hops activate alternating link parities and are joined by
    crossfades of duration ``tau`` that eat tau / 2 out of each neighbouring
    hold, keeping the pulse area and the total duration (n_hops * t_hop)
    independent of ``tau``.
    """
    _check_common(n_sites, tau, j)
    if not 1 <= start_site <= n_sites:
        raise ValueError(f"start site {start_site} outside 1..{n_sites}")
    if direction not in ("left", "right"):
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    step = 1 if direction == "right" else -1
    n_hops = (n_sites - start_site) if direction == "right" else (start_site - 1)
    if n_hops < 1:
        raise ValueError(
            f"no room to move {direction} from site {start_site}: "
            "the trajectory would exit the chain"
        )

    th = t_hop(j)
    links = []
    site = start_site
    for _ in range(n_hops):
        links.append(min(site, site + step))
        site += step

    holds = [
        (f"hop-{k + 1}", th, _hop_profile(link, j, 0.0))
        for k, link in enumerate(links)
    ]
    return Schedule(n_sites=n_sites, segments=_weave(holds, tau))


def _weave(
    holds: list[tuple[str, float, CouplingProfile]], tau: float
) -> tuple[Segment, ...]:
    """Join constant holds with centered crossfades of duration ``tau``.

    Every hold is shortened by tau / 2 per adjacent ramp so that each
    coupling pulse keeps the integrated strength of its ideal rectangular
    shape and the schedule total matches the sum of the ideal durations.
    """
    segments: list[Segment] = []
    last = len(holds) - 1
    for k, (label, ideal, prof) in enumerate(holds):
        trimmed = ideal
        if tau > 0:
            trimmed -= 0.5 * tau * ((k > 0) + (k < last))
        if trimmed <= 0:
            raise ValueError(
                f"crossfade time {tau} leaves hold {label!r} with "
                f"nonpositive duration (ideal {ideal})"
            )
        segments.append(Segment(label, "hold", trimmed, prof, prof))
        if tau > 0 and k < last:
            segments.append(
                Segment(f"ramp-{k + 1}", "ramp", tau, prof, holds[k + 1][2])
            )
    return tuple(segments)


def compile_entangle(n_sites: int, tau: float, j: float, u: float) -> Schedule:
    """Walk two edge atoms together, entangle, and walk them back out.

    Requires even ``n_sites`` with the atoms starting on sites 1 and N:
    every inward hop then moves both atoms simultaneously because the two
    links ahead of them share a parity.  After (N - 2) / 2 inward hops the
    atoms share the central double well, where a hold of ideal duration
    pi U / (8 j^2) runs the exchange gate; the outward half mirrors the
    inward one, so the whole schedule is time-symmetric about the midpoint
    of the interaction hold.  Crossfades follow the same centered-trapezoid
    rule as transport, so the total duration equals the ideal value
    (N - 2) * t_hop + t_interact for every ``tau``.
    """
    _check_common(n_sites, tau, j)
    if n_sites % 2 != 0:
        raise ValueError(
            f"entangling schedule needs an even site count, got {n_sites}"
        )
    if u <= 0:
        raise ValueError(f"interaction must be positive, got u={u}")

    th = t_hop(j)
    ti = t_interact(j, u)
    m = (n_sites - 2) // 2
    inward_links = list(range(1, m + 1))  # left atom; right atom mirrors
    center_link = n_sites // 2

    holds: list[tuple[str, float, CouplingProfile]] = []
    for k, link in enumerate(inward_links):
        holds.append((f"hop-{k + 1}", th, _hop_profile(link, j, u)))
    holds.append(("interact", ti, _hop_profile(center_link, j, u)))
    for r, link in enumerate(reversed(inward_links)):
        holds.append((f"hop-{m + r + 1}", th, _hop_profile(link, j, u)))
    return Schedule(n_sites=n_sites, segments=_weave(holds, tau))


def profile_at(schedule: Schedule, t: float) -> CouplingProfile:
    """Instantaneous profile at time ``t`` from the schedule start.

    Ramps interpolate linearly, so the result is continuous across segment
    boundaries.
    """
    total = schedule.total_duration
    slack = 1e-12 * max(1.0, total)
    if t < -slack or t > total + slack:
        raise ValueError(f"time {t} outside schedule span [0, {total}]")
    t = min(max(t, 0.0), total)
    ends = schedule.boundaries()
    k = min(bisect_right(ends, t), len(schedule.segments) - 1)
    seg = schedule.segments[k]
    t_local = t - (ends[k] - seg.duration)
    if seg.kind == "hold":
        return seg.start
    f = min(max(t_local / seg.duration, 0.0), 1.0)
    return CouplingProfile(
        j_odd=(1 - f) * seg.start.j_odd + f * seg.end.j_odd,
        j_even=(1 - f) * seg.start.j_even + f * seg.end.j_even,
        u=seg.start.u,
        tilt_slope=seg.start.tilt_slope,
    )


def format_schedule(schedule: Schedule) -> str:
    """One line per segment:
    ``label kind duration j_odd_start j_even_start j_odd_end j_even_end``.
    """
    lines = []
    for seg in schedule.segments:
        lines.append(
            f"{seg.label} {seg.kind} {seg.duration:.12g} "
            f"{seg.start.j_odd:.12g} {seg.start.j_even:.12g} "
            f"{seg.end.j_odd:.12g} {seg.end.j_even:.12g}"
        )
    return "\n".join(lines)


def hold_trajectory(schedule: Schedule, start_site: int) -> list[int]:
    """Combinatorial site track of one atom through the hold sequence.

    Each hop hold moves the atom across the single active link adjacent to
    its site; the interaction hold leaves positions unchanged.  Returns the
    site after every hold, starting with ``start_site``.  This is the
    idealized bookkeeping the schedule encodes, used to cross-check that
    compiled schedules deliver atoms to their declared targets.
    """
    if not 1 <= start_site <= schedule.n_sites:
        raise ValueError(f"start site {start_site} outside 1..{schedule.n_sites}")
    track = [start_site]
    site = start_site
    for seg in schedule.segments:
        if seg.kind != "hold" or seg.label == "interact":
            continue
        active = []
        for link in (site - 1, site):
            if not 1 <= link <= schedule.n_sites - 1:
                continue
            coupling = seg.start.j_odd if link % 2 == 1 else seg.start.j_even
            if coupling > 0:
                active.append(link)
        if len(active) != 1:
            raise ValueError(
                f"hold {seg.label!r} does not move site {site} unambiguously"
            )
        site = active[0] + 1 if active[0] == site else active[0]
        track.append(site)
    return track
