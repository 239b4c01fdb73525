"""Sharp-interface membranes and their limit energy.

A :class:`LimitMembrane` is a piecewise-smooth generating curve: an ordered
list of smooth segments carrying a phase label +-1, separated either by
junctions at positive height (kinks and/or interfaces) or by horizontal
gaps on the axis of revolution.  The limit energy is a bulk Helfrich
integral over the smooth pieces plus line terms

    2 pi * sum over junctions of (sigma + sigma_hat * |jump angle|) * y
    + 2 pi * sigma_hat * (total axis length).

Kinks located on the axis carry no line term and are not represented.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .energies import EnergyBreakdown
from .errors import EmptyResult
from .geometry import (
    PERP_TOL,
    Curve,
    build_curve,
    curvatures,
    measures,
    trapezoid_factors,
)
from .materials import MaterialModel

_AXIS_TOL = 1e-9
_TOUCH_TOL = 1e-7
_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class MembraneSegment:
    """One smooth piece of the generating curve with its phase label."""

    nodes: np.ndarray
    phase: int

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.nodes, axis=0), axis=1)))

    def as_curve(self) -> Curve:
        # arclength parametrisation: param_length equals the polyline length
        return build_curve(self.nodes, param_length=self.length)


@dataclass(frozen=True)
class Kink:
    """Junction record: tangent jump and/or phase jump at height y > 0."""

    position: float            # cumulative arclength along the membrane
    height: float
    jump_angle: float          # |[gamma']| in [0, pi]; 0 for a pure interface
    is_proper_interface: bool
    segment_index: int = -1    # segment to the left of the junction


@dataclass(frozen=True)
class LimitMembrane:
    segments: tuple
    kinks: tuple
    axis_segments: tuple       # lengths of {y = 0} pieces, in curve order
    speed: float = 1.0
    axis_after: tuple = ()     # segment index each axis piece follows


def _end_tangent(nodes: np.ndarray, at_start: bool) -> np.ndarray:
    chords = np.linalg.norm(np.diff(nodes, axis=0), axis=1)
    s = np.concatenate(([0.0], np.cumsum(chords)))
    s = np.maximum.accumulate(s + 1e-15 * np.arange(len(s)))
    interp = PchipInterpolator(s, nodes, axis=0)
    tang = interp.derivative()(s[0] if at_start else s[-1])
    return tang / max(np.linalg.norm(tang), 1e-300)


def _jump_angle(t_left: np.ndarray, t_right: np.ndarray) -> float:
    dot = float(np.clip(np.dot(t_left, t_right), -1.0, 1.0))
    return float(np.arccos(dot))


def build_membrane(segments, jump_angles: dict | None = None, speed: float = 1.0) -> LimitMembrane:
    """Assemble a membrane from ordered ``(points, phase)`` pairs.

    Consecutive segments must either touch (a junction; its jump angle is
    measured from the one-sided tangents unless overridden through
    ``jump_angles[junction_index]``) or both end on the axis, in which case
    the x-offset becomes an axis segment.
    """
    segs = [MembraneSegment(np.asarray(pts, dtype=float), int(ph)) for pts, ph in segments]
    if not segs:
        return LimitMembrane(segments=(), kinks=(), axis_segments=(), speed=speed)
    scale = max(1.0, max(float(np.max(np.abs(s.nodes))) for s in segs))
    kinks = []
    axis_lengths = []
    axis_after = []
    pos = segs[0].length
    for i in range(len(segs) - 1):
        left, right = segs[i], segs[i + 1]
        p_end = left.nodes[-1]
        p_start = right.nodes[0]
        gap = float(np.linalg.norm(p_end - p_start))
        if gap < _TOUCH_TOL * scale:
            if p_end[1] > _AXIS_TOL * scale:
                angle = _jump_angle(_end_tangent(left.nodes, False),
                                    _end_tangent(right.nodes, True))
                if jump_angles and i in jump_angles:
                    angle = float(jump_angles[i])
                proper = left.phase != right.phase
                if angle > _ANGLE_TOL or proper:
                    kinks.append(Kink(position=pos, height=float(p_end[1]),
                                      jump_angle=angle, is_proper_interface=proper,
                                      segment_index=i))
            # touching on the axis: no line term, kinks there are not in S
        else:
            if p_end[1] > _AXIS_TOL * scale or p_start[1] > _AXIS_TOL * scale:
                raise ValueError(f"segments {i} and {i + 1} neither touch nor meet the axis")
            if p_start[0] < p_end[0] - _TOUCH_TOL * scale:
                raise ValueError("axis gap would run backwards (x must be nondecreasing)")
            axis_lengths.append(float(p_start[0] - p_end[0]))
            axis_after.append(i)
            pos += axis_lengths[-1]
        pos += right.length
    return LimitMembrane(segments=tuple(segs), kinks=tuple(kinks),
                         axis_segments=tuple(axis_lengths), speed=float(speed),
                         axis_after=tuple(axis_after))


def recomputed_kink_angles(mem: LimitMembrane) -> np.ndarray:
    """Jump angles measured from the segment end tangents (consistency check
    against the stored values, which may come from digitised geometry)."""
    out = []
    for k in mem.kinks:
        left = mem.segments[k.segment_index]
        right = mem.segments[k.segment_index + 1]
        out.append(_jump_angle(_end_tangent(left.nodes, False),
                               _end_tangent(right.nodes, True)))
    return np.asarray(out)


def _segment_quadrature(seg: MembraneSegment, m: MaterialModel) -> float:
    if seg.nodes.shape[0] < 4:
        return 0.0
    c = seg.as_curve()
    cf = curvatures(c)
    w = measures(c).weights.area_w
    u = float(seg.phase)
    dens = m.k(u) * (cf.mean - m.hs(u)) ** 2 + m.k_gauss(u) * cf.gauss
    return float(np.sum(w * dens))


def limit_helfrich(mem: LimitMembrane, m: MaterialModel) -> float:
    """Bulk bending energy over the smooth pieces; junctions and axis pieces
    carry no bulk term."""
    return sum(_segment_quadrature(seg, m) for seg in mem.segments)


def _line_tension(m: MaterialModel, kink: Kink, mem: LimitMembrane) -> float:
    if kink.is_proper_interface:
        return m.sigma_plus + m.sigma_minus
    phase = mem.segments[kink.segment_index].phase if mem.segments else 1
    return 2.0 * (m.sigma_plus if phase > 0 else m.sigma_minus)


def limit_interface(mem: LimitMembrane, m: MaterialModel) -> float:
    """Line energy of junctions and axis pieces.

    Ghost interfaces (kinks without phase jump) contribute exactly like
    proper ones for symmetric wells; for asymmetric wells the line tension
    becomes 2 sigma+ or 2 sigma- depending on the surrounding phase.
    """
    total = 0.0
    for k in mem.kinks:
        total += 2.0 * np.pi * (_line_tension(m, k, mem)
                                + m.sigma_hat * k.jump_angle) * k.height
    total += 2.0 * np.pi * m.sigma_hat * sum(mem.axis_segments)
    return float(total)


def membrane_measures(mem: LimitMembrane) -> tuple[float, float, float, float]:
    """(length, area, phase integral, enclosed volume) of a membrane."""
    length = sum(seg.length for seg in mem.segments) + sum(mem.axis_segments)
    area = 0.0
    phase_int = 0.0
    volume = 0.0
    for seg in mem.segments:
        if seg.nodes.shape[0] < 2:
            continue
        c = seg.as_curve()
        ms = measures(c)
        area += ms.area
        phase_int += seg.phase * ms.area
        volume += ms.enclosed_volume
    return float(length), float(area), float(phase_int), float(volume)


def total_limit_energy(mem: LimitMembrane, m: MaterialModel) -> EnergyBreakdown:
    """Breakdown of the limit energy.

    The sigma part of the line energy is split evenly between the gradient
    and well slots (its diffuse origin is the Modica-Mortola equipartition),
    while the sigma_hat part (kinks and axis pieces) is reported as bending,
    where it originates.
    """
    hel = limit_helfrich(mem, m)
    sigma_part = sum(2.0 * np.pi * _line_tension(m, k, mem) * k.height for k in mem.kinks)
    hat_part = sum(2.0 * np.pi * m.sigma_hat * k.jump_angle * k.height for k in mem.kinks)
    hat_part += 2.0 * np.pi * m.sigma_hat * sum(mem.axis_segments)
    _, area, phase_int, volume = membrane_measures(mem)
    return EnergyBreakdown(
        variant="limit",
        helfrich=hel,
        interface_gradient=0.5 * sigma_part,
        interface_well=0.5 * sigma_part,
        interface_bending=float(hat_part),
        area=area,
        phase_integral=phase_int,
        volume=volume,
    )


def _components(mem: LimitMembrane):
    """Runs of segment indices joined without axis gaps."""
    breaks = set(mem.axis_after)
    comps = []
    current = []
    for i in range(len(mem.segments)):
        current.append(i)
        if i in breaks:
            comps.append(current)
            current = []
    if current:
        comps.append(current)
    return comps


def _end_is_perpendicular(seg: MembraneSegment, at_start: bool) -> bool:
    node = seg.nodes[0] if at_start else seg.nodes[-1]
    scale = max(1.0, float(np.max(np.abs(seg.nodes))))
    if node[1] > 1e-6 * scale:
        return False
    tang = _end_tangent(seg.nodes, at_start)
    return abs(tang[0]) <= PERP_TOL


def _chop_end(seg: MembraneSegment, delta: float, at_start: bool):
    """Replace the first/last ``delta`` of arclength by a vertical drop to
    the axis (Lemma-4.7 style end surgery).  Returns (vertical, trimmed)."""
    nodes = seg.nodes
    chords = np.linalg.norm(np.diff(nodes, axis=0), axis=1)
    s = np.concatenate(([0.0], np.cumsum(chords)))
    total = s[-1]
    cut = delta if at_start else total - delta
    idx = int(np.searchsorted(s, cut))
    idx = min(max(idx, 2), len(s) - 3)
    if at_start:
        trimmed = nodes[idx:]
        anchor = trimmed[0]
    else:
        trimmed = nodes[:idx + 1]
        anchor = trimmed[-1]
    n_v = max(int(np.ceil(anchor[1] / max(delta / 8.0, 1e-12))), 3)
    ys = np.linspace(0.0, anchor[1], n_v + 1)
    vertical = np.column_stack([np.full(n_v + 1, anchor[0]), ys])
    if not at_start:
        vertical = vertical[::-1]
    return vertical, trimmed


@dataclass(frozen=True)
class SimplifyReport:
    removed_components: int
    removed_length: float
    energy_before: float
    energy_after: float
    area_drift_before_repair: float
    phase_drift: float


def simplify_membrane(mem: LimitMembrane, delta: float, m: MaterialModel | None = None):
    """Approximate a membrane by a simple one.

    Components shorter than ``delta`` are replaced by axis segments; ends of
    the remaining components that do not already meet the axis
    perpendicularly are replaced by vertical drops.  The total area is then
    restored exactly by a compactly supported bump on the longest segment.

    Returns ``(membrane, report)``; raises ``EmptyResult`` if nothing
    survives.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    from .materials import make_default_model
    m = m or make_default_model()
    energy_before = total_limit_energy(mem, m).total
    _, area_before, phase_before, _ = membrane_measures(mem)

    comps = _components(mem)
    removed = 0
    removed_length = 0.0
    pieces = []  # list of ("segment", nodes, phase)
    for comp in comps:
        length = sum(mem.segments[i].length for i in comp)
        if length < delta:
            removed += 1
            removed_length += length
            continue  # the axis gap replacing it is implied by the x offsets
        first, last = comp[0], comp[-1]
        for i in comp:
            seg = mem.segments[i]
            nodes = seg.nodes
            if i == first and not _end_is_perpendicular(seg, True):
                vert, nodes = _chop_end(MembraneSegment(nodes, seg.phase), delta, True)
                pieces.append((vert, seg.phase))
            if i == last and not _end_is_perpendicular(MembraneSegment(nodes, seg.phase), False):
                vert, nodes = _chop_end(MembraneSegment(nodes, seg.phase), delta, False)
                pieces.append((nodes, seg.phase))
                pieces.append((vert, seg.phase))
            else:
                pieces.append((nodes, seg.phase))
    if not pieces:
        raise EmptyResult("every component is shorter than delta")

    out = build_membrane(pieces, speed=mem.speed)
    _, area_now, phase_now, _ = membrane_measures(out)
    drift = area_now - area_before
    out = _repair_area(out, area_before)
    energy_after = total_limit_energy(out, m).total
    report = SimplifyReport(
        removed_components=removed,
        removed_length=removed_length,
        energy_before=energy_before,
        energy_after=energy_after,
        area_drift_before_repair=float(drift),
        phase_drift=float(phase_now - phase_before),
    )
    return out, report


def _bump(ts: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Smooth bump supported on (lo, hi), unit maximum."""
    xi = (2.0 * (ts - lo) / (hi - lo) - 1.0)
    out = np.zeros_like(ts)
    inside = np.abs(xi) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - xi[inside] ** 2))
    return out


def _repair_area(mem: LimitMembrane, target: float) -> LimitMembrane:
    """Restore the total area exactly by perturbing y on the longest segment."""
    _, area, _, _ = membrane_measures(mem)
    if abs(area - target) <= 1e-12 * max(target, 1.0):
        return mem
    idx = int(np.argmax([s.length for s in mem.segments]))
    seg = mem.segments[idx]
    chords = np.linalg.norm(np.diff(seg.nodes, axis=0), axis=1)
    s = np.concatenate(([0.0], np.cumsum(chords)))
    f = _bump(s, s[-1] / 3.0, 2.0 * s[-1] / 3.0)

    def rebuilt(beta):
        nodes = seg.nodes.copy()
        nodes[:, 1] = np.maximum(nodes[:, 1] + beta * f, 0.0)
        pieces = [(sg.nodes if j != idx else nodes, sg.phase)
                  for j, sg in enumerate(mem.segments)]
        return build_membrane(pieces, speed=mem.speed)

    def residual(beta):
        return membrane_measures(rebuilt(beta))[1] - target

    lo, hi = -0.01, 0.01
    for _ in range(60):
        if residual(lo) * residual(hi) <= 0:
            break
        lo *= 2.0
        hi *= 2.0
    beta = brentq(residual, lo, hi, xtol=1e-14, rtol=1e-15)
    return rebuilt(beta)


def membrane_to_config(mem: LimitMembrane) -> dict:
    return {
        "speed": mem.speed,
        "segments": [
            {"points": seg.nodes.tolist(), "phase": seg.phase} for seg in mem.segments
        ],
        "kinks": [
            {
                "position": k.position,
                "height": k.height,
                "jump_angle": k.jump_angle,
                "is_proper_interface": k.is_proper_interface,
                "segment_index": k.segment_index,
            }
            for k in mem.kinks
        ],
        "axis_segments": list(mem.axis_segments),
    }


def membrane_from_config(cfg: dict) -> LimitMembrane:
    mem = build_membrane(
        [(np.asarray(s["points"], dtype=float), s["phase"]) for s in cfg["segments"]],
        jump_angles={k["segment_index"]: k["jump_angle"] for k in cfg.get("kinks", [])},
        speed=float(cfg.get("speed", 1.0)),
    )
    return mem
