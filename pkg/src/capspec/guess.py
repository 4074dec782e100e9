"""Initial-guess construction: circular arcs meeting the boundary data.

Every guess is a circular arc traversed at constant speed, so the angle is
linear in tau and the radius and height follow by trigonometry.  The disk
guess estimates the tip height from the classical meniscus-height expansion
and, for small containers, averages the tip-osculating radius with the radius
matching the contact angle; the two circles bracket the true curve, so their
average starts Newton between the bounds.  Annular and planar guesses come in
a u-shaped variant (boundary angles of opposite sign) and an s-shaped variant
(same sign), reflected about the radial axis when the right-hand angle points
down.
"""

from __future__ import annotations

import math

import numpy as np

from .chebcore import ChebGrid
from .model import ProblemKind, ProblemSpec, StateVector

__all__ = [
    "laplace_height",
    "flat_state",
    "guess_p1",
    "guess_p2_u",
    "guess_p2_s",
    "guess_p3",
    "build_guess",
]


def laplace_height(b: float, psi_b: float, kappa: float) -> float:
    """Estimated center height of the meniscus in a tube of radius b.

    The leading 2*cos(gamma)/(kappa*b) term is the classical narrow-tube
    rise with contact angle gamma = pi/2 - psi_b; the correction term is the
    next order of the expansion.
    """
    if b <= 0 or kappa <= 0:
        raise ValueError("laplace_height needs b > 0 and kappa > 0")
    g = 0.5 * math.pi - psi_b
    cg, sg = math.cos(g), math.sin(g)
    return 2.0 * cg / (kappa * b) - (b * cg / 3.0) * (1.0 + 2.0 * sg) / (1.0 + sg) ** 2


def _tip_radii(b: float, psi: float, kappa: float) -> tuple[float, float, float]:
    """(r1, r2, u0) for a positive boundary angle psi.

    r2 matches the prescribed inclination at the wall; r1 osculates the tip,
    where the full mean curvature kappa*u0 is carried by two equal sectional
    curvatures, giving radius 2/(kappa*u0).
    """
    r2 = b / math.sin(psi)
    u0 = laplace_height(b, psi, kappa)
    r1 = 2.0 / (kappa * u0)
    return r1, r2, u0


def _u1(r, b: float, psi: float, kappa: float):
    """Lower bracketing circle through the tip (internal, test support)."""
    r1, _, u0 = _tip_radii(b, psi, kappa)
    return u0 + r1 - np.sqrt(r1**2 - np.asarray(r, dtype=float) ** 2)


def _u2(r, b: float, psi: float, kappa: float):
    """Upper bracketing circle matching the wall angle (internal, test support)."""
    _, r2, u0 = _tip_radii(b, psi, kappa)
    return u0 + r2 - np.sqrt(r2**2 - np.asarray(r, dtype=float) ** 2)


def flat_state(spec: ProblemSpec, grid: ChebGrid) -> StateVector:
    """The exact solution when all boundary angles vanish: a flat interface at u=0."""
    tau = grid.points
    if spec.kind is ProblemKind.DISK:
        r0, ell0 = spec.b * tau, spec.b
    else:
        r0 = 0.5 * (spec.a + spec.b) + 0.5 * (spec.b - spec.a) * tau
        ell0 = 0.5 * (spec.b - spec.a)
    zero = np.zeros(grid.n)
    return StateVector.from_parts(r0, zero, zero, ell0)


def guess_p1(spec: ProblemSpec, grid: ChebGrid, psi_target: float) -> StateVector:
    """Circular-arc guess for the disk problem at boundary angle psi_target."""
    if psi_target == 0.0:
        raise ValueError("degenerate arc: psi_target = 0 (flat solution is exact)")
    psi = abs(psi_target)
    if psi > math.pi:
        raise ValueError(f"|psi_target| must not exceed pi, got {psi_target}")
    if spec.b < 1.0:
        r1, r2, u0 = _tip_radii(spec.b, psi, spec.kappa)
        rhat = 0.5 * (r1 + r2)
    else:
        rhat = spec.b / math.sin(psi)
        u0 = 2.0 / rhat
    psi0 = grid.points * psi
    r0 = rhat * np.sin(psi0)
    u0v = u0 + rhat * (1.0 - np.cos(psi0))
    out = StateVector.from_parts(r0, u0v, psi0, abs(rhat * psi))
    if psi_target < 0:
        _reflect(out)
    return out


def _reflect(v: StateVector):
    np.negative(v.u, out=v.u)
    np.negative(v.psi, out=v.psi)


def _canonical(psi_a_t: float, psi_b_t: float) -> tuple[float, float, bool]:
    """Map targets to the representative with the right-hand angle pointing up."""
    flip = psi_b_t < 0 or (psi_b_t == 0 and psi_a_t < 0)
    if flip:
        return -psi_a_t, -psi_b_t, True
    return psi_a_t, psi_b_t, False


def _arc_frame(spec, grid, pa: float, pb: float, rhat: float):
    """Linear angle profile and the arc's radius/height curves about the midline.

    The centered arc meets the radii a and b exactly only for symmetric
    angles; a linear ramp absorbs the endpoint defects so the guess always
    interpolates the position data (the ramp vanishes when the defects do).
    """
    tau = grid.points
    psi0 = 0.5 * (1.0 - tau) * pa + 0.5 * (1.0 + tau) * pb
    r0 = 0.5 * (spec.a + spec.b) + rhat * np.sin(psi0)
    dl = spec.a - r0[0]
    dr = spec.b - r0[-1]
    r0 += 0.5 * (1.0 - tau) * dl + 0.5 * (1.0 + tau) * dr
    u_arc = 1.0 / rhat + rhat * (1.0 - np.cos(psi0))
    return psi0, r0, u_arc


def guess_p2_u(spec: ProblemSpec, grid: ChebGrid, psi_a_t: float,
               psi_b_t: float) -> StateVector:
    """U-shaped guess: boundary angles of opposite sign, single height extremum."""
    if not psi_a_t * psi_b_t < 0:
        raise ValueError("u-shaped guess needs psi_a_t * psi_b_t < 0")
    pa, pb, flip = _canonical(psi_a_t, psi_b_t)
    denom = math.sin(-pa) + math.sin(pb)
    if denom <= 0:
        raise ValueError(f"arc cannot meet both radii: sin(-psi_a)+sin(psi_b) = {denom}")
    rhat = (spec.b - spec.a) / denom
    psi0, r0, u0v = _arc_frame(spec, grid, pa, pb, rhat)
    out = StateVector.from_parts(r0, u0v, psi0, rhat * abs(pb - pa))
    if flip:
        _reflect(out)
    return out


def guess_p2_s(spec: ProblemSpec, grid: ChebGrid, psi_a_t: float,
               psi_b_t: float) -> StateVector:
    """S-shaped guess: boundary angles of equal sign, height crossing zero."""
    if psi_a_t * psi_b_t < 0:
        raise ValueError("s-shaped guess needs psi_a_t * psi_b_t >= 0")
    if psi_a_t == 0 and psi_b_t == 0:
        return flat_state(spec, grid)
    pa, pb, flip = _canonical(psi_a_t, psi_b_t)
    denom = math.sin(pa) + math.sin(pb)
    if denom <= 0:
        raise ValueError(f"arc cannot meet both radii: sin(psi_a)+sin(psi_b) = {denom}")
    rhat = (spec.b - spec.a) / denom
    psi0, r0, _ = _arc_frame(spec, grid, pa, pb, rhat)
    u0v = grid.points / (spec.b - spec.a)
    out = StateVector.from_parts(r0, u0v, psi0, abs(rhat * (pb + pa)))
    if flip:
        _reflect(out)
    return out


def guess_p3(spec: ProblemSpec, grid: ChebGrid, psi_a_t: float,
             psi_b_t: float) -> StateVector:
    """Planar guess: same constructions as the annulus, X in place of R."""
    if psi_a_t * psi_b_t < 0:
        return guess_p2_u(spec, grid, psi_a_t, psi_b_t)
    return guess_p2_s(spec, grid, psi_a_t, psi_b_t)


def build_guess(spec: ProblemSpec, grid: ChebGrid, psi_a_t: float,
                psi_b_t: float) -> StateVector:
    """Dispatch to the guess family for the problem kind and target angles."""
    if spec.kind is ProblemKind.DISK:
        if psi_b_t == 0:
            return flat_state(spec, grid)
        return guess_p1(spec, grid, psi_b_t)
    if psi_a_t == 0 and psi_b_t == 0:
        return flat_state(spec, grid)
    if psi_a_t * psi_b_t < 0:
        return guess_p2_u(spec, grid, psi_a_t, psi_b_t)
    return guess_p2_s(spec, grid, psi_a_t, psi_b_t)
