"""First-order spline regression into the hyperbolic upper half-plane.

A continuous path h into H^2 that is geodesic between knot times and
constant outside them is summarized by its knot values z_1, ..., z_k.  The
penalized objective

    sum_i B_{x_i}(z(t_i))  +  (alpha/2) sum_i d(z_i, z_{i+1})^2 / (t_{i+1} - t_i)

is exact for such paths because the energy of a fixed-endpoint segment on
an interval of length D is minimized by the constant-speed geodesic, with
energy d^2 / D.  At a stationary point every junction balances forces:

    alpha (h'(t_i + 0) - h'(t_i - 0)) + v_i = 0,

with v_i the sum of the unit forces pulling z_i toward its observations.
The solver is joint geodesic gradient descent over the knot values,
started from the pooled location/scale fit of all observations, with a
conservative base step 1/(1 + 2 alpha / min gap) and an adaptive
backtracking line search (doubling after accepted steps) so that stiff
high-penalty problems still converge.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import halfspace
from .cauchy import fit_univariate
from .descent import (DescentConfig, FitReport, FitStatus, SCALE_CAP,
                      plateau_status)
from .halfspace import HPoint, HTangent
from .spd import NumericRangeError


@dataclass(frozen=True)
class SplineProblem:
    """Knot times (strictly increasing), grouped observations, and penalty.

    Observations sharing a time are attached to one knot, so several unit
    forces can act at a junction.
    """

    times: tuple
    observations: tuple  # tuple of tuples of boundary points, one per knot
    alpha: float

    def __post_init__(self):
        if not self.times:
            raise ValueError("at least one knot is required")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if any(t1 >= t2 for t1, t2 in zip(self.times, self.times[1:])):
            raise ValueError("knot times must be strictly increasing")
        if len(self.observations) != len(self.times):
            raise ValueError("one observation group per knot is required")

    @classmethod
    def from_pairs(cls, times, values, alpha):
        """Build a problem from raw (t, x) pairs, merging duplicate times."""
        pairs = sorted(zip([float(t) for t in times], values), key=lambda p: p[0])
        if not pairs:
            raise ValueError("empty dataset")
        knot_times = []
        groups = []
        for t, x in pairs:
            if knot_times and t == knot_times[-1]:
                groups[-1].append(x)
            else:
                knot_times.append(t)
                groups.append([x])
        return cls(tuple(knot_times), tuple(tuple(g) for g in groups), alpha)

    @property
    def k(self):
        return len(self.times)

    def all_observations(self):
        return [x for group in self.observations for x in group]


@dataclass
class SplineFit:
    """Fitted knot values (half-plane points) and the descent report."""

    times: tuple
    values: list
    report: FitReport


def objective(problem, values):
    """Data Busemann terms plus the discrete path energy."""
    if len(values) != problem.k:
        raise ValueError("one value per knot is required")
    total = 0.0
    for group, z in zip(problem.observations, values):
        for x in group:
            total += halfspace.busemann(x, z)
    for i in range(problem.k - 1):
        gap = problem.times[i + 1] - problem.times[i]
        d = halfspace.distance(values[i], values[i + 1])
        total += 0.5 * problem.alpha * d * d / gap
    return total


def _knot_gradients(problem, values):
    """Objective gradient per knot (data forces plus energy pulls)."""
    grads = []
    for i, z in enumerate(values):
        da = 0.0
        db = np.zeros(z.n)
        for x in problem.observations[i]:
            g = halfspace.busemann_grad(x, z)
            da += g.da
            db += g.db
        if i > 0:
            gap = problem.times[i] - problem.times[i - 1]
            pull = halfspace.log_map(z, values[i - 1])
            da -= problem.alpha * pull.da / gap
            db -= problem.alpha * pull.db / gap
        if i < problem.k - 1:
            gap = problem.times[i + 1] - problem.times[i]
            pull = halfspace.log_map(z, values[i + 1])
            da -= problem.alpha * pull.da / gap
            db -= problem.alpha * pull.db / gap
        grads.append(HTangent(z, da, db))
    return grads


def _total_norm(grads):
    return math.sqrt(sum(g.norm() ** 2 for g in grads))


def junction_residuals(problem, values):
    """Force-balance residual norm at every knot.

    The residual alpha * (outgoing velocity - incoming velocity) + v_i,
    with v_i the summed unit forces toward the observations, is minus the
    objective gradient; its norm vanishes at a stationary spline.
    """
    residuals = []
    for i, z in enumerate(values):
        da = 0.0
        db = np.zeros(z.n)
        for x in problem.observations[i]:
            g = halfspace.busemann_grad(x, z)
            da -= g.da
            db -= g.db
        if i < problem.k - 1:
            gap = problem.times[i + 1] - problem.times[i]
            out = halfspace.log_map(z, values[i + 1])
            da += problem.alpha * out.da / gap
            db += problem.alpha * out.db / gap
        if i > 0:
            gap = problem.times[i] - problem.times[i - 1]
            incoming = halfspace.log_map(z, values[i - 1])
            # incoming velocity is minus the log toward the previous knot
            da += problem.alpha * incoming.da / gap
            db += problem.alpha * incoming.db / gap
        residuals.append(HTangent(z, da, db).norm())
    return residuals


def _initial_values(problem):
    obs = problem.all_observations()
    (u, v), report = fit_univariate(obs, DescentConfig(tol=1e-9, max_iters=200))
    if report.status in (FitStatus.CONVERGED, FitStatus.MAX_ITERS_EXCEEDED):
        z0 = HPoint(v, np.array([u]))
    else:
        finite = [x for x in obs if not halfspace.is_infinity(x)]
        center = float(np.median(finite)) if finite else 0.0
        z0 = HPoint(1.0, np.array([center]))
    return [z0] * problem.k


def _try_move(problem, values, tangents, cur_loss, cur_norm, step, floor,
              ceiling=1e9):
    """Line-search move along per-knot tangents.

    Accepts a candidate that certifiably decreases the objective, or one
    that keeps it flat within roundoff slack while strictly shrinking the
    gradient (valid progress for a geodesically convex objective whose
    certifiable decrease has dropped below float resolution).  Halves from
    the trial step first, then scans upward, so one shrunken trial cannot
    ratchet the search away from larger workable steps.  Returns
    (values, loss, step) or None.
    """
    slack = 1e-12 * max(1.0, abs(cur_loss))
    down = []
    s = step
    while s >= floor:
        down.append(s)
        s *= 0.5
    up = []
    s = 2.0 * step
    while s <= ceiling:
        up.append(s)
        s *= 4.0
    for s in down + up:
        try:
            cand = [halfspace.exp_map(z, v, -s)
                    for z, v in zip(values, tangents)]
            cand_loss = objective(problem, cand)
            if np.isfinite(cand_loss):
                if cand_loss < cur_loss:
                    return cand, cand_loss, s
                if cand_loss <= cur_loss + slack:
                    cand_norm = _total_norm(_knot_gradients(problem, cand))
                    if cand_norm < 0.999 * cur_norm:
                        return cand, cand_loss, s
        except NumericRangeError:
            pass
    return None


def _preconditioned_gradients(problem, values, grads):
    """Per-knot gradient scaled by a local curvature bound (Jacobi style).

    Each Busemann term has geodesic second derivative at most 1; an energy
    edge of length d and time gap D contributes at most
    2 (alpha/D)(1 + d) to either endpoint (Hessian of half the squared
    distance grows like d coth d <= 1 + d in curvature -1).  A unit
    multiplier on the scaled direction is therefore non-increasing.
    """
    scaled = []
    for i, (z, gr) in enumerate(zip(values, grads)):
        bound = float(len(problem.observations[i]))
        if i > 0:
            gap = problem.times[i] - problem.times[i - 1]
            d = halfspace.distance(z, values[i - 1])
            bound += 2.0 * problem.alpha * (1.0 + d) / gap
        if i < problem.k - 1:
            gap = problem.times[i + 1] - problem.times[i]
            d = halfspace.distance(z, values[i + 1])
            bound += 2.0 * problem.alpha * (1.0 + d) / gap
        scaled.append(gr.scaled(1.0 / bound))
    return scaled


def fit(problem, config=None):
    """Minimize the spline objective by joint geodesic descent on the knots.

    Every iteration makes a joint step along the per-knot gradients scaled
    by local curvature bounds (a unit multiplier is provably
    non-increasing; backtracking adapts the multiplier from there) and then
    attempts a uniform move of all knots along the mean gradient direction
    with its own adapted step.  The uniform direction is the soft mode of
    high-penalty problems, whose curvature does not grow with the penalty,
    so the two-channel stepping converges across penalty scales.

    Converged means the total gradient norm (root of summed squared knot
    gradients) fell below config.tol, which bounds every junction residual.
    Knots escaping to the boundary mark the problem degenerate.
    """
    config = config or DescentConfig()
    start = time.perf_counter()
    values = _initial_values(problem)
    adaptive = config.step_policy == "backtracking"
    trial_joint = 1.0
    trial_uniform = 1.0
    floor = 1e-12
    losses = [objective(problem, values)]
    norms = []
    status = None
    iters = 0
    for _ in range(config.max_iters + 1):
        grads = _knot_gradients(problem, values)
        g = _total_norm(grads)
        norms.append(g)
        if g < config.tol:
            status = FitStatus.CONVERGED
            break
        if any(not 1.0 / SCALE_CAP < z.a < SCALE_CAP for z in values):
            status = FitStatus.DEGENERATE_DATA
            break
        if iters == config.max_iters:
            status = plateau_status(norms)
            break
        moved = False
        scaled = _preconditioned_gradients(problem, values, grads)
        if adaptive:
            got = _try_move(problem, values, scaled, losses[-1], g,
                            trial_joint, floor)
        else:
            # the unit multiplier is provably non-increasing: take it
            try:
                cand = [halfspace.exp_map(z, v, -1.0)
                        for z, v in zip(values, scaled)]
                got = (cand, objective(problem, cand), 1.0)
            except NumericRangeError:
                got = None
        if got is not None:
            values, loss_now, used = got
            if adaptive:
                trial_joint = 2.0 * used
            moved = True
        else:
            loss_now = losses[-1]
        if adaptive:
            grads_now = _knot_gradients(problem, values) if moved else grads
            da = float(np.mean([v.da for v in grads_now]))
            db = np.mean([v.db for v in grads_now], axis=0)
            uniform = [HTangent(z, da, db) for z in values]
            g_now = _total_norm(grads_now)
            got = _try_move(problem, values, uniform, loss_now, g_now,
                            trial_uniform, floor)
            if got is not None:
                values, loss_now, used = got
                trial_uniform = 2.0 * used
                moved = True
        if not moved:
            # stationary at float resolution: classify from the decay tail
            status = plateau_status(norms)
            break
        losses.append(loss_now)
        iters += 1
    report = FitReport(status, iters, losses, norms, time.perf_counter() - start)
    return SplineFit(problem.times, values, report)


def evaluate(solution, t):
    """Value of the fitted path at time t.

    Constant before the first knot and after the last; constant-speed
    geodesic interpolation between consecutive knots.
    """
    t = float(t)
    times = solution.times
    values = solution.values
    if t <= times[0]:
        return values[0]
    if t >= times[-1]:
        return values[-1]
    i = int(np.searchsorted(times, t, side="right")) - 1
    if times[i] == t:
        return values[i]
    frac = (t - times[i]) / (times[i + 1] - times[i])
    v = halfspace.log_map(values[i], values[i + 1])
    return halfspace.exp_map(values[i], v, frac)
