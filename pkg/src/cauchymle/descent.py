"""Geodesic gradient descent drivers shared by the family fitters.

Two engines live here: one for losses on the unit-determinant SPD manifold
and one for losses on the hyperbolic half-space.  Both stop when the
gradient norm falls below the configured tolerance and otherwise classify
the outcome: a gradient norm that is still decaying geometrically slower
than PLATEAU_RATE per iteration when the iteration budget runs out marks
the problem ill-conditioned (the argmin is nearly degenerate along a
geodesic and the estimate is statistically unstable); anything else is a
plain iteration-budget overrun.
"""

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import halfspace, spd

STEP_POLICIES = ("safe", "improved", "backtracking")

PLATEAU_WINDOW = 20
PLATEAU_RATE = 0.9

COND_CAP = 1e14          # SPD boundary-divergence guard
SCALE_CAP = 1e10         # half-space guard: a outside [1/cap, cap] diverged


class FitStatus(Enum):
    CONVERGED = "converged"
    ILL_CONDITIONED = "ill_conditioned"
    DEGENERATE_DATA = "degenerate_data"
    MAX_ITERS_EXCEEDED = "max_iters_exceeded"


@dataclass
class DescentConfig:
    """Knobs for the geodesic descent.

    step_policy: "safe" uses the provably monotone unit step, "improved" the
    larger dimension-dependent step, "backtracking" tries the improved step
    and halves until the loss decreases, never going below the safe step.
    """

    step_policy: str = "backtracking"
    tol: float = 1e-9
    max_iters: int = 200
    standardize: bool = False

    def __post_init__(self):
        if self.step_policy not in STEP_POLICIES:
            raise ValueError(f"unknown step policy {self.step_policy!r}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class FitReport:
    """Descent trace: outcome, iteration count, per-iteration diagnostics.

    Under the safe and backtracking policies the loss trace is
    non-increasing up to floating-point roundoff of the loss evaluations.
    """

    status: FitStatus
    iterations: int
    loss_trace: list = field(default_factory=list)
    grad_norm_trace: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def converged(self):
        return self.status is FitStatus.CONVERGED

    @property
    def final_grad_norm(self):
        return self.grad_norm_trace[-1] if self.grad_norm_trace else float("nan")


def plateau_status(grad_norms, window=PLATEAU_WINDOW, rate=PLATEAU_RATE):
    """Classify a timed-out descent from the tail of its gradient-norm trace."""
    w = min(window, len(grad_norms) - 1)
    if w < 1 or grad_norms[-1 - w] <= 0:
        return FitStatus.MAX_ITERS_EXCEEDED
    decay = (grad_norms[-1] / grad_norms[-1 - w]) ** (1.0 / w)
    if decay > rate:
        return FitStatus.ILL_CONDITIONED
    return FitStatus.MAX_ITERS_EXCEEDED


def _step_schedule(policy, safe_step, improved_step):
    """Trial steps for one iteration: (first, halving floor)."""
    if policy == "safe":
        return safe_step, safe_step
    if policy == "improved":
        return improved_step, improved_step
    return improved_step, safe_step


def minimize_on_spd(T0, loss_fn, grad_fn, improved_step, config):
    """Geodesic gradient descent for a loss on unit-determinant SPD matrices.

    loss_fn and grad_fn take the current point; grad_fn must return a valid
    tangent.  The safe step is 1 (the loss is assumed to have geodesic
    second derivative at most ||gamma'||^2).  Returns (point, FitReport).
    """
    start = time.perf_counter()
    T = np.asarray(T0, dtype=float)
    losses = [loss_fn(T)]
    grads = []
    status = None
    iters = 0
    for _ in range(config.max_iters + 1):
        V = grad_fn(T)
        g = spd.norm(T, V)
        grads.append(g)
        if g < config.tol:
            status = FitStatus.CONVERGED
            break
        if spd.condition_number(T) > COND_CAP:
            status = FitStatus.DEGENERATE_DATA
            break
        if iters == config.max_iters:
            status = plateau_status(grads)
            break
        step, floor = _step_schedule(config.step_policy, 1.0, improved_step)
        cur = losses[-1]
        while True:
            try:
                cand = spd.geodesic(T, V, -step)
                cand_loss = loss_fn(cand)
                ok = np.isfinite(cand_loss) and cand_loss < cur
            except spd.NumericRangeError:
                ok = False
                cand = None
            if ok or step <= floor:
                break
            step = max(0.5 * step, floor)
        if cand is None:
            status = FitStatus.DEGENERATE_DATA
            break
        T = cand
        losses.append(cand_loss)
        iters += 1
    report = FitReport(status, iters, losses, grads, time.perf_counter() - start)
    return T, report


def minimize_on_halfspace(z0, loss_fn, grad_fn, safe_step, config,
                          trial_factor=2.0):
    """Gradient descent for a loss on the hyperbolic half-space.

    safe_step must make a full step provably non-increasing (second
    derivative of the loss along unit-speed geodesics at most
    1/safe_step).  Backtracking starts from trial_factor * safe_step and
    halves down to the safe step.  Returns (HPoint, FitReport).
    """
    start = time.perf_counter()
    z = z0
    losses = [loss_fn(z)]
    grads = []
    status = None
    iters = 0
    for _ in range(config.max_iters + 1):
        v = grad_fn(z)
        g = v.norm()
        grads.append(g)
        if g < config.tol:
            status = FitStatus.CONVERGED
            break
        if not (1.0 / SCALE_CAP < z.a < SCALE_CAP):
            status = FitStatus.DEGENERATE_DATA
            break
        if iters == config.max_iters:
            status = plateau_status(grads)
            break
        if config.step_policy == "backtracking":
            step, floor = trial_factor * safe_step, safe_step
        else:
            # no family-specific improved step here: improved == safe
            step, floor = safe_step, safe_step
        cur = losses[-1]
        while True:
            try:
                cand = halfspace.exp_map(z, v, -step)
                cand_loss = loss_fn(cand)
                ok = np.isfinite(cand_loss) and cand_loss < cur
            except spd.NumericRangeError:
                ok = False
                cand = None
            if ok or step <= floor:
                break
            step = max(0.5 * step, floor)
        if cand is None:
            status = FitStatus.DEGENERATE_DATA
            break
        z = cand
        losses.append(cand_loss)
        iters += 1
    report = FitReport(status, iters, losses, grads, time.perf_counter() - start)
    return z, report
