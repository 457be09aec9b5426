"""Lazy classical random walk on a periodic lattice.

One step: stay put with probability 1/2, otherwise move to a uniformly chosen
nearest neighbor (probability 1/(4d) per unit shift; the two shifts coincide
when a cycle has length 2).  The chain is doubly stochastic with uniform
stationary distribution, and its epsilon-mixing time is bounded by
2*d*n1^2*ceil(log(d/epsilon)) steps, n1 the longest cycle, via a coupling of
two walkers that meet coordinate by coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distances import tv_distance, uniform
from .kernels import Kernel
from .spectral import LatticeSpec


def lazy_kernel(lattice: LatticeSpec) -> Kernel:
    lattice.check_dense()
    d = lattice.d
    grid = np.zeros(lattice.dims)
    origin = (0,) * d
    grid[origin] = 0.5
    for axis, n in enumerate(lattice.dims):
        for step in (1, -1):
            idx = [0] * d
            idx[axis] = step % n
            grid[tuple(idx)] += 1.0 / (4 * d)
    return Kernel(lattice=lattice, first_column=grid.ravel(), kind="lazy")


def lazy_step(grid: np.ndarray) -> np.ndarray:
    """One lazy-walk update of a distribution laid out on the lattice grid."""
    d = grid.ndim
    out = 0.5 * grid
    for axis in range(d):
        out += (np.roll(grid, 1, axis) + np.roll(grid, -1, axis)) / (4 * d)
    return out


def lazy_mixing_bound(lattice: LatticeSpec, epsilon: float) -> int:
    """Step count 2*d*n1^2*ceil(log(d/epsilon)) guaranteeing tv <= epsilon.

    Natural logarithm; valid for epsilon < 1/2.
    """
    if not (0.0 < epsilon < 0.5):
        raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    d = lattice.d
    n1 = max(lattice.dims)
    return 2 * d * n1 * n1 * math.ceil(math.log(d / epsilon))


def mixing_curve(lattice: LatticeSpec, t_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact tv to uniform of the lazy walk from a vertex, steps 0..t_max."""
    lattice.check_dense()
    t_max = int(t_max)
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    u = uniform(lattice.size)
    grid = np.zeros(lattice.dims)
    grid[(0,) * lattice.d] = 1.0
    tvs = np.empty(t_max + 1)
    tvs[0] = tv_distance(grid.ravel(), u)
    for t in range(1, t_max + 1):
        grid = lazy_step(grid)
        tvs[t] = tv_distance(grid.ravel(), u)
    return np.arange(t_max + 1), tvs


@dataclass(frozen=True)
class CouplingResult:
    """Empirical meeting times of two coupled lazy walkers."""

    lattice: LatticeSpec
    trials: int
    seed: int
    mean_tau: np.ndarray          # per coordinate
    se_tau: np.ndarray            # standard error per coordinate
    mean_tau_couple: float         # mean of max_i tau_i
    se_tau_couple: float
    bound: np.ndarray              # d * n_i^2 / 4 per coordinate

    @property
    def within_bound(self) -> np.ndarray:
        """mean_tau_i <= bound_i + 3 standard errors, per coordinate."""
        return self.mean_tau <= self.bound + 3.0 * self.se_tau


def coupling_simulation(
    lattice: LatticeSpec,
    trials: int,
    seed: int,
    max_steps: int | None = None,
    check_absorption: bool = False,
) -> CouplingResult:
    """Simulate the coordinate-by-coordinate coupling of two lazy walkers.

    Each step picks a coordinate uniformly at random.  If the walkers agree
    there, both shift by +1/-1/0 with probabilities 1/4, 1/4, 1/2; otherwise a
    fair coin picks which walker moves and another picks the direction, so
    each walker's marginal is the lazy walk.  Walkers start antipodally
    (offset n_i // 2 in every coordinate).  tau_i records when coordinate i
    first agrees; agreement is never undone.

    All trials advance in lockstep from one PCG64 stream seeded with `seed`,
    so results are reproducible; draws are consumed in a fixed order (one
    coordinate array and two uniform arrays per step for the active trials).
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    d = lattice.d
    dims = np.array(lattice.dims)
    n1 = int(dims.max())
    if max_steps is None:
        max_steps = 2000 * d * n1 * n1
    rng = np.random.default_rng(seed)

    x = np.zeros((trials, d), dtype=np.int64)
    y = np.tile(dims // 2, (trials, 1))
    tau = np.zeros((trials, d), dtype=np.int64)
    done = np.all(x == y, axis=1)

    for t in range(1, max_steps + 1):
        active = np.nonzero(~done)[0]
        if active.size == 0:
            break
        if check_absorption:
            equal_before = x[active] == y[active]
        coord = rng.integers(0, d, active.size)
        u_move = rng.random(active.size)
        u_dir = rng.random(active.size)
        n_c = dims[coord]
        xa = x[active, coord]
        ya = y[active, coord]
        agree = xa == ya

        # agreeing coordinate: move both together, lazily
        joint = np.where(u_move < 0.25, 1, np.where(u_move < 0.5, -1, 0))
        # differing coordinate: u_move picks the mover, u_dir the direction
        direction = np.where(u_dir < 0.5, 1, -1)
        move_x = ~agree & (u_move < 0.5)
        move_y = ~agree & (u_move >= 0.5)

        new_x = np.where(agree, xa + joint, np.where(move_x, xa + direction, xa))
        new_y = np.where(agree, ya + joint, np.where(move_y, ya + direction, ya))
        x[active, coord] = new_x % n_c
        y[active, coord] = new_y % n_c

        newly = ~agree & (x[active, coord] == y[active, coord])
        tau[active[newly], coord[newly]] = t
        if check_absorption:
            equal_after = x[active] == y[active]
            if not np.all(equal_after[equal_before]):
                raise AssertionError("coupled coordinate came apart")
        done[active] = np.all(x[active] == y[active], axis=1)

    if not done.all():
        raise RuntimeError(f"{(~done).sum()} trials uncoupled after {max_steps} steps")

    tau_couple = tau.max(axis=1)
    return CouplingResult(
        lattice=lattice,
        trials=trials,
        seed=seed,
        mean_tau=tau.mean(axis=0),
        se_tau=tau.std(axis=0, ddof=1) / math.sqrt(trials),
        mean_tau_couple=float(tau_couple.mean()),
        se_tau_couple=float(tau_couple.std(ddof=1)) / math.sqrt(trials),
        bound=d * dims.astype(float) ** 2 / 4.0,
    )
