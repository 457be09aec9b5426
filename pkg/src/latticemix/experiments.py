"""End-to-end mixing experiments combining kernels, distances and walks.

Four procedures:

* repeated_measurement_run: evolve for a uniformly random time in [0, T],
  measure, repeat.  Exact propagation works with the time-averaged kernel
  P_T and its powers; sampled propagation draws trajectories.
* coordinate_wise_run: evolve one coordinate at a time with its own cycle
  walk (full time scale) and measure that coordinate, sweeping rounds; the
  state stays an exact product of per-cycle distributions throughout.
* uniformity_case_check: quantify how far the d=2 averaged kernel sits from
  uniform, entry class by entry class, against the known deviation caps.
* return_probability_curves: time-averaged return probability of the quantum
  walk next to the running average of the lazy classical walk.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .classical import lazy_step, mixing_curve
from .distances import (
    distance_to_uniform,
    pairwise_column_distance,
    rounds_to_threshold,
    tv_distance,
    uniform,
)
from .kernels import (
    Kernel,
    averaged_kernel_analytic,
    averaged_kernel_quadrature,
    kernel_power,
)
from .oscsums import BoundReport
from .spectral import FULL, LatticeSpec, cycle_amplitude, eigenphases


@dataclass
class ExperimentRecord:
    """Immutable-by-convention bundle of one experiment's inputs and outputs."""

    config: dict
    curves: dict = field(default_factory=dict)
    scalars: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    wall_clock: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(self.verdicts.values())


def _averaged_kernel(lattice: LatticeSpec, T: float, dt: float | None) -> Kernel:
    if lattice.all_odd and lattice.d <= 2:
        return averaged_kernel_analytic(lattice, T)
    return averaged_kernel_quadrature(lattice, T, dt if dt is not None else 0.02)


def repeated_measurement_run(
    lattice: LatticeSpec,
    T: float,
    rounds: int,
    mode: str = "exact",
    trajectories: int = 100_000,
    seed: int = 0,
    dt: float | None = None,
) -> ExperimentRecord:
    """Measure-evolve-measure walk for `rounds` rounds of horizon T.

    Exact mode composes the averaged kernel with itself and reports, per
    round count k, the distance of the column to uniform, the pairwise column
    distance d(P_T^k) and the submultiplicative cap d(P_T)^k.  Sampled mode
    draws per-round evolution times uniformly from [0, T], samples each
    coordinate's step from its cycle kernel, and compares the empirical
    distribution with the exact column.
    """
    start = time.perf_counter()
    if not (np.isfinite(T) and T > 0):
        raise ValueError(f"horizon must be positive, got {T}")
    rounds = int(rounds)
    if rounds < 1:
        raise ValueError(f"need at least one round, got {rounds}")
    config = {
        "dims": lattice.dims, "T": float(T), "rounds": rounds, "mode": mode,
    }
    record = ExperimentRecord(config=config)

    kernel = _averaged_kernel(lattice, T, dt)
    contraction = pairwise_column_distance(kernel)
    record.scalars["kernel_contraction"] = contraction

    if mode == "exact":
        ks = np.arange(1, rounds + 1)
        tvs, dps, caps = [], [], []
        for k in ks:
            powered = kernel_power(kernel, int(k))
            tvs.append(distance_to_uniform(powered))
            dps.append(pairwise_column_distance(powered))
            caps.append(contraction ** int(k))
        record.curves.update({
            "rounds": ks,
            "tv_to_uniform": np.array(tvs),
            "column_distance": np.array(dps),
            "submultiplicative_cap": np.array(caps),
        })
        record.scalars["final_tv"] = tvs[-1]
        record.verdicts["submultiplicative"] = bool(
            np.all(np.array(dps) <= np.array(caps) + 1e-9)
        )
    elif mode == "sampled":
        config.update({"trajectories": int(trajectories), "seed": int(seed)})
        empirical = _sample_repeated(lattice, T, rounds, int(trajectories), int(seed))
        exact_col = kernel_power(kernel, rounds).first_column
        gap = tv_distance(empirical, exact_col)
        tol = 3.0 * math.sqrt(lattice.size / trajectories)
        record.curves["empirical"] = empirical
        record.curves["exact"] = exact_col
        record.scalars.update({"tv_empirical_vs_exact": gap, "mc_tolerance": tol})
        record.verdicts["within_mc_error"] = bool(gap <= tol)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    record.wall_clock = time.perf_counter() - start
    return record


def _sample_repeated(
    lattice: LatticeSpec, T: float, rounds: int, trajectories: int, seed: int
) -> np.ndarray:
    """Empirical distribution after `rounds` sampled measure-evolve rounds."""
    rng = np.random.default_rng(seed)
    scale = 1.0 / lattice.d
    positions = np.zeros((trajectories, lattice.d), dtype=np.int64)
    for _ in range(rounds):
        ts = rng.uniform(0.0, T, trajectories)
        # the joint step factorizes, so each coordinate is sampled on its own
        for axis, n in enumerate(lattice.dims):
            table = eigenphases(n)
            dft = table.unit_roots[np.outer(np.arange(n), np.arange(n)) % n]
            phases = np.exp(1j * scale * np.multiply.outer(ts, table.lambdas))
            probs = np.abs(phases @ dft / n) ** 2
            cum = np.cumsum(probs, axis=1)
            draws = rng.random(trajectories)
            shift = (draws[:, None] > cum).sum(axis=1)
            positions[:, axis] = (positions[:, axis] + np.minimum(shift, n - 1)) % n
    flat = np.ravel_multi_index(positions.T, lattice.dims)
    counts = np.bincount(flat, minlength=lattice.size)
    return counts / trajectories


def spread_constant(n: int, t: float) -> float:
    """c such that at least 2/3 of the cycle kernel column sits at >= c/n.

    c is n times the ceil(2n/3)-th largest entry of |<q|U(t)|0>|^2 at full
    time scale; the recorded value, positive whenever the walk spreads.
    """
    probs = np.sort(cycle_amplitude(n, 0, t, FULL).probabilities)[::-1]
    qualifying = math.ceil(2 * n / 3)
    return float(n * probs[qualifying - 1])


def coordinate_wise_run(
    lattice: LatticeSpec,
    epsilon: float = 0.1,
    times: list[float] | None = None,
    rounds: int | None = None,
) -> ExperimentRecord:
    """Exact propagation of the coordinate-at-a-time measured walk.

    Every coordinate k holds a distribution on its own cycle; one sweep pushes
    each through the cycle measurement kernel Q_k(t_k) with entries
    |<q|exp(i*Abar_k*t_k)|p>|^2.  With rounds=None each coordinate runs
    rounds_to_threshold(d(Q_k)) sweeps, the count that drives its column
    distance below 1/(2e).  Evolution times default to n_k/3; times outside
    [n_k/3, n_k/2] are flagged in the record's warnings, not rejected, since
    the interval is sufficient rather than necessary.
    """
    start = time.perf_counter()
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if times is None:
        times = [n / 3.0 for n in lattice.dims]
    times = [float(t) for t in times]
    if len(times) != lattice.d:
        raise ValueError(f"{len(times)} times for {lattice.d} coordinates")

    record = ExperimentRecord(
        config={"dims": lattice.dims, "epsilon": epsilon, "times": tuple(times),
                "rounds": rounds},
    )

    columns, alphas, constants = [], [], []
    for n, t in zip(lattice.dims, times):
        if not (n / 3.0 <= t <= n / 2.0):
            record.warnings.append(
                f"evolution time {t} outside [{n / 3.0:.6g}, {n / 2.0:.6g}] on Z_{n}"
            )
        col = cycle_amplitude(n, 0, t, FULL).probabilities
        cycle = Kernel(LatticeSpec((n,)), col, kind=f"cycle(n={n},t={t})")
        columns.append(cycle)
        alphas.append(pairwise_column_distance(cycle))
        constants.append(spread_constant(n, t))

    per_coord_rounds = (
        [rounds_to_threshold(a) for a in alphas]
        if rounds is None
        else [int(rounds)] * lattice.d
    )
    sweeps = max(per_coord_rounds)

    matrices = [
        cycle.grid[np.subtract.outer(np.arange(n), np.arange(n)) % n]
        for n, cycle in zip(lattice.dims, columns)
    ]
    factors = [np.eye(n)[0] for n in lattice.dims]
    factor_tv = np.zeros((sweeps + 1, lattice.d))
    for axis, n in enumerate(lattice.dims):
        factor_tv[0, axis] = tv_distance(factors[axis], uniform(n))
    for sweep in range(1, sweeps + 1):
        for axis, n in enumerate(lattice.dims):
            if sweep <= per_coord_rounds[axis]:
                factors[axis] = matrices[axis] @ factors[axis]
            factor_tv[sweep, axis] = tv_distance(factors[axis], uniform(n))

    joint = factors[0]
    for vec in factors[1:]:
        joint = np.multiply.outer(joint, vec)
    joint_tv = tv_distance(joint.ravel(), uniform(lattice.size))

    record.curves["factor_tv"] = factor_tv
    record.scalars.update({
        "joint_tv": joint_tv,
        "contractions": tuple(alphas),
        "rounds_used": tuple(per_coord_rounds),
        "spread_constants": tuple(constants),
    })
    record.verdicts["joint_within_epsilon"] = bool(joint_tv <= epsilon)
    record.verdicts["contractions_below_one"] = bool(max(alphas) < 1.0)
    record.wall_clock = time.perf_counter() - start
    return record


def deviation_time(n1: int, n2: int) -> float:
    """The averaging horizon 1600*(n1+n2)*log(n1)^2 used by the case check."""
    return 1600.0 * (n1 + n2) * math.log(n1) ** 2


def uniformity_case_check(
    n1: int,
    n2: int,
    T: float | None = None,
    strict: bool | None = None,
    checkpoint: str | None = None,
    block_size: int = 256,
) -> list[BoundReport]:
    """Deviation of the d=2 averaged kernel from uniform, entry class by class.

    Entries of the first column split by which coordinates of the offset
    vanish; each class has its own cap on the (scaled) deviation from
    1/(n1*n2), and the classes combine into a full-column l1 cap and a
    pairwise-column-distance cap of 1/(2e).  Strict mode (default when
    n2 > 91) insists on the hypotheses n1 > n2 > 91, both odd and coprime;
    relaxed mode evaluates smaller pairs and reports values without any claim
    that the caps should hold.
    """
    lattice = LatticeSpec((n1, n2))
    if not lattice.odd_coprime_2d:
        raise ValueError(f"need n1 > n2 odd and coprime, got ({n1}, {n2})")
    if strict is None:
        strict = n2 > 91
    if strict and n2 <= 91:
        raise ValueError(f"strict mode needs n2 > 91, got n2 = {n2}")
    if T is None:
        T = deviation_time(n1, n2)

    kernel = averaged_kernel_analytic(
        lattice, T, block_size=block_size, checkpoint=checkpoint
    )
    grid = kernel.grid
    u = 1.0 / (n1 * n2)
    gaps = np.abs(grid - u)

    mode = "strict" if strict else "relaxed"
    base = {"n1": n1, "n2": n2, "T": float(T), "mode": mode}
    reports = [
        BoundReport.build(
            {**base, "case": "origin"}, gaps[0, 0], 4.0 / n2**2, "ANALYTIC"
        ),
        BoundReport.build(
            {**base, "case": "axis2"}, n2 * gaps[0, 1:].max(), 3.0 / n2, "ANALYTIC"
        ),
        BoundReport.build(
            {**base, "case": "axis1"}, n1 * gaps[1:, 0].max(), 3.0 / n2, "ANALYTIC"
        ),
        BoundReport.build(
            {**base, "case": "interior"},
            n1 * n2 * gaps[1:, 1:].max(),
            3.0 / n2 + 2.0 / 50.0,
            "ANALYTIC",
        ),
        BoundReport.build(
            {**base, "case": "column_l1"},
            gaps.sum(),
            13.0 / n2 + 2.0 / 50.0,
            "ANALYTIC",
        ),
        BoundReport.build(
            {**base, "case": "column_distance"},
            pairwise_column_distance(kernel),
            1.0 / (2.0 * math.e),
            "ANALYTIC",
        ),
    ]
    return reports


def return_probability_curves(
    n1: int, n2: int, t_max: int | None = None
) -> ExperimentRecord:
    """Quantum vs classical time-averaged return probability from one vertex.

    Quantum curve: diagonal entry of the averaged kernel P_T at integer
    horizons T.  Classical curve: running average over steps 0..T of the lazy
    walk's return probability.  Both start at 1; the uniform level is
    1/(n1*n2).  The record also carries the classical tv to uniform at
    n1^2 + n2^2 steps, the square-time mark.
    """
    start = time.perf_counter()
    lattice = LatticeSpec((n1, n2))
    square_time = n1 * n1 + n2 * n2
    if t_max is None:
        t_max = square_time
    t_max = int(t_max)

    quantum = np.empty(t_max + 1)
    quantum[0] = 1.0
    for T in range(1, t_max + 1):
        quantum[T] = averaged_kernel_analytic(lattice, float(T)).first_column[0]

    grid = np.zeros(lattice.dims)
    grid[0, 0] = 1.0
    returns = np.empty(t_max + 1)
    returns[0] = 1.0
    for t in range(1, t_max + 1):
        grid = lazy_step(grid)
        returns[t] = grid[0, 0]
    classical = np.cumsum(returns) / np.arange(1, t_max + 2)

    mark = n1 + n2
    u = 1.0 / (n1 * n2)
    _, tvs = mixing_curve(lattice, square_time)

    record = ExperimentRecord(
        config={"dims": (n1, n2), "t_max": t_max},
        curves={
            "T": np.arange(t_max + 1),
            "quantum_return": quantum,
            "classical_return": classical,
        },
        scalars={
            "uniform_level": u,
            "mark_time": mark,
            "square_time": square_time,
            "quantum_gap_at_mark": abs(quantum[mark] - u) if mark <= t_max else np.nan,
            "classical_gap_at_mark": abs(classical[mark] - u) if mark <= t_max else np.nan,
            "classical_tv_at_square_time": float(tvs[-1]),
        },
    )
    if mark <= t_max:
        record.verdicts["quantum_near_uniform_at_mark"] = bool(
            abs(quantum[mark] - u) <= 0.1 * (1.0 - u)
        )
        record.verdicts["quantum_closer_than_classical_at_mark"] = bool(
            abs(quantum[mark] - u) < abs(classical[mark] - u)
        )
    record.verdicts["classical_mixed_at_square_time"] = bool(tvs[-1] <= 0.1)
    record.wall_clock = time.perf_counter() - start
    return record
