"""Closed-form spectral data and walk amplitudes for cycles and product lattices.

The cycle Z_n has normalized adjacency Abar = (W + W^(n-1))/2 with W the cyclic
shift.  Its eigenvalues are lambda_j = cos(2*pi*j/n) with Fourier eigenvectors,
so the walk operator exp(i*Abar*t*scale) acts in closed form:

    <q| exp(i*Abar*t*s) |p> = (1/n) * sum_j exp(i*t*s*lambda_j) * w^((q-p)*j),

with w = exp(2*pi*i/n).  On a product lattice Z_{n_1} x ... x Z_{n_d} the
normalized adjacency is the average (1/d) * sum_k H_k of the per-coordinate
generators, and the propagator factorizes into per-cycle amplitudes with time
scale 1/d each.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import SizeError

# Time-scale conventions for exp(i*Abar*t*scale).  A d-factor joint walk puts
# scale 1/d on each factor; HALF is the d=2 case.
FULL = 1.0
HALF = 0.5

# Largest vertex count for which dense first columns are built.
MAX_DENSE_VERTICES = 1_000_000


@dataclass(frozen=True)
class LatticeSpec:
    """Periodic lattice Z_{n_1} x ... x Z_{n_d} given by its cycle lengths."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if len(dims) == 0:
            raise ValueError("lattice needs at least one cycle")
        if any(n < 2 for n in dims):
            raise ValueError(f"every cycle length must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)
        n_total = 1
        for n in dims:
            n_total *= n
        if n_total > 2**53:
            raise SizeError(f"vertex count {n_total} exceeds machine range")

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        """Total vertex count N = prod(dims)."""
        return int(np.prod(self.dims, dtype=object))

    @property
    def all_odd(self) -> bool:
        return all(n % 2 == 1 for n in self.dims)

    @property
    def odd_coprime_2d(self) -> bool:
        """True iff dims = (n1, n2) with n1 > n2, both odd and coprime."""
        if self.d != 2:
            return False
        n1, n2 = self.dims
        return n1 > n2 and n1 % 2 == 1 and n2 % 2 == 1 and math.gcd(n1, n2) == 1

    def check_dense(self) -> None:
        if self.size > MAX_DENSE_VERTICES:
            raise SizeError(
                f"N = {self.size} exceeds dense limit {MAX_DENSE_VERTICES}"
            )


@dataclass(frozen=True)
class EigenphaseTable:
    """Eigenvalues cos(2*pi*j/n) and roots of unity w^j for one cycle."""

    n: int
    lambdas: np.ndarray
    unit_roots: np.ndarray


@dataclass(frozen=True)
class AmplitudeVector:
    """One column <q|U(t)|p> of a cycle walk operator, indexed by q."""

    entries: np.ndarray
    t: float
    source: int
    scale: float

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.entries) ** 2


def _check_cycle(n: int) -> int:
    n = int(n)
    if n < 2:
        raise ValueError(f"cycle length must be >= 2, got {n}")
    return n


@functools.lru_cache(maxsize=512)
def eigenphases(n: int) -> EigenphaseTable:
    """Spectral table for the cycle Z_n.

    lambda_j is evaluated at min(j, n-j) so the mirror identity
    lambda_j == lambda_{n-j} holds bitwise; downstream frequency differences
    that vanish identically then vanish exactly in floating point too.
    """
    n = _check_cycle(n)
    j = np.arange(n)
    mirrored = np.minimum(j, n - j)
    lambdas = np.cos(2.0 * np.pi * mirrored / n)
    unit_roots = np.exp(2j * np.pi * j / n)
    lambdas.setflags(write=False)
    unit_roots.setflags(write=False)
    return EigenphaseTable(n=n, lambdas=lambdas, unit_roots=unit_roots)


def cycle_amplitude(n: int, source: int, t: float, scale: float = FULL) -> AmplitudeVector:
    """Amplitude column of exp(i*Abar*t*scale) on Z_n from vertex `source`.

    The vector for source 0 is computed once and rolled, so translation
    invariance holds exactly (identical arithmetic path for every source).
    """
    n = _check_cycle(n)
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    if not (np.isfinite(scale) and scale > 0):
        raise ValueError(f"scale must be positive and finite, got {scale}")
    table = eigenphases(n)
    phases = np.exp(1j * float(t) * float(scale) * table.lambdas)
    # entry_l = (1/n) sum_j phases_j * w^(l*j): an inverse DFT of the phases.
    powers = np.outer(np.arange(n), np.arange(n)) % n
    base = (table.unit_roots[powers] @ phases) / n
    entries = np.roll(base, int(source) % n)
    entries.setflags(write=False)
    return AmplitudeVector(entries=entries, t=float(t), source=int(source) % n, scale=float(scale))


def cycle_amplitude_at(n: int, offset: int, ts: np.ndarray, scale: float) -> np.ndarray:
    """Amplitude at a single offset for an array of times.

    Vectorized form of cycle_amplitude(...)[offset] used by time-grid heavy
    callers (quadrature and oscillatory-sum evaluation); O(n) per time point.
    """
    n = _check_cycle(n)
    ts = np.asarray(ts, dtype=float)
    table = eigenphases(n)
    weights = table.unit_roots[(int(offset) % n) * np.arange(n) % n]
    phases = np.exp(1j * float(scale) * np.multiply.outer(ts, table.lambdas))
    return phases @ weights / n


def cycle_amplitude_grid(
    n: int, offset: int, t0: float, h: float, count: int, scale: float
) -> np.ndarray:
    """Amplitude at one offset over the uniform time grid t0 + h*arange(count).

    Equal spacing lets the phase factors advance by elementwise powers of
    z_j = exp(i*scale*h*lambda_j): one block of exponentials is reused across
    the whole grid via a broadcast multiply per chunk, which is what makes
    long quadrature runs affordable.  Chunk anchors are recomputed from exact
    exponentials so no phase drift accumulates.
    """
    n = _check_cycle(n)
    count = int(count)
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    table = eigenphases(n)
    lam = table.lambdas
    weights = table.unit_roots[(int(offset) % n) * np.arange(n) % n] / n
    out = np.empty(count, dtype=complex)
    block = 8192
    base = np.exp(1j * float(scale) * h * np.outer(np.arange(min(block, count)), lam))
    for lo in range(0, count, block):
        hi = min(lo + block, count)
        anchor = np.exp(1j * float(scale) * (t0 + lo * h) * lam)
        out[lo:hi] = (base[: hi - lo] * anchor) @ weights
    return out


def product_amplitude(lattice: LatticeSpec, source: tuple[int, ...], t: float) -> np.ndarray:
    """Joint amplitude tensor <q|exp(i*Abar'*t)|source> on a product lattice.

    Abar' = (1/d) * sum_k H_k, so the propagator is the tensor product of
    per-cycle propagators each carrying time scale 1/d.  Returned array has
    shape `lattice.dims` and unit l2 norm.
    """
    lattice.check_dense()
    source = tuple(int(p) for p in source)
    if len(source) != lattice.d:
        raise ValueError(f"source {source} does not match dims {lattice.dims}")
    scale = 1.0 / lattice.d
    factors = [
        cycle_amplitude(n, p, t, scale).entries for n, p in zip(lattice.dims, source)
    ]
    out = factors[0]
    for vec in factors[1:]:
        out = np.multiply.outer(out, vec)
    return out


def spectral_gap(lattice: LatticeSpec) -> float:
    """Gap 1 - max of the walk spectrum off the top joint eigenvalue.

    Joint eigenvalues are (1/d) * sum_k cos(2*pi*j_k/n_k); the maximum is
    taken over all index tuples except (0, ..., 0).
    """
    lattice.check_dense()
    joint = np.zeros(lattice.dims)
    for axis, n in enumerate(lattice.dims):
        shape = [1] * lattice.d
        shape[axis] = n
        joint = joint + eigenphases(n).lambdas.reshape(shape)
    joint = joint.ravel() / lattice.d
    second = np.max(joint[1:]) if joint.size > 1 else -np.inf
    # index 0 of the raveled tensor is the all-zero tuple with eigenvalue 1
    return float(1.0 - second)
