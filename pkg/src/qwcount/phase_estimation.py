"""Exact outcome statistics of textbook phase estimation on a p-qubit register.

Two independent engines compute the same distribution over the phase grid
``Ω_P = {2πm/P : 0 ≤ m < P}`` with ``P = 2^p``:

* :func:`exact_distribution` mixes the squared Fourier-vector overlap kernel
  ``sin²(PΔ/2) / (P² sin²(Δ/2))`` over a weighted list of eigenphases.  (A
  common textbook rendering of this kernel drops the factor 1/2 inside the
  sines; that variant does not sum to one over the grid.  The normalized form
  used here is what the Fourier vectors ``|F_P(ω)⟩ = P^{-1/2} Σ_j e^{iωj}|j⟩``
  actually give, and the circuit engine confirms it.)
* :func:`circuit_distribution` literally simulates the register circuit:
  uniform first register, controlled powers ``u^{2^e}`` obtained by repeated
  matrix squaring, inverse Fourier transform, first-register marginal.  It
  never consults eigenvalues, so agreement between the two engines is a real
  cross-check.

Sampling is a pure function of (distribution, seed, n) backed by NumPy's
PCG64 generator; there is no hidden global RNG state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .linalg import as_matrix, as_vector, unitarity_defect

__all__ = [
    "TWO_PI",
    "GOOD_ESTIMATE_PROBABILITY",
    "MAX_CIRCUIT_QUBITS",
    "EigenphaseMixture",
    "PhaseDistribution",
    "fourier_kernel",
    "exact_distribution",
    "circuit_distribution",
    "sample",
    "total_variation",
    "grid_neighbor_indices",
    "good_estimate_mass",
]

TWO_PI = 2.0 * math.pi

# Worst-case probability that phase estimation returns one of the two grid
# neighbors of the true phase (attained when the phase sits mid-cell).
GOOD_ESTIMATE_PROBABILITY = 8.0 / math.pi**2

# Joint-state size guard for the literal circuit simulation.
MAX_CIRCUIT_QUBITS = 12

# |Δ mod 2π| below this is treated as the removable singularity of the kernel.
_SINGULARITY_TOL = 1e-13

_WEIGHT_CLAMP = 1e-14
_MASS_CLAMP = 1e-14


def _mod_two_pi(x: float) -> float:
    return float(np.asarray(x) % TWO_PI)


@dataclass(frozen=True)
class EigenphaseMixture:
    """Weighted eigenphases; weights must be nonnegative and sum to one."""

    phases: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64) % TWO_PI
        weights = np.asarray(self.weights, dtype=np.float64)
        if phases.ndim != 1 or phases.shape != weights.shape or phases.size == 0:
            raise ValueError("phases and weights must be equal-length nonempty 1-d arrays")
        if weights.min() < -_WEIGHT_CLAMP:
            raise ValueError(f"negative mixture weight: {weights.min()}")
        weights = np.clip(weights, 0.0, None)
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"mixture weights sum to {weights.sum()}, expected 1")
        phases.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class PhaseDistribution:
    """Probability mass on the P-point phase grid of a p-qubit register."""

    p: int
    mass: np.ndarray

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"register size must be at least 1 qubit, got {self.p}")
        mass = np.asarray(self.mass, dtype=np.float64)
        if mass.shape != (2**self.p,):
            raise ValueError(f"expected {2**self.p} masses for p={self.p}, got shape {mass.shape}")
        if mass.min() < -_MASS_CLAMP:
            raise ValueError(f"negative probability mass: {mass.min()}")
        mass = np.clip(mass, 0.0, None)
        if abs(mass.sum() - 1.0) > 1e-10:
            raise ValueError(f"masses sum to {mass.sum()}, expected 1")
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)

    @property
    def n_points(self) -> int:
        return 2**self.p

    def omegas(self) -> np.ndarray:
        """Grid phases ``2πm/P`` in index order."""
        return TWO_PI * np.arange(self.n_points) / self.n_points


def fourier_kernel(theta: float, omega: float, grid_size: int) -> float:
    """Probability that estimation of eigenphase ``theta`` lands on grid phase ``omega``.

    Periodic in ``theta - omega`` with period 2π; returns exactly 1 at the
    removable singularity ``theta ≡ omega`` and sums to 1 over any full grid.
    """
    if grid_size < 1:
        raise ValueError(f"grid size must be positive, got {grid_size}")
    delta = (theta - omega) % TWO_PI
    if min(delta, TWO_PI - delta) < _SINGULARITY_TOL:
        return 1.0
    value = math.sin(grid_size * delta / 2.0) ** 2 / (grid_size**2 * math.sin(delta / 2.0) ** 2)
    return min(value, 1.0)


def _kernel_on_grid(theta: float, p: int) -> np.ndarray:
    """Vectorized :func:`fourier_kernel` against the whole p-qubit grid."""
    n = 2**p
    delta = (theta - TWO_PI * np.arange(n) / n) % TWO_PI
    singular = np.minimum(delta, TWO_PI - delta) < _SINGULARITY_TOL
    safe = np.where(singular, 1.0, delta)
    values = np.sin(n * safe / 2.0) ** 2 / (n**2 * np.sin(safe / 2.0) ** 2)
    return np.where(singular, 1.0, np.minimum(values, 1.0))


def exact_distribution(mixture: EigenphaseMixture, p: int) -> PhaseDistribution:
    """Outcome distribution for an eigenphase mixture, via the analytic kernel."""
    if p < 1:
        raise ValueError(f"register size must be at least 1 qubit, got {p}")
    mass = np.zeros(2**p)
    for phase, weight in zip(mixture.phases, mixture.weights):
        if weight > 0.0:
            mass += weight * _kernel_on_grid(phase, p)
    return PhaseDistribution(p, mass)


def circuit_distribution(u, psi, p: int, *, tol: float = 1e-8) -> PhaseDistribution:
    """Outcome distribution by direct simulation of the estimation circuit.

    Builds the joint (register ⊗ system) state, applies the controlled powers
    ``u^{2^e}`` by repeated squaring of the matrix, applies the inverse
    Fourier transform on the register, and returns the register marginal.

    Raises
    ------
    ValueError
        If ``u`` is not unitary within ``tol`` or ``psi`` is not unit norm.
    ResourceLimitError
        If ``p`` exceeds :data:`MAX_CIRCUIT_QUBITS`.
    """
    if p < 1:
        raise ValueError(f"register size must be at least 1 qubit, got {p}")
    if p > MAX_CIRCUIT_QUBITS:
        raise ResourceLimitError(f"circuit simulation limited to p <= {MAX_CIRCUIT_QUBITS}, got {p}")
    um = as_matrix(u)
    vec = as_vector(psi)
    if um.shape[0] != um.shape[1] or um.shape[0] != vec.shape[0]:
        raise ValueError(f"operator shape {um.shape} does not match state dimension {vec.shape[0]}")
    defect = unitarity_defect(um)
    if defect > tol:
        raise ValueError(f"operator is not unitary: defect {defect:.3e} exceeds {tol:.1e}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state norm {norm} is not 1 within {tol:.1e}")

    n = 2**p
    # Hadamards on the register: uniform superposition of all register values.
    state = np.tile(vec / math.sqrt(n), (n, 1))
    # Register value m applies u^m to the system.  Bit e of m corresponds to
    # the control qubit whose gate is u^(2^e); successive squarings walk e up.
    power = um
    for e in range(p):
        rows = (np.arange(n) >> e) & 1 == 1
        state[rows] = state[rows] @ power.T
        power = power @ power
    # Inverse Fourier transform on the register index.
    state = np.fft.fft(state, axis=0) / math.sqrt(n)
    return PhaseDistribution(p, (np.abs(state) ** 2).sum(axis=1))


def sample(dist: PhaseDistribution, seed: int, n: int) -> np.ndarray:
    """Draw ``n`` grid phases (radians); identical arguments give identical output."""
    if n < 1:
        raise ValueError(f"sample count must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    cumulative = np.cumsum(dist.mass)
    indices = np.searchsorted(cumulative, rng.random(n), side="right")
    indices = np.minimum(indices, dist.n_points - 1)
    return dist.omegas()[indices]


def total_variation(a: PhaseDistribution, b: PhaseDistribution) -> float:
    """Total variation distance between two distributions on the same grid."""
    if a.p != b.p:
        raise ValueError(f"grid mismatch: p={a.p} vs p={b.p}")
    return float(0.5 * np.abs(a.mass - b.mass).sum())


def grid_neighbor_indices(theta: float, p: int) -> tuple[int, ...]:
    """Indices of the grid phases that round ``theta`` down and up (equal on-grid)."""
    n = 2**p
    position = _mod_two_pi(theta) * n / TWO_PI
    lo = int(math.floor(position)) % n
    hi = int(math.ceil(position)) % n
    return (lo,) if lo == hi else (lo, hi)


def good_estimate_mass(theta: float, p: int) -> float:
    """Probability that estimation of ``theta`` returns one of its two grid neighbors.

    At least :data:`GOOD_ESTIMATE_PROBABILITY` for every ``theta``; equals 1
    when ``theta`` lies on the grid.
    """
    n = 2**p
    return sum(fourier_kernel(theta, TWO_PI * m / n, n) for m in grid_neighbor_indices(theta, p))
