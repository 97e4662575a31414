"""Metropolis–Hastings sampling of point configurations.

The target density of the free points is the Kähler-route measure. Each
step moves one uniformly chosen free vertex by an isotropic Gaussian and
re-triangulates from scratch; because the density is continuous across
edge flips, no special handling of combinatorial changes is needed.
Configurations at which the density cannot be evaluated (coinciding
points, a degenerate construction) are rejected, which keeps the chain
reversible.

Seeds: a chain started with integer ``seed`` draws from
``numpy.random.default_rng(seed)``. Independent chains of
:func:`run_chains` use ``SeedSequence(seed).spawn(n)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from .errors import AuditMismatch, DegenerateInput, MeasureError
from .measure import COINCIDENCE_TOL, log_measure_kahler
from .mesh import PointConfig, _bowyer_watson

AUDIT_EVERY = 10_000
AUDIT_TOL = 1e-9


_SMALL = 64  # face count below which plain Python assembly beats numpy


def _free_block_small(z: list, faces, index: dict) -> np.ndarray:
    """Free × free block of the Kähler matrix by a Python loop over faces."""
    n = len(index)
    d = [[0j] * n for _ in range(n)]
    for f in faces:
        loc = [index.get(v) for v in f]
        if all(x is None for x in loc):
            continue
        p = [z[v] for v in f]
        u, w = p[1] - p[0], p[2] - p[0]
        area2 = (u.conjugate() * w).imag
        if area2 == 0:
            raise MeasureError("flat face")
        # 1 / (8 R²) with R = |u| |w| |u - w| / (4 |area|)
        s = area2 * area2 / (2.0 * abs(u) ** 2 * abs(w) ** 2 * abs(u - w) ** 2)
        cot = []
        for k in range(3):
            q = (p[(k + 2) % 3] - p[k]) / (p[(k + 1) % 3] - p[k])
            cot.append(q.real / q.imag)
        for k in range(3):
            i = loc[k]
            if i is None:
                continue
            k1, k2 = (k + 1) % 3, (k + 2) % 3
            d[i][i] += s * (cot[k1] + cot[k2])
            j = loc[k1]
            if j is not None:
                d[i][j] += s * (-cot[k2] - 1j)
                d[j][i] += s * (-cot[k2] + 1j)
    return np.array(d)


def _free_block_numpy(z: np.ndarray, faces: np.ndarray, free: list) -> np.ndarray:
    n = z.size
    tri = z[faces]
    z1, z2, z3 = tri[:, 0], tri[:, 1], tri[:, 2]
    u, v = z2 - z1, z3 - z1
    area = (np.conj(u) * v).imag / 2.0
    if np.any(area == 0):
        raise MeasureError("flat face")
    w = z1 + (np.abs(u) ** 2 * v - np.abs(v) ** 2 * u) / (4j * area)
    r2 = np.abs(z1 - w) ** 2
    cot = np.empty(tri.shape)
    for k in range(3):
        q = (tri[:, (k + 2) % 3] - tri[:, k]) / (tri[:, (k + 1) % 3] - tri[:, k])
        cot[:, k] = q.real / q.imag
    c1, c2, c3 = cot[:, 0], cot[:, 1], cot[:, 2]
    s = 1.0 / (8.0 * r2)
    blk = np.stack([
        c2 + c3, -c3 - 1j, -c2 + 1j,
        -c3 + 1j, c3 + c1, -c1 - 1j,
        -c2 - 1j, -c1 + 1j, c1 + c2,
    ], axis=1) * s[:, None]
    rows = np.repeat(faces, 3, axis=1)
    cols = np.tile(faces, (1, 3))
    flat = (rows * n + cols).ravel()
    d = (np.bincount(flat, blk.real.ravel(), n * n)
         + 1j * np.bincount(flat, blk.imag.ravel(), n * n)).reshape(n, n)
    return d[np.ix_(free, free)]


def fast_log_measure(config: PointConfig) -> float:
    """Log of the Kähler-route density, without building a full mesh.

    Same quantity as :func:`~.measure.log_measure_kahler`: the face
    matrices are assembled directly from the raw Delaunay faces, skipping
    the mesh validation. Raises :class:`~.errors.MeasureError` subclasses
    on degenerate input.
    """
    free = list(config.free)
    if not free:
        return 0.0
    pts = config.sphere_points()
    faces = _bowyer_watson(pts)
    inf = config.infinity
    if inf is not None:
        faces = [f for f in faces if inf not in f]
    if len(faces) <= _SMALL:
        d = _free_block_small(pts, faces, {v: i for i, v in enumerate(free)})
    else:
        d = _free_block_numpy(config.points, np.array(faces, dtype=np.int64), free)
    if d.shape[0] == 1:
        val = d[0, 0].real
        if not val > 0:
            raise MeasureError("singular Kähler matrix")
        return math.log(val) + math.log(2.0)
    sign, logabs = np.linalg.slogdet(d)
    if sign == 0 or not math.isfinite(logabs):
        raise MeasureError("singular Kähler matrix")
    return float(logabs) + len(free) * math.log(2.0)


def _log_target(config: PointConfig, target: str) -> float:
    """Log target density, or ``-inf`` where it cannot be evaluated."""
    if config.min_distance() < COINCIDENCE_TOL * config.scale:
        return -math.inf
    if target == "constant":
        return 0.0
    try:
        return fast_log_measure(config)
    except MeasureError:
        return -math.inf


@dataclass(frozen=True)
class ChainState:
    """Current point of a chain plus running statistics."""

    config: PointConfig
    log_measure: float
    step: int = 0
    accepted: int = 0
    seed: int | None = None

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.step if self.step else float("nan")


@dataclass(frozen=True)
class Sample:
    step: int
    config: PointConfig
    log_measure: float

    def to_dict(self) -> dict:
        return {"step": self.step, "log_measure": self.log_measure,
                **self.config.to_dict()}


def init_state(config: PointConfig, seed: int | None = None,
               target: str = "kahler") -> ChainState:
    if target not in ("kahler", "constant"):
        raise ValueError("target must be 'kahler' or 'constant'")
    if config.n_free == 0:
        raise ValueError("nothing to sample: no free vertex")
    lm = _log_target(config, target)
    if not math.isfinite(lm):
        raise ValueError("initial configuration has zero density")
    return ChainState(config, lm, seed=seed)


def mh_step(state: ChainState, sigma: float, rng: np.random.Generator,
            target: str = "kahler") -> ChainState:
    """One Metropolis–Hastings update of a single free vertex."""
    if not sigma > 0:
        raise ValueError("proposal sigma must be positive")
    cfg = state.config
    free = cfg.free
    v = free[int(rng.integers(len(free)))]
    dx, dy = rng.normal(0.0, sigma, 2)
    log_u = math.log(rng.random())
    pts = np.array(cfg.points)
    pts[v] += complex(dx, dy)
    try:
        prop = cfg.with_points(pts)
    except MeasureError:
        return replace(state, step=state.step + 1)
    lm = _log_target(prop, target)
    if lm - state.log_measure >= log_u:
        return replace(state, config=prop, log_measure=lm, step=state.step + 1,
                       accepted=state.accepted + 1)
    return replace(state, step=state.step + 1)


def _chain(config0: PointConfig, steps: int, sigma: float, seed, target: str,
           audit_every: int) -> Iterator[ChainState]:
    rng = np.random.default_rng(seed)
    state = init_state(config0, seed, target)
    for k in range(1, steps + 1):
        state = mh_step(state, sigma, rng, target)
        if target == "kahler" and audit_every and k % audit_every == 0:
            audit(state)
        yield state


def iter_chain(config0: PointConfig, steps: int, sigma: float, seed: int | None = 0,
               thin: int = 1, target: str = "kahler",
               audit_every: int = AUDIT_EVERY) -> Iterator[Sample]:
    """Yield every ``thin``-th state of the chain (after the update).

    Every ``audit_every`` steps the stored log-density is recomputed through
    the full triangulation route; a discrepancy above ``1e-9`` raises
    :class:`~.errors.AuditMismatch`.
    """
    if thin < 1:
        raise ValueError("thin must be at least 1")
    for state in _chain(config0, steps, sigma, seed, target, audit_every):
        if state.step % thin == 0:
            yield Sample(state.step, state.config, state.log_measure)


def audit(state: ChainState, tol: float = AUDIT_TOL) -> float:
    """Recompute the log-density of ``state`` by the full route.

    Returns the absolute discrepancy, or ``nan`` when the state sits within
    the geometric tolerance of a flip boundary, where the full route
    declines to build (the density itself is continuous there).
    """
    try:
        ref = log_measure_kahler(state.config)
    except DegenerateInput:
        return math.nan
    diff = abs(ref - state.log_measure)
    if diff > tol:
        raise AuditMismatch(f"stored log-measure off by {diff:.3e} at step {state.step}")
    return diff


@dataclass(frozen=True)
class ChainResult:
    samples: list[Sample]
    final: ChainState

    @property
    def acceptance_rate(self) -> float:
        return self.final.acceptance_rate


def run_chain(config0: PointConfig, steps: int, sigma: float, seed: int | None = 0,
              thin: int = 1, target: str = "kahler",
              audit_every: int = AUDIT_EVERY) -> ChainResult:
    """Run a chain and collect thinned samples with their log-densities.

    The same ``seed`` reproduces the same sample stream bit for bit.
    """
    if thin < 1:
        raise ValueError("thin must be at least 1")
    state = None
    samples = []
    for state in _chain(config0, steps, sigma, seed, target, audit_every):
        if state.step % thin == 0:
            samples.append(Sample(state.step, state.config, state.log_measure))
    if state is None:
        state = init_state(config0, seed, target)
    return ChainResult(samples, state)


def run_chains(config0: PointConfig, n_chains: int, steps: int, sigma: float,
               seed: int = 0, thin: int = 1, target: str = "kahler",
               workers: int = 1) -> list[ChainResult]:
    """Independent chains seeded by ``SeedSequence(seed).spawn(n_chains)``."""
    seqs = np.random.SeedSequence(seed).spawn(n_chains)

    def one(ss):
        return run_chain(config0, steps, sigma, ss, thin, target)

    if workers <= 1:
        return [one(ss) for ss in seqs]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(one, seqs))


def free_points(samples: list[Sample]) -> np.ndarray:
    """Positions of the free vertices, shape (n_samples, N)."""
    if not samples:
        return np.zeros((0, 0), dtype=complex)
    free = list(samples[0].config.free)
    return np.array([s.config.points[free] for s in samples])
