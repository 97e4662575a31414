import math

import numpy as np
import pytest

from delaunay_measure.errors import AuditMismatch
from delaunay_measure.measure import log_measure_kahler
from delaunay_measure.mesh import delaunay_build, validate_delaunay
from delaunay_measure.sampler import (ChainState, audit, fast_log_measure, free_points,
                                      init_state, iter_chain, mh_step, run_chain, run_chains)

import helpers


class _ScriptedRng:
    """Stands in for a Generator: fixed vertex, displacement and uniform draw."""

    def __init__(self, k, d, u=0.5):
        self.k, self.d, self.u = k, d, u

    def integers(self, n):
        return self.k

    def normal(self, loc, scale, size):
        return np.array([self.d.real, self.d.imag])

    def random(self):
        return self.u


def test_fast_density_matches_full_route():
    rng = np.random.default_rng(0)
    for k in range(20):
        cfg = helpers.random_config(rng, 1 + k % 8, "infinity" if k % 2 else "fixed-face")
        assert fast_log_measure(cfg) == pytest.approx(log_measure_kahler(cfg), abs=1e-10)


def test_same_seed_same_stream():
    cfg = helpers.random_inside(np.random.default_rng(1), 3)
    a = run_chain(cfg, 300, 0.05, seed=42, thin=7)
    b = run_chain(cfg, 300, 0.05, seed=42, thin=7)
    assert [s.step for s in a.samples] == [s.step for s in b.samples]
    assert all(np.array_equal(x.config.points, y.config.points) and x.log_measure == y.log_measure
               for x, y in zip(a.samples, b.samples))
    c = run_chain(cfg, 300, 0.05, seed=43, thin=7)
    assert not np.array_equal(free_points(a.samples), free_points(c.samples))


def test_constant_target_accepts_everything():
    cfg = helpers.random_inside(np.random.default_rng(2), 3)
    res = run_chain(cfg, 500, 0.05, seed=0, target="constant")
    assert res.acceptance_rate == 1


def test_coincident_proposal_rejected():
    cfg = helpers.random_inside(np.random.default_rng(3), 2)
    state = init_state(cfg)
    z = cfg.points
    # move vertex 3 onto vertex 4 (up to far less than the coincidence tolerance)
    rng = _ScriptedRng(0, z[4] - z[3] + 1e-13, u=1e-300)
    new = mh_step(state, 0.1, rng)
    assert new.step == 1 and new.accepted == 0
    assert np.array_equal(new.config.points, cfg.points)


def test_acceptance_in_open_interval():
    cfg = helpers.random_inside(np.random.default_rng(4), 5)
    t = delaunay_build(cfg)
    lens = [abs(t.z[a] - t.z[b]) for a, b in t.edges]
    res = run_chain(cfg, 2000, 0.1 * float(np.mean(lens)), seed=1)
    assert 0 < res.acceptance_rate < 1


@pytest.mark.parametrize("convention", ["fixed-face", "infinity"])
def test_samples_are_delaunay(convention):
    cfg = helpers.random_config(np.random.default_rng(5), 4, convention)
    res = run_chain(cfg, 1000, 0.2, seed=2, thin=10)
    assert len(res.samples) == 100
    for s in res.samples:
        t = delaunay_build(s.config)
        assert validate_delaunay(t).ok
        assert math.isfinite(s.log_measure)


def test_audit_detects_drift():
    cfg = helpers.random_inside(np.random.default_rng(6), 3)
    state = init_state(cfg)
    assert audit(state) < 1e-9
    with pytest.raises(AuditMismatch):
        audit(ChainState(cfg, state.log_measure + 1e-6))


def test_audit_runs_inside_chain():
    cfg = helpers.random_inside(np.random.default_rng(7), 2)
    steps = list(iter_chain(cfg, 50, 0.05, seed=3, audit_every=10))
    assert len(steps) == 50 and steps[-1].step == 50


def test_run_chains_independent_and_reproducible():
    cfg = helpers.random_inside(np.random.default_rng(8), 2)
    a = run_chains(cfg, 3, 200, 0.05, seed=9, thin=50)
    b = run_chains(cfg, 3, 200, 0.05, seed=9, thin=50, workers=3)
    for x, y in zip(a, b):
        assert np.array_equal(free_points(x.samples), free_points(y.samples))
    assert not np.array_equal(free_points(a[0].samples), free_points(a[1].samples))


def test_invalid_arguments():
    cfg = helpers.tetrahedron()
    state = init_state(cfg)
    with pytest.raises(ValueError):
        mh_step(state, 0.0, np.random.default_rng(0))
    with pytest.raises(ValueError):
        run_chain(cfg, 10, 0.1, thin=0)
    with pytest.raises(ValueError):
        init_state(cfg, target="uniform")
