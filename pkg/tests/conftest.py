"""Shared builders for the test suite.

Statistical tests in this suite pin their seeds. Tolerances are either exact
(structural assertions) or derived from binomial/KS error bounds at the stated
sample size; each test states which.
"""

import numpy as np
import pytest

import wmhash as wm


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(num, label): release-gate criterion, one summary line each")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None and report.when == "call":
        report.user_properties.append(
            ("acceptance", (mark.args[0], mark.args[1], report.outcome)))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    found = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            for name, value in getattr(rep, "user_properties", []):
                if name == "acceptance":
                    found.append(value)
    if not found:
        return
    terminalreporter.section("acceptance criteria")
    words = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}
    for num, label, outcome in sorted(found, key=lambda t: t[0]):
        terminalreporter.write_line(
            f"criterion {num:2d}: {words.get(outcome, outcome.upper())}  {label}")


def binom4(p: float, n: int) -> float:
    """Four-sigma binomial half-width for a collision fraction near p."""
    return 4.0 * np.sqrt(p * (1.0 - p) / n)


def integer_pair():
    """Two small integer-weight sets with generalized Jaccard exactly 0.4.

    min/max sums: (1 + 1) / (2 + 3) = 0.4. Weights are integers so the
    subelement-expansion sketchers are exact at quant_scale=1.
    """
    a = wm.make_weighted_set(4, {0: 2.0, 1: 1.0})
    b = wm.make_weighted_set(4, {0: 1.0, 1: 3.0})
    return a, b


def pareto_weights(rng, n, exponent=5.0, scale=0.05, grid=1024):
    """Pareto draws snapped down to the 1/grid lattice (never to zero)."""
    w = scale * rng.random(n) ** (-1.0 / (exponent - 1.0))
    return np.maximum(1, np.floor(w * grid)) / grid


def pareto_pairs(n_pairs, seed, exponent=5.0, scale=0.05, universe=200,
                 nnz=20, shared_lo=4, shared_hi=16, equal_shared=True):
    """Seeded random set pairs with a common element block.

    Each set has ``nnz`` elements; the pair shares a block of between
    ``shared_lo`` and ``shared_hi`` elements. With ``equal_shared`` the block
    carries identical weights in both sets (the regime where every collision
    law in the library is exact or near-exact); otherwise the block weights
    are drawn independently per set.
    """
    rng = np.random.default_rng([seed, 0xC1])
    pairs = []
    for _ in range(n_pairs):
        n_sh = int(rng.integers(shared_lo, shared_hi + 1))
        ids = rng.choice(universe, size=2 * nnz - n_sh, replace=False)
        sh = ids[:n_sh].tolist()
        a_only = ids[n_sh:nnz].tolist()
        b_only = ids[nnz:].tolist()
        sh_w = pareto_weights(rng, n_sh, exponent, scale)
        sh_w_b = sh_w if equal_shared else pareto_weights(rng, n_sh, exponent, scale)
        a = wm.make_weighted_set(
            universe,
            dict(zip(sh, sh_w)) | dict(zip(a_only, pareto_weights(rng, nnz - n_sh, exponent, scale))),
        )
        b = wm.make_weighted_set(
            universe,
            dict(zip(sh, sh_w_b)) | dict(zip(b_only, pareto_weights(rng, nnz - n_sh, exponent, scale))),
        )
        pairs.append((a, b))
    return pairs


def collision(algo, a, b, cfg, layout=None):
    fa = wm.sketch(algo, a, cfg, layout=layout)
    fb = wm.sketch(algo, b, cfg, layout=layout)
    return wm.collision_similarity(fa, fb)


@pytest.fixture
def small_set():
    return wm.make_weighted_set(16, {1: 0.5, 4: 1.25, 7: 0.8, 9: 2.0})
