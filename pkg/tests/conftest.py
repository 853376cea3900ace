import json
from pathlib import Path

import numpy as np
import pytest

from spectral_cat import _backend, _newton_py, cat
from spectral_cat.recon import build_diff_matrix
from spectral_cat.spectra import WHITE_POINTS, builtin_cmf, normalize_illuminant

try:
    from spectral_cat import _newton
except ImportError:  # extension not built
    _newton = None

ACCEPTANCE_LINES = []

GRID = np.linspace(0.0, 1.0, 36)


def smooth_log_curves(rng, m, bumps=4, scale=1.0):
    """Random smooth curves on the band grid: sums of Gaussian bumps."""
    c = rng.uniform(-0.2, 1.2, (m, bumps))
    w = rng.uniform(0.05, 0.4, (m, bumps))
    a = rng.normal(0.0, scale, (m, bumps))
    return np.sum(a[:, :, None] * np.exp(
        -0.5 * ((GRID[None, None, :] - c[:, :, None]) / w[:, :, None]) ** 2), axis=1)


def random_illuminants(rng, m):
    return [normalize_illuminant(np.exp(s)) for s in smooth_log_curves(rng, m)]


def random_reflectances(rng, m, floor=1e-3):
    """Mix of smooth, rough and blocky reflectances in [floor, 1]."""
    kinds = rng.integers(0, 3, m)
    smooth = 1.0 / (1.0 + np.exp(-3.0 * smooth_log_curves(rng, m, 5, 1.5)))
    rough = rng.uniform(0.0, 1.0, (m, 36))
    block = np.full((m, 36), 0.02)
    for i in range(m):
        lo, hi = sorted(rng.integers(0, 37, 2))
        block[i, lo:hi] = 0.95
    out = np.where((kinds == 0)[:, None], smooth,
                   np.where((kinds == 1)[:, None], rough, block))
    return np.clip(out, floor, 1.0)


@pytest.fixture(scope="session")
def cmf():
    return builtin_cmf()


@pytest.fixture(scope="session")
def C():
    return build_diff_matrix()


@pytest.fixture(scope="session")
def ctx_a_d65():
    return {
        v: (cat.prepare_context(WHITE_POINTS["A"], WHITE_POINTS["D65"], 1.0, v),
            cat.prepare_context(WHITE_POINTS["D65"], WHITE_POINTS["A"], 1.0, v))
        for v in cat.VARIANTS
    }


BACKENDS = ["python"] + (["cython"] if _newton is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available Newton kernel."""
    mod = _newton_py if request.param == "python" else _newton
    monkeypatch.setattr(_backend, "newton_solve", mod.newton_solve)
    monkeypatch.setattr(_backend, "newton_batch", mod.newton_batch)
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def write_dataset(directory, stem, src_wp, dst_wp, src, dst, *, name=None,
                  scale="0-1"):
    """Write a corresponding-color CSV and its JSON sidecar."""
    directory = Path(directory)
    lines = ["sample_id,Xs,Ys,Zs,Xd,Yd,Zd"]
    for k, (s, d) in enumerate(zip(src, dst)):
        lines.append(",".join([f"s{k:03d}"] + [repr(float(v)) for v in (*s, *d)]))
    (directory / f"{stem}.csv").write_text("\n".join(lines) + "\n")
    (directory / f"{stem}.json").write_text(json.dumps({
        "name": name or stem, "scale": scale,
        "src_wp": [float(v) for v in src_wp], "dst_wp": [float(v) for v in dst_wp],
        "source_provenance": "synthetic test fixture"}))
    return directory / f"{stem}.csv"
