"""The compiled kernels and the Python fallback must agree bit for bit."""
import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varietydvfs import _kernels_py, kernels

compiled = pytest.importorskip("varietydvfs._kernels", reason="Cython extension not built")

floats = st.floats(1e6, 5e10)


@settings(max_examples=300, deadline=None)
@given(
    work=st.lists(floats, min_size=0, max_size=30),
    freqs=st.lists(st.floats(0.2, 5.0), min_size=1, max_size=5, unique=True),
    budget=st.floats(0.01, 50),
    extra=st.floats(0, 5),
    p_idle=st.floats(0, 200),
    u=st.floats(0.01, 1),
    slot_average=st.booleans(),
)
def test_select_frequencies_identical(work, freqs, budget, extra, p_idle, u, slot_average):
    freqs = sorted(freqs)
    fz = [f * 1e9 for f in freqs]
    pf = [p_idle + 50 * f**3 for f in freqs]
    args = (work, budget, budget + extra, fz, pf, p_idle, u, slot_average)
    for a, b in zip(compiled.select_frequencies(*args), _kernels_py.select_frequencies(*args)):
        assert a.dtype == b.dtype
        np.testing.assert_array_equal(a, b)


@settings(max_examples=300, deadline=None)
@given(
    rows=st.lists(st.tuples(floats, st.floats(0.2, 5.0)), min_size=0, max_size=30),
    ts=st.floats(0.01, 50),
    p_idle=st.floats(0, 200),
    u=st.floats(0.01, 1),
    slot_average=st.booleans(),
)
def test_run_timeline_identical(rows, ts, p_idle, u, slot_average):
    cycles = [c for c, _ in rows]
    fz = [f * 1e9 for _, f in rows]
    pf = [p_idle + 50 * f**3 for _, f in rows]
    deadline = max(len(rows), 1) * ts
    args = (cycles, fz, pf, ts, deadline, p_idle, u, slot_average)
    for a, b in zip(compiled.run_timeline(*args), _kernels_py.run_timeline(*args)):
        np.testing.assert_array_equal(a, b)


def test_dispatch_prefers_compiled():
    if os.environ.get("VARIETYDVFS_PURE") == "1":
        assert kernels.BACKEND == "python"
    else:
        assert kernels.BACKEND == "cython"
        assert kernels.run_timeline is compiled.run_timeline


def test_pure_env_forces_fallback():
    code = "import varietydvfs.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, VARIETYDVFS_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_end_to_end_backends_agree(tmp_path):
    """A whole sweep writes byte-identical JSON under either backend."""
    outputs = []
    for pure in ("0", "1"):
        out = tmp_path / pure
        env = dict(os.environ, VARIETYDVFS_PURE=pure)
        subprocess.run(
            [sys.executable, "-m", "varietydvfs", "sweep-variety", "--config", "builtin:benchmarks",
             "--seeds", "0-3", "--format", "json", "--out", str(out)],
            env=env, check=True, capture_output=True,
        )
        outputs.append((out / "variety-sweep.json").read_bytes())
    assert outputs[0] == outputs[1]
