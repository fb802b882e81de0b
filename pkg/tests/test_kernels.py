import importlib
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import fixture, small_corpus
from gentle import _pykernels, kernels

try:
    from gentle import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
CORPUS = small_corpus(4)


def test_selected_implementation_is_reported():
    assert kernels.IMPLEMENTATION in ("cython", "python")
    if _ckernels is not None and not os.environ.get("GENTLE_PURE_PYTHON"):
        assert kernels.IMPLEMENTATION == "cython"


def test_environment_variable_forces_fallback():
    env = dict(os.environ, GENTLE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from gentle import kernels; print(kernels.IMPLEMENTATION)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_compiled
@settings(max_examples=200)
@given(st.sampled_from(CORPUS))
def test_compiled_and_python_kernels_agree(p):
    td = p.token_data
    assert _ckernels.phi_pairs(td.succ, td.fsucc) == _pykernels.phi_pairs(td.succ, td.fsucc)
    assert _ckernels.canonical_code(td.succ) == _pykernels.canonical_code(td.succ)
    for start in range(len(td.succ)):
        assert _ckernels.traversal_order(start, td.succ) == _pykernels.traversal_order(start, td.succ)


def test_python_kernel_on_single_arrow():
    td = fixture("a2").token_data
    assert _pykernels.phi_pairs(td.succ, td.fsucc) == [(3, 1)]


def test_traversal_visits_every_token():
    for p in CORPUS[:50]:
        succ = p.token_data.succ
        order = _pykernels.traversal_order(0, succ)
        assert sorted(order) == list(range(len(succ)))


def test_reload_is_stable():
    assert importlib.reload(kernels).phi_pairs is not None


@needs_compiled
def test_benchmark_runs(capsys):
    import runpy
    from pathlib import Path

    bench = runpy.run_path(str(Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"))
    assert bench["main"](["-n", "3", "--repeat", "1"]) == 0
    assert "phi_pairs" in capsys.readouterr().out
