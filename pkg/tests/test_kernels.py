from __future__ import annotations

import os
import subprocess
import sys

import pytest

from wilfcollapse import _pykernels, perm
from wilfcollapse.perm import permutations_of

from oracles import brute_contains

try:
    from wilfcollapse import _ckernels
except ImportError:
    _ckernels = None

KERNELS = [pytest.param(_pykernels.contains, id="python"),
           pytest.param(getattr(_ckernels, "contains", None), id="cython",
                        marks=pytest.mark.skipif(_ckernels is None, reason="extension not built"))]


@pytest.mark.parametrize("kernel", KERNELS)
def test_kernel_exhaustive(kernel):
    for n in range(7):
        texts = [p.entries for p in permutations_of(n)]
        for k in range(n + 1):
            for p in permutations_of(k):
                pe = p.entries
                for t in texts:
                    assert kernel(pe, t) == brute_contains(pe, t), (pe, t)


@pytest.mark.parametrize("kernel", KERNELS)
def test_kernel_long_text(kernel):
    t = (3, 1, 5, 2, 4) * 1
    assert kernel((1, 2, 3), t)
    assert not kernel((3, 2, 1), t)
    up = tuple(range(1, 41))
    assert kernel((1, 2, 3, 4, 5), up)
    assert not kernel((2, 1), up)


def test_neighbour_table():
    lo, hi = _pykernels.neighbour_table((2, 4, 1, 3))
    assert lo == [-1, 0, -1, 0]
    assert hi == [-1, -1, 0, 1]


def test_backend_selected_at_import():
    expected = "cython" if _ckernels is not None else "python"
    assert perm.BACKEND == expected


def test_pure_python_fallback_via_environment():
    env = dict(os.environ, WILFCOLLAPSE_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import wilfcollapse.perm as p; print(p.BACKEND, p.contains('123', '31524'))"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "True"]
