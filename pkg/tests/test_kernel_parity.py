"""The compiled kernel and the pure-Python fallback must agree exactly."""

import json
import os
import subprocess
import sys

import pytest

import cqsl2

SCRIPT = r"""
import json
from cqsl2 import IMPLEMENTATION
from cqsl2.scalar import root_of_unity, scalar_to_json
from cqsl2.dirac import spectrum
from cqsl2.curvature import ricci
ctx = root_of_unity(5)
x = ctx.q + 2
y = ctx.from_coeffs([1, -3, 0, 7])
vals = [x * y, x / y, x ** 9 - y, y.inverse()]
out = {
    "impl": IMPLEMENTATION,
    "arith": [scalar_to_json(v) for v in vals],
    "spectrum": [(e.m, e.dim, e.generalized_dim) for e in spectrum(ctx)],
    "ricci": ricci(ctx).to_json(),
}
print(json.dumps(out, sort_keys=True))
"""


def _run(pure):
    env = dict(os.environ)
    env.pop("CQSL2_PURE_PYTHON", None)
    if pure:
        env["CQSL2_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, check=True, text=True)
    return json.loads(out.stdout)


@pytest.mark.skipif(cqsl2.IMPLEMENTATION != "cython", reason="compiled kernel not built")
def test_compiled_and_fallback_agree():
    fast, slow = _run(False), _run(True)
    assert fast.pop("impl") == "cython"
    assert slow.pop("impl") == "python"
    assert fast == slow


def test_fallback_selectable():
    assert _run(True)["impl"] == "python"
