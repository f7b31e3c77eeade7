"""The compiled and pure-python kernel sets must be indistinguishable."""

import json
import os
import subprocess
import sys

import pytest

BATTERY = os.path.join(os.path.dirname(__file__), "_parity_battery.py")


def _run(backend: str) -> dict:
    env = dict(os.environ, ETAPRIME_BACKEND=backend)
    p = subprocess.run(
        [sys.executable, BATTERY],
        capture_output=True, text=True, env=env, timeout=570,
    )
    assert p.returncode == 0, p.stderr[-2000:]
    return json.loads(p.stdout)


def test_backends_agree_everywhere():
    numba_out = _run("numba")
    numpy_out = _run("numpy")
    assert numba_out.pop("backend") == "numba"
    assert numpy_out.pop("backend") == "numpy"
    assert numba_out == numpy_out


def test_invalid_backend_rejected():
    env = dict(os.environ, ETAPRIME_BACKEND="cuda")
    p = subprocess.run(
        [sys.executable, "-c", "import etaprime"],
        capture_output=True, text=True, env=env, timeout=120,
    )
    assert p.returncode != 0
    assert "ETAPRIME_BACKEND" in p.stderr


def test_backend_flag_reported():
    for backend in ("numba", "numpy"):
        env = dict(os.environ, ETAPRIME_BACKEND=backend)
        p = subprocess.run(
            [sys.executable, "-c", "import etaprime; print(etaprime.BACKEND)"],
            capture_output=True, text=True, env=env, timeout=300,
        )
        assert p.returncode == 0
        assert p.stdout.strip() == backend
