"""The compiled jet kernel and the numpy fallback must be interchangeable."""

import numpy as np
import pytest

from biconserve.jets import JetSpace
from biconserve.jets import _jetcore_py


def _compiled():
    try:
        from biconserve.jets import _jetcore  # type: ignore[attr-defined]
    except ImportError:
        return None
    return _jetcore


@pytest.mark.skipif(_compiled() is None, reason="compiled kernel not built")
def test_backends_agree_on_random_jets():
    impl = _compiled()
    rng = np.random.default_rng(77)
    for nvars in (1, 2, 4, 5):
        space = JetSpace.get(nvars)
        for order in range(5):
            t = space.mul_tables[order]
            n = space.ncoef[order]
            for _ in range(20):
                a = rng.normal(size=n)
                b = rng.normal(size=n)
                out_c = np.zeros(n)
                out_p = np.zeros(n)
                impl.mul_into(out_c, a, b, t.i, t.j, t.k)
                _jetcore_py.mul_into(out_p, a, b, t.i, t.j, t.k)
                assert np.max(np.abs(out_c - out_p)) < 1e-13 * (1 + np.max(np.abs(out_c)))


def test_forced_fallback_env(monkeypatch):
    import subprocess
    import sys

    code = (
        "import os; os.environ['BICONSERVE_PURE'] = '1';"
        "import sys; sys.path.insert(0, 'src');"
        "from biconserve.jets import backend_name;"
        "print(backend_name())"
    )
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True,
                          text=True, cwd=str(__import__("pathlib").Path(__file__).parent.parent))
    assert proc.returncode == 0
    assert proc.stdout.strip() == "python"


def test_active_backend_reports_name():
    from biconserve.jets import backend_name

    assert backend_name() in ("compiled", "python")
