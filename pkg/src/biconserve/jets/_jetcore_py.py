"""Pure-numpy fallback for the jet multiplication kernel."""

import numpy as np

BACKEND = "python"


def mul_into(out, a, b, ti, tj, tk):
    out += np.bincount(tk, weights=a[ti] * b[tj], minlength=out.shape[0])
