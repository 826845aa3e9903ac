import numpy as np

from .core import admissible_vertices_jit, mark_inadmissible_jit, mark_patterns_jit


def mark_patterns(n, patterns):
    """Unpacked 2**n mark array with a 1 at every pattern value."""
    marks = np.zeros(1 << n, dtype=np.uint8)
    mark_patterns_jit(marks, np.ascontiguousarray(patterns, dtype=np.int64))
    return marks


def mark_inadmissible(n, xsupports):
    """Unpacked 2**n mark array with a 1 at every i having odd overlap with some support."""
    marks = np.zeros(1 << n, dtype=np.uint8)
    xsupports = np.unique(np.asarray(xsupports, dtype=np.int64))
    xsupports = xsupports[xsupports != 0]
    if xsupports.size:
        mark_inadmissible_jit(marks, np.ascontiguousarray(xsupports))
    return marks


def admissible_vertices(cl, d):
    """0 followed by every s > 0 with cl[s] == 0 and d[s] == 0, ascending."""
    cl = np.ascontiguousarray(cl, dtype=np.uint8)
    d = np.ascontiguousarray(d, dtype=np.uint8)
    out = np.empty(cl.shape[0], dtype=np.int64)
    count = admissible_vertices_jit(cl, d, out)
    return out[:count]
