import numba


@numba.jit(
    numba.void(
        numba.uint8[::1],
        numba.int64[::1],
    ),
    nopython=True,
    nogil=True,
)
def mark_patterns_jit(marks, patterns):
    for k in range(patterns.shape[0]):
        marks[patterns[k]] = 1


@numba.jit(
    numba.void(
        numba.uint8[::1],
        numba.int64[::1],
    ),
    nopython=True,
    nogil=True,
)
def mark_inadmissible_jit(marks, xsupports):
    size = marks.shape[0]
    for k in range(xsupports.shape[0]):
        u = xsupports[k]
        for i in range(size):
            x = i & u
            p = 0
            while x:
                x &= x - 1
                p ^= 1
            if p:
                marks[i] = 1


@numba.jit(
    numba.int64(
        numba.uint8[::1],
        numba.uint8[::1],
        numba.int64[::1],
    ),
    nopython=True,
    nogil=True,
)
def admissible_vertices_jit(cl, d, out):
    out[0] = 0
    count = 1
    for s in range(1, cl.shape[0]):
        if cl[s] == 0 and d[s] == 0:
            out[count] = s
            count += 1
    return count
