"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Same signatures and return codes; used when the extension is not built.
"""


def thomas(sub, diag, sup, rhs, out):
    n = len(diag)
    a, d, c, r = list(sub), list(diag), list(sup), list(rhs)
    cp = [0.0] * n
    x = [0.0] * n
    piv = d[0]
    if piv == 0.0:
        return 1
    if n > 1:
        cp[0] = c[0] / piv
    x[0] = r[0] / piv
    for i in range(1, n):
        piv = d[i] - a[i - 1] * cp[i - 1]
        if piv == 0.0:
            return i + 1
        if i < n - 1:
            cp[i] = c[i] / piv
        x[i] = (r[i] - a[i - 1] * x[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    out[:] = x
    return 0


def block_thomas2(sub, diag, sup, rhs, out):
    n = len(diag)
    A = sub.reshape(-1, 4).tolist() if n > 1 else []
    D = diag.reshape(-1, 4).tolist()
    C = sup.reshape(-1, 4).tolist() if n > 1 else []
    R = rhs.tolist()
    cp = [None] * n
    x = [None] * n
    for i in range(n):
        m00, m01, m10, m11 = D[i]
        r0, r1 = R[i]
        if i > 0:
            a00, a01, a10, a11 = A[i - 1]
            c00, c01, c10, c11 = cp[i - 1]
            m00 -= a00 * c00 + a01 * c10
            m01 -= a00 * c01 + a01 * c11
            m10 -= a10 * c00 + a11 * c10
            m11 -= a10 * c01 + a11 * c11
            y0, y1 = x[i - 1]
            r0 -= a00 * y0 + a01 * y1
            r1 -= a10 * y0 + a11 * y1
        det = m00 * m11 - m01 * m10
        if det == 0.0:
            return i + 1
        i00, i01, i10, i11 = m11 / det, -m01 / det, -m10 / det, m00 / det
        if i < n - 1:
            c00, c01, c10, c11 = C[i]
            cp[i] = (
                i00 * c00 + i01 * c10,
                i00 * c01 + i01 * c11,
                i10 * c00 + i11 * c10,
                i10 * c01 + i11 * c11,
            )
        x[i] = (i00 * r0 + i01 * r1, i10 * r0 + i11 * r1)
    for i in range(n - 2, -1, -1):
        y0, y1 = x[i + 1]
        c00, c01, c10, c11 = cp[i]
        x0, x1 = x[i]
        x[i] = (x0 - (c00 * y0 + c01 * y1), x1 - (c10 * y0 + c11 * y1))
    out[:, :] = x
    return 0
