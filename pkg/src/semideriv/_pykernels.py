"""Pure-Python matrix kernels; same signatures as the compiled ``_ckernels``.

Matrices are flat row-major tuples of length ``n * n``.
"""


def matmul_maxmin(a, b, n):
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            best = 0
            for k in range(n):
                x = row[k]
                y = b[k * n + j]
                m = x if x < y else y
                if m > best:
                    best = m
            out.append(best)
    return tuple(out)


def matadd_maxmin(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def matmul_sumprod(a, b, n):
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            s = row[0] * b[j]
            for k in range(1, n):
                s = s + row[k] * b[k * n + j]
            out.append(s)
    return tuple(out)


def matadd_sumprod(a, b):
    return tuple(x + y for x, y in zip(a, b))


def matmul_maxplus(a, b, n, neginf):
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            best = neginf
            for k in range(n):
                x = row[k]
                y = b[k * n + j]
                if x is neginf or y is neginf:
                    continue
                s = x + y
                if best is neginf or s > best:
                    best = s
            out.append(best)
    return tuple(out)


def matadd_maxplus(a, b, neginf):
    out = []
    for x, y in zip(a, b):
        if x is neginf:
            out.append(y)
        elif y is neginf or x >= y:
            out.append(x)
        else:
            out.append(y)
    return tuple(out)


def matmul_generic(a, b, n, add, mul, zero):
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            s = zero
            for k in range(n):
                s = add(s, mul(row[k], b[k * n + j]))
            out.append(s)
    return tuple(out)


def matadd_generic(a, b, add):
    return tuple(add(x, y) for x, y in zip(a, b))
