"""Dense linear algebra over a field (lists of lists of field elements)."""


class SingularLinearSystem(ArithmeticError):
    pass


def rref(M, zero=None):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    A = [list(r) for r in M]
    if not A:
        return A, []
    n = len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        p = None
        for i in range(r, len(A)):
            if not A[i][c].is_zero():
                p = i
                break
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        row = A[r]
        for i in range(len(A)):
            if i != r:
                fct = A[i][c]
                if not fct.is_zero():
                    A[i] = [x - fct * y for x, y in zip(A[i], row)]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(M):
    return len(rref(M)[1])


def kernel(M, K, ncols=None):
    """Basis of the right kernel {x : M x = 0} as a list of vectors."""
    if not M:
        n = ncols
        return [[K.one if i == j else K.zero for i in range(n)] for j in range(n)]
    n = len(M[0])
    R, piv = rref(M)
    free = [c for c in range(n) if c not in piv]
    out = []
    for fc in free:
        v = [K.zero] * n
        v[fc] = K.one
        for row, pc in zip(R, piv):
            v[pc] = -row[fc]
        out.append(v)
    return out


def left_kernel(M, K):
    return kernel(transpose(M), K, len(M))


def transpose(M):
    return [list(r) for r in zip(*M)]


def solve(M, b, K):
    """The unique x with M x = b (M may be overdetermined but consistent)."""
    n = len(M[0])
    A = [list(r) + [bb] for r, bb in zip(M, b)]
    R, piv = rref(A)
    if n in piv:
        raise SingularLinearSystem("inconsistent system")
    if len(piv) < n:
        raise SingularLinearSystem("system is not uniquely solvable")
    x = [K.zero] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return x


def det(M, K):
    A = [list(r) for r in M]
    n = len(A)
    d = K.one
    for c in range(n):
        p = None
        for i in range(c, n):
            if not A[i][c].is_zero():
                p = i
                break
        if p is None:
            return K.zero
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d = d * A[c][c]
        inv = A[c][c].inverse()
        for i in range(c + 1, n):
            fct = A[i][c] * inv
            if not fct.is_zero():
                A[i] = [x - fct * y for x, y in zip(A[i], A[c])]
    return d


def inverse(M, K):
    n = len(M)
    A = [list(r) + [K.one if i == j else K.zero for j in range(n)]
         for i, r in enumerate(M)]
    R, piv = rref(A)
    if piv[:n] != list(range(n)):
        raise SingularLinearSystem("matrix is singular")
    return [row[n:] for row in R]


def matmul(A, B):
    Bt = transpose(B)
    out = []
    for r in A:
        row = []
        for c in Bt:
            s = r[0] * c[0]
            for x, y in zip(r[1:], c[1:]):
                s = s + x * y
            row.append(s)
        out.append(row)
    return out


def matvec(A, v):
    out = []
    for r in A:
        s = r[0] * v[0]
        for x, y in zip(r[1:], v[1:]):
            s = s + x * y
        out.append(s)
    return out


# ----------------------------------------------------------------------------
# F_2 linear algebra on bit vectors


def f2_solve(rows, rhs, n):
    """Solve a linear system over F_2; rows are int bitmasks over n unknowns.
    Returns one solution bitmask or None."""
    A = [(r, b) for r, b in zip(rows, rhs)]
    piv = []
    out = []
    for c in range(n):
        k = None
        for i, (r, b) in enumerate(A):
            if r >> c & 1:
                k = i
                break
        if k is None:
            continue
        pr, pb = A.pop(k)
        A = [(r ^ pr, b ^ pb) if r >> c & 1 else (r, b) for r, b in A]
        out = [(r ^ pr, b ^ pb) if r >> c & 1 else (r, b) for r, b in out]
        out.append((pr, pb))
        piv.append(c)
    if any(b for r, b in A):
        return None
    x = 0
    for (r, b), c in zip(out, piv):
        if b:
            x |= 1 << c
    return x
