"""Independent reference computations in plain Python loops.

These deliberately avoid the package's SVD path: least squares goes through
the normal equations solved by Gaussian elimination, and covariance meats
are accumulated pair by pair.
"""


def gauss_solve(A, b):
    n = len(A)
    M = [list(map(float, A[i])) + [float(b[i])] for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        M[col], M[piv] = M[piv], M[col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            for c in range(col, n + 1):
                M[r][c] -= f * M[col][c]
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        x[i] = (M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))) / M[i][i]
    return x


def inverse(A):
    n = len(A)
    cols = [gauss_solve(A, [1.0 if i == j else 0.0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def normal_equations_ols(X, y):
    rows, k = len(X), len(X[0])
    XtX = [[sum(X[t][i] * X[t][j] for t in range(rows)) for j in range(k)] for i in range(k)]
    Xty = [sum(X[t][i] * y[t] for t in range(rows)) for i in range(k)]
    return gauss_solve(XtX, Xty)


def matmul(A, B):
    return [[sum(A[i][m] * B[m][j] for m in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def hac_bruteforce(X, u, L, kernel="truncated"):
    """(X'X)^-1 S (X'X)^-1 with S summed over every pair |t - t'| <= L."""
    n, k = len(X), len(X[0])
    S = [[0.0] * k for _ in range(k)]
    for t in range(n):
        for tp in range(n):
            lag = abs(t - tp)
            if lag > L:
                continue
            w = 1.0 if (kernel == "truncated" or lag == 0) else 1.0 - lag / (L + 1.0)
            for i in range(k):
                for j in range(k):
                    S[i][j] += w * u[t] * u[tp] * X[t][i] * X[tp][j]
    XtX = [[sum(X[t][i] * X[t][j] for t in range(n)) for j in range(k)] for i in range(k)]
    B = inverse(XtX)
    return matmul(matmul(B, S), B)


def ar_recursion(const, phi, history, H):
    """Iterated AR forecast written out term by term."""
    hist = list(history)
    out = []
    for _ in range(H):
        value = const
        for i, coef in enumerate(phi):
            value += coef * hist[len(hist) - 1 - i]
        out.append(value)
        hist.append(value)
    return out
