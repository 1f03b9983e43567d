"""Exact-arithmetic derivation of frozen reference values (run by hand).

Uses sympy rationals only: the Stein equation is solved as a linear system
in the unknown entries, finite horizons by exact iteration.  Output is the
body of ``reference_values.py``.  Not collected by pytest.
"""

import sympy as sp

R = sp.Rational


def companion(coeffs):
    n = len(coeffs) - 1
    A = sp.zeros(n, n)
    for k in range(n - 1):
        A[k, k + 1] = 1
    for k in range(n):
        A[n - 1, k] = -coeffs[k]
    return A


def stein_exact(A, Q):
    n = A.shape[0]
    syms = sp.symbols(f"p0:{n * n}")
    P = sp.Matrix(n, n, syms)
    sol = sp.solve(list(A * P * A.T - P + Q), syms, dict=True)[0]
    return P.subs(sol)


def iterate_exact(A, Q, P0, t):
    P = P0
    for _ in range(t):
        P = A * P * A.T + Q
    return P


def rows(M):
    return "[" + ", ".join("[" + ", ".join(f'"{x}"' for x in M.row(k)) + "]"
                           for k in range(M.shape[0])) + "]"


def main():
    three = [R(-1, 6), R(5, 4), R(-31, 12), 1]
    A1 = companion(three)
    Q1 = sp.zeros(3, 3)
    Q1[2, 2] = 1
    P1 = stein_exact(A1, Q1)
    print("THREE_MODE_STEIN =", rows(P1))
    print("THREE_MODE_TOEPLITZ =", "[" + ", ".join(f'"{P1[0, k]}"' for k in range(3)) + "]")
    print("THREE_MODE_FINITE_INVERSE = {")
    for t in range(3, 11):
        Pt = iterate_exact(A1, Q1, sp.zeros(3, 3), t)
        print(f"    {t}: {rows(Pt.inv())},")
    print("}")
    double = [R(9, 4), R(-21, 2), R(61, 4), -7, 1]
    A4 = companion(double)
    Q4 = sp.zeros(4, 4)
    Q4[3, 3] = 1
    P4 = stein_exact(A4, Q4)
    print("DOUBLE_PAIR_STEIN =", rows(P4))
    print("DOUBLE_PAIR_STEIN_INVERSE =", rows(P4.inv()))


if __name__ == "__main__":
    main()
