"""Independent reference values for the test suite.

Everything here is computed with mpmath / numpy / scipy from the defining
equations, without touching the C++ code. Run once and paste the output into
tests/oracle_values.hpp; the numbers are frozen there.
"""
import mpmath as mp
import numpy as np
from scipy import optimize

mp.mp.dps = 40
E = 2 * mp.sqrt(mp.mpf(2) / 3)


def r(z):
    z = mp.mpc(z)
    return mp.mpf(3) / 4 * (-z + mp.sqrt(z - E) * mp.sqrt(z + E))


def semicircle_cdf(x):
    dens = lambda t: 3 / (4 * mp.pi) * mp.sqrt(max(E**2 - t**2, 0))
    return mp.quad(dens, [-E, x])


def fixed_point(z, tau):
    z = mp.mpc(z)
    a0 = r(z) / 3
    f = lambda a, b: [a + 1 / (3 * (2 * b + z)), b + 1 / (3 * (a + z - tau * b))]
    a, b = mp.findroot(f, (a0, a0))
    return a, b, a + 2 * b


def cubic_discriminant_edge(tau):
    # real z where the cubic in b acquires a double root, largest one
    def disc(z):
        c3, c2, c1, c0 = -6 * tau, 6 * z - 3 * tau * z, 1 + 3 * z * z, z
        return (18 * c3 * c2 * c1 * c0 - 4 * c2**3 * c0 + c2**2 * c1**2 - 4 * c3 * c1**3 - 27 * c3**2 * c0**2)
    zs = np.linspace(0.5, 4, 3501)
    vals = [float(disc(mp.mpf(z))) for z in zs]
    roots = []
    for i in range(len(zs) - 1):
        if vals[i] == 0 or vals[i] * vals[i + 1] < 0:
            roots.append(mp.findroot(disc, (mp.mpf(zs[i]), mp.mpf(zs[i + 1])), solver="bisect"))
    return max(roots)


def rr(x):
    return float(r(x).real)


def first_system(x, b1, b2, al):
    l, r1, r2 = x
    q = rr(l)
    h = -1 / q
    return [l + q - b1 * r1**3 - b2 * r2**3,
            h * r1 - (b1 * r1**2 + b2 * al * r2**2),
            h * r2 - (b1 * al * r1**2 + b2 * r2**2)]


def ab_real(z, tau):
    a, b, _ = fixed_point(z, tau)
    return float(a.real), float(b.real)


def second_system(x, b1, b2, al, g, l1, rho1):
    l2, t1, t2, q1, q2, k, eta = x
    B = [b1, b2]
    A = [[1, al], [al, 1]]
    th, rh, R1 = [t1, t2], [q1, q2], rho1
    tau = g * k * k - 1 + k * (g - 1)
    a, b = ab_real(l2, tau)
    q = a + 2 * b
    fq = l2 + q
    rl1 = rr(l1)
    S1 = sum(B[i] * R1[i] * rh[i] ** 2 for i in range(2))
    out = [fq - g * k * eta**2 / 3 * rl1 - 2 * g * k * k * b - (sum(B[i] * th[i] * rh[i] ** 2 for i in range(2)) - g * k * S1)]
    for j in range(2):
        out.append((fq - a) * th[j] - g * R1[j] * (eta**2 / 3 * rl1 + 2 * k * b)
                   - (sum(B[i] * A[i][j] * rh[i] ** 2 for i in range(2)) - g * R1[j] * S1))
    out.append((l2 + 2 * (1 - g) * b) * k - (1 - g) * (S1 - eta**2 / 3 * rl1))
    for j in range(2):
        out.append((fq - (1 + g * k * k) * b) * rh[j] - sum(B[i] * th[i] * rh[i] * A[i][j] for i in range(2))
                   + g * k * (sum(B[i] * R1[i] * rh[i] * A[i][j] for i in range(2)) - R1[j] * eta / 3 * rl1))
    out.append((l2 + a + (1 - g * k * k) * b - g * k / 3 * rl1) * eta
               - sum(B[i] * th[i] * R1[i] * rh[i] for i in range(2)) + g * k * sum(B[i] * R1[i] ** 2 * rh[i] for i in range(2)))
    return out


def main():
    print("// r(z) on the real axis right of the edge")
    for z in [1.7, 2.0, 3.0, 5.0, 12.0]:
        print(f"{{{z}, {mp.nstr(r(z).real, 17)}}},")
    print("// r at complex z")
    for z in [mp.mpc(0.5, 0.3), mp.mpc(-1.2, 0.05), mp.mpc(2, 1)]:
        v = r(z)
        print(f"{{{{{float(z.real)}, {float(z.imag)}}}, {{{mp.nstr(v.real, 17)}, {mp.nstr(v.imag, 17)}}}}},")
    print("// semicircle cdf")
    for x in [-1.5, -0.7, 0.0, 0.4, 1.2, 1.6]:
        print(f"{{{x}, {mp.nstr(semicircle_cdf(x), 17)}}},")
    print("// fixed point (a, b, q) at (z, tau)")
    for z, tau in [(3.0, -0.5), (2.2, -0.3), (mp.mpc(1.0, 0.5), -0.5), (mp.mpc(0.3, 0.2), -1.5), (4.0, -1.8)]:
        a, b, q = fixed_point(z, tau)
        zc = mp.mpc(z)
        print(f"{{{{{float(zc.real)}, {float(zc.imag)}}}, {tau}, {{{mp.nstr(a.real, 17)}, {mp.nstr(a.imag, 17)}}}, "
              f"{{{mp.nstr(b.real, 17)}, {mp.nstr(b.imag, 17)}}}, {{{mp.nstr(q.real, 17)}, {mp.nstr(q.imag, 17)}}}}},")
    print("// right support edge")
    for tau in [-1.0, -0.8, -0.5, -0.25, -1.5]:
        print(f"{{{tau}, {mp.nstr(cubic_discriminant_edge(tau), 17)}}},")

    print("// first step")
    firsts = {}
    for (b1, b2, al), x0 in [((10, 8, 0.6), (11, 0.9, 0.7)), ((20, 15, 0.8), (22, 0.95, 0.9)),
                             ((6, 5, 0.5), (7.3, 0.93, 0.8)), ((12, 5, 0.5), (13, 0.99, 0.6))]:
        sol = optimize.fsolve(first_system, x0, args=(b1, b2, al), xtol=1e-14)
        firsts[(b1, b2, al)] = sol
        print(f"{{{{{b1}, {b2}, {al}}}, {float(sol[0])!r}, {float(sol[1])!r}, {float(sol[2])!r}}},")

    print("// second step")
    cases = [((10, 8, 0.6), 1.0, (3.7, -0.34, 0.53, 0.35, 0.95, 0.0, 0.65)),
             ((10, 8, 0.6), 0.8, (4.0, -0.2, 0.8, 0.3, 0.97, 0.3, 0.6)),
             ((12, 5, 0.5), 1.0, (3.8, -0.12, 0.79, 0.43, 0.99, 0.0, 0.49)),
             ((12, 5, 0.5), 0.8, (4.0, 0.14, 0.92, 0.43, 0.99, 0.26, 0.53))]
    for (m, g, x0) in cases:
        f = firsts[m]
        sol = optimize.fsolve(second_system, x0, args=(*m, g, f[0], [f[1], f[2]]), xtol=1e-14)
        res = max(abs(v) for v in second_system(sol, *m, g, f[0], [f[1], f[2]]))
        print(f"{{{{{m[0]}, {m[1]}, {m[2]}}}, {g}, {{{', '.join(repr(float(v)) for v in sol)}}}}},  // residual {res:.1e}")

    print("// symmetric eigenvalues of A_ij = 1/(1+|i-j|) + cos(i*j)/(i+j+1), n = 12")
    n = 12
    A = np.array([[1 / (1 + abs(i - j)) + np.cos(i * j) / (i + j + 1) for j in range(n)] for i in range(n)])
    print(", ".join(repr(float(v)) for v in np.linalg.eigvalsh(A)))


if __name__ == "__main__":
    main()
