"""Regenerate tests/reference_values.py with mpmath at 30 digits.

Nothing here imports oscix.  Every number comes from direct numerical
quadrature (mpmath.quad on the rotated ray or on the real line) or from
mpmath's own Taylor differentiation, so the frozen values are an independent
check of the package's closed forms, jets and index-set bookkeeping.

    python3 tests/make_reference.py > tests/reference_values.py
"""

from fractions import Fraction
from itertools import product

import mpmath as mp

mp.mp.dps = 30


def ray_integral(f, m, s):
    """int_R f(x) exp(i s x^m) dx by rotating each half-axis onto exp(-t^m)."""
    total = mp.mpc(0)
    for half in (1, -1):
        eff = s if half > 0 else s * (-1) ** m
        rot = mp.exp(1j * eff * mp.pi / (2 * m))
        g = lambda t: f(half * t * rot) * rot * mp.exp(-t ** m)
        total += mp.quad(g, [0, 1, 3, mp.inf])
    return total


def c_ref(m, k, s):
    return ray_integral(lambda z: z ** k, m, s)


def fresnel_ref(p, q, s):
    rot = mp.exp(1j * s * mp.pi / (2 * p))
    return mp.quad(lambda t: (t * rot) ** (q - 1) * rot * mp.exp(-t ** p), [0, 1, 3, mp.inf])


def gauss_1d(m, s, lam):
    """int_R exp(i s lam x^m - x^2) dx, rotated (exp(-x^2) is entire)."""
    scale = mp.mpf(lam) ** (-mp.mpf(1) / m)
    # y = lam^(1/m) x  ->  scale * int exp(i s y^m - scale^2 y^2) dy
    return scale * ray_integral(lambda z: mp.exp(-(scale * z) ** 2), m, s)


def taylor_coeffs(f, dim, order):
    """{alpha: d^alpha f(0) / alpha!} from mpmath numerical differentiation."""
    out = {}
    for alpha in product(range(order + 1), repeat=dim):
        if sum(alpha) > order:
            continue
        d = mp.diff(lambda *x: f(*x), (0,) * dim, alpha)
        out[alpha] = d / mp.fprod(mp.factorial(a) for a in alpha)
    return out


def brute_expansion(monos, f, n1):
    """Terms from a plain box scan with exact rational membership test."""
    ms = [m for m, _ in monos]
    m1 = max(ms)
    order = [j for j in sorted(range(len(ms)), key=lambda j: -ms[j])]
    first = order[0]
    budget = Fraction(n1, m1) - 1
    box = [range(n1) for _ in ms]
    taylor = taylor_coeffs(f, len(ms), n1)
    terms = {}
    for alpha in product(*box):
        cost = sum(Fraction(a + (0 if j == first else 1), ms[j]) for j, a in enumerate(alpha))
        if cost >= budget:
            continue
        expo = sum(Fraction(a + 1, m) for a, m in zip(alpha, ms))
        t = taylor.get(alpha, 0)
        if abs(t) < mp.mpf(10) ** -20:
            continue
        c = t
        for (m, s), a in zip(monos, alpha):
            c *= c_ref(m, a, s)
        terms[expo] = terms.get(expo, 0) + c
    return sorted((e, c) for e, c in terms.items() if abs(c) > mp.mpf(10) ** -20)


def cplx(z):
    z = mp.mpc(z)
    return f"complex({mp.nstr(z.real, 20)}, {mp.nstr(z.imag, 20)})"


def main():
    print('"""Frozen reference values; regenerate with tests/make_reference.py."""\n')
    print("GAMMA = {")
    for x in ("0.5", "1/3", "2/3", "1.25", "3", "7.5", "17/4", "49.5"):
        xv = mp.mpf(Fraction(x).numerator) / Fraction(x).denominator if "/" in x else mp.mpf(x)
        print(f"    {x!r}: {mp.nstr(mp.gamma(xv), 20)},")
    print("}\n")

    print("FRESNEL = {")
    for p, q, s in [(2, 1, 1), (2, 1, -1), (3, 1, 1), (3, 2, -1), (4, 3, 1), (5, 1, 1), (2.5, 1.5, 1), (6, 11, -1)]:
        print(f"    ({p}, {q}, {s}): {cplx(fresnel_ref(p, q, s))},")
    print("}\n")

    print("C_ONE_DIM = {")
    for m in range(2, 7):
        for k in range(0, 11):
            for s in (1, -1):
                print(f"    ({m}, {k}, {s}): {cplx(c_ref(m, k, s))},")
    print("}\n")

    gauss = lambda *x: mp.exp(-sum(v * v for v in x))
    cases = [
        ("2:+", "rational 1", [(2, 1)], lambda x: 1 / (1 + x * x), 7),
        ("3:+", "(mul x (gauss))", [(3, 1)], lambda x: x * mp.exp(-x * x), 8),
        ("4:-", "(exp x)", [(4, -1)], lambda x: mp.exp(x), 9),
        ("2:+,2:-", "gauss", [(2, 1), (2, -1)], gauss, 8),
        ("2:+,3:-", "rational 1", [(2, 1), (3, -1)],
         lambda x, y: 1 / ((1 + x * x) * (1 + y * y)), 7),
        ("A_2", "gauss", [(3, 1), (2, 1), (2, 1)], gauss, 9),
        ("E6", "gauss", [(4, 1), (3, 1), (2, 1)], gauss, 12),
        ("E8", "gauss", [(5, 1), (3, 1), (2, 1)], gauss, 11),
    ]
    print("EXPANSIONS = {")
    for phase, amp, monos, f, n1 in cases:
        terms = brute_expansion(monos, f, n1)
        body = ", ".join(f"({str(e)!r}, {cplx(c)})" for e, c in terms)
        print(f"    ({phase!r}, {amp!r}, {n1}): [{body}],")
    print("}\n")

    print("# separable Gaussian integrals int exp(i lam phi(x) - |x|^2) dx")
    print("GAUSS_INTEGRALS = {")
    for name, monos in [("A_2", [(3, 1), (2, 1), (2, 1)]), ("E6", [(4, 1), (3, 1), (2, 1)]),
                        ("E8", [(5, 1), (3, 1), (2, 1)]), ("2:+,3:-", [(2, 1), (3, -1)]),
                        ("3:+", [(3, 1)]), ("5:-", [(5, -1)])]:
        for lam in (1, 10, 50):
            val = mp.fprod(gauss_1d(m, s, lam) for m, s in monos)
            print(f"    ({name!r}, {lam}): {cplx(val)},")
    print("}\n")

    print("# int exp(i s lam x^m) a(x) dx for amplitudes analytic in the needed sector")
    amps = {"rational 1": lambda z: 1 / (1 + z * z), "(div x (add 1 (mul x x)))": lambda z: z / (1 + z * z)}
    print("ONE_DIM_INTEGRALS = {")
    for m in (2, 3, 4):
        for s in (1, -1):
            for label, f in amps.items():
                for lam in (1, 10):
                    scale = mp.mpf(lam) ** (-mp.mpf(1) / m)
                    val = scale * ray_integral(lambda z: f(scale * z), m, s)
                    print(f"    ({m}, {s}, {label!r}, {lam}): {cplx(val)},")
    print("}")


if __name__ == "__main__":
    main()
