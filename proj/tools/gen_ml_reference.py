#!/usr/bin/env python3
"""Regenerates tests/ml_reference.hpp with mpmath.

Series rows use the power series in enough digits to absorb its cancellation.
Where that needs too many digits, the real-axis integral representation is
evaluated instead (valid for beta != 1 + alpha).

    python3 tools/gen_ml_reference.py > tests/ml_reference.hpp
"""

import mpmath as mp


def ml_series(a, b, z):
    x = abs(z)
    dps = max(60, int(x ** (1 / a) / 2.3) + 40)
    mp.mp.dps = dps
    a, b, z = mp.mpf(a), mp.mpf(b), mp.mpf(z)
    s = mp.mpf(0)
    k = 0
    while True:
        t = z**k * mp.rgamma(a * k + b)
        s += t
        if k > 20 and abs(t) < mp.mpf(10) ** (-dps + 5) * max(1, abs(s)):
            return s
        k += 1


def ml_integral(a, b, x):
    mp.mp.dps = 40
    a, b, x = mp.mpf(a), mp.mpf(b), mp.mpf(x)
    sb, sba = mp.sinpi(b), mp.sinpi(b - a)
    ca, sa = mp.cospi(a), mp.sinpi(a)

    def f(u):
        return mp.exp(-u ** (1 / a)) * u ** ((1 - b) / a) * (u * sb + x * sba) / ((u + x * ca) ** 2 + (x * sa) ** 2)

    U = mp.mpf(200) ** a
    pts = [mp.mpf(0), U / 4, U]
    if ca < 0:
        pts.append(-x * ca)
    return mp.quad(f, sorted(set(pts)), maxdegree=12) / (a * mp.pi)


def main():
    rows = []
    for a in [0.25, 0.5, 0.75, 0.9, 0.99]:
        for b in sorted({a, 1.0, a + 1, 1.7, 0.3}):
            for x in [0.01, 0.5, 1, 1.5, 3, 7, 20, 100, 1000]:
                if x ** (1 / a) > 1500:
                    continue
                rows.append("    {%r, %r, %r, %s}," % (a, b, -x, mp.nstr(ml_series(a, b, -x), 20)))
    for a, b, x in [(0.25, 0.25, 20), (0.25, 1, 20), (0.25, 1, 100), (0.5, 1, 1000), (0.5, 0.5, 100),
                    (0.75, 1, 1000), (0.9, 0.9, 1000), (0.5, 1, 20)]:
        rows.append("    {%r, %r, %r, %s}," % (a, b, -float(x), mp.nstr(ml_integral(a, b, x), 20)))

    print("#pragma once\n")
    print("#include <array>\n")
    print("// E_{alpha,beta}(z) at 20 digits: direct series in 60+ digit arithmetic, or the")
    print("// real-axis integral in 40 digit arithmetic where the series needs too many digits.")
    print("struct MlReference {\n  double alpha, beta, z, value;\n};\n")
    print("inline constexpr std::array<MlReference, %d> kMlReference{{" % len(rows))
    print("\n".join(rows))
    print("}};")


if __name__ == "__main__":
    main()
