"""Regenerate bessel_k.csv: K0 and K1 at 50 significant digits (mpmath)."""
import mpmath

mpmath.mp.dps = 50
N = 81
with open("bessel_k.csv", "w") as out:
    out.write("order,z,value\n")
    for order in (0, 1):
        for i in range(N):
            # log-spaced on [1e-6, 50], z printed exactly as a double
            z = float(mpmath.mpf(10) ** (-6 + i * (mpmath.log10(50) + 6) / (N - 1)))
            v = mpmath.besselk(order, mpmath.mpf(z))
            out.write(f"{order},{z!r},{mpmath.nstr(v, 25, min_fixed=1, max_fixed=0)}\n")
