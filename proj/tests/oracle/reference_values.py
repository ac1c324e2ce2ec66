"""Independent mpmath evaluation of the frozen reference values used by the unit tests.

Run: python3 tests/oracle/reference_values.py
"""
import mpmath as mp

mp.mp.dps = 40
ALPHA = 1 / mp.mpf("137.035999")


def gen_bessel_all(u, v, d, lo, hi, m=4096):
    """J_n(u, v, D) for n in [lo, hi] by the periodic trapezoid rule in extended precision."""
    ts = [-mp.pi + 2 * mp.pi * j / m for j in range(m)]
    base = [mp.expj(u * mp.sin(t + d) + v * mp.sin(2 * t)) for t in ts]
    out = {}
    for n in range(lo, hi + 1):
        s = mp.mpc(0)
        for t, b in zip(ts, base):
            s += b * mp.expj(-n * (t + d))
        out[n] = s / m
    return out


def dwdo_general(omega, xi, zeta, z_a, n, theta, phi, rescatter=True):
    omega, xi, zeta, theta, phi = map(mp.mpf, (omega, xi, zeta, theta, phi))
    e_b = z_a**2 * ALPHA**2 / 2
    a = 1 / mp.sqrt(2 * e_b)
    eps0 = 1 - e_b
    z2 = zeta**2
    ms = mp.sqrt(1 + xi**2 * (1 + z2) / 2)
    pi0 = eps0 + n * omega
    pa = mp.sqrt(pi0**2 - ms**2)
    kpi = omega * (pi0 - pa * mp.cos(theta))
    big_z = xi**2 / (4 * kpi)
    g2 = pa**2 - 2 * n * omega * pa * mp.cos(theta) + (n * omega) ** 2
    alpha = xi * pa * mp.sin(theta) * mp.sqrt(mp.cos(phi) ** 2 + z2 * mp.sin(phi) ** 2) / kpi
    tp = mp.atan2(zeta * mp.sin(phi), mp.cos(phi))
    ap = xi**2 / (4 * omega * eps0)
    nz = n - big_z * (1 + z2)
    pref = 16 / (mp.pi * a**5) * nz**2 * kpi**2 * pa / g2**4
    kfr = mp.expj(n * tp) * gen_bessel_all(alpha, -big_z * (1 - z2) / 2, tp, n, n)[n]
    amp = kfr
    if rescatter:
        r = g2 / (2 * nz * kpi)
        x = -ap * (1 - z2) / 2
        km = 0 if x == 0 else int(mp.ceil(abs(x))) + 40
        c = gen_bessel_all(alpha, (big_z - ap) * (1 - z2) / 2, tp, n - 2 * km - 2, n + 2 * km + 2)
        s = mp.mpc(0)
        for k in range(-km, km + 1):
            b = mp.besselj(k, x)
            sk = n - 2 * k
            c2 = (c[sk - 2] * mp.expj(-2 * tp) + c[sk + 2] * mp.expj(2 * tp)) / 2
            bracket = (eps0 + 2 * k * omega) * mp.conj(c[sk]) + omega * ap * (1 - z2) * mp.conj(c2)
            s += mp.expj(-(2 * k - n) * tp) * b * bracket
        amp = kfr + r * s
    return pref * abs(amp) ** 2


def main():
    print("J_5(7.2)", mp.nstr(mp.besselj(5, 7.2), 20))
    print("J_100(99.5)", mp.nstr(mp.besselj(100, 99.5), 20))
    print("J_50(45)", mp.nstr(mp.besselj(50, 45), 20))
    print("J_1500(800)", mp.nstr(mp.besselj(1500, 800), 20))
    print("J_-7(30)", mp.nstr(mp.besselj(-7, 30), 20))
    for x in (0, 1, 25, 100, -5, -20, 3.5, 8.75):
        print(f"Ai({x})", mp.nstr(mp.airyai(x), 20), "Ai'", mp.nstr(mp.airyai(x, 1), 20))
    j = gen_bessel_all(mp.mpf(12), mp.mpf(3), mp.mpf("1.1"), 7, 7, m=8192)[7]
    print("J_7(12,3,1.1)", mp.nstr(j.real, 20), mp.nstr(j.imag, 20))
    j = gen_bessel_all(mp.mpf("1.5"), mp.mpf("0.7"), mp.mpf("0.4"), 3, 3)[3]
    print("J_3(1.5,0.7,0.4)", mp.nstr(j.real, 20), mp.nstr(j.imag, 20))
    theta_m = "0.7853715380746061"
    for zeta, phi in ((1, 0), (0.5, 0.3)):
        on = dwdo_general(0.01, 1, zeta, 1, 100, theta_m, phi)
        off = dwdo_general(0.01, 1, zeta, 1, 100, theta_m, phi, rescatter=False)
        print(f"dwdo_general zeta={zeta} phi={phi} on", mp.nstr(on, 20), "off", mp.nstr(off, 20))


if __name__ == "__main__":
    main()
