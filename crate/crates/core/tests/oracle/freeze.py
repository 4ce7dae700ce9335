"""Independent high-precision oracle for frozen test values.

Evaluates the shipped coefficient sets with mpmath at 50 digits. Run with
`python3 freeze.py`; the printed values are pasted into tests/oracles.rs.
"""
from mpmath import mp, mpf, sqrt, pi, asin, cos, sin, diff

mp.dps = 50

KTP_Y = [mpf("3.45018"), mpf("0.04341"), mpf("0.04597"), mpf("16.98825"), mpf("39.43799")]
KTP_Z = [mpf("4.59423"), mpf("0.06206"), mpf("0.04763"), mpf("110.80672"), mpf("86.12171")]
KTP_Y_THERMO = [[mpf("5.425e-6"), mpf("5.154e-6"), mpf("-4.063e-6"), mpf("1.997e-6")]]
KTP_Z_THERMO = [
    [mpf("9.9587e-6"), mpf("9.9228e-6"), mpf("-8.9603e-6"), mpf("4.1010e-6")],
    [mpf("-1.1882e-8"), mpf("10.459e-8"), mpf("-9.8136e-8"), mpf("3.1481e-8")],
]
BK7_B = [mpf("1.03961212"), mpf("0.231792344"), mpf("1.01046945")]
BK7_C = [mpf("0.00600069867"), mpf("0.0200179144"), mpf("103.560653")]
C_UM_THZ = mpf("299.792458")


def ktp(axis, lam, t):
    a, b, c, d, e = KTP_Y if axis == "y" else KTP_Z
    l2 = lam * lam
    n = sqrt(a + b / (l2 - c) + d / (l2 - e))
    thermo = KTP_Y_THERMO if axis == "y" else KTP_Z_THERMO
    dt = t - 25
    for p, row in enumerate(thermo):
        n += dt ** (p + 1) * sum(co / lam ** m for m, co in enumerate(row))
    return n


def bk7(lam):
    l2 = lam * lam
    return sqrt(1 + sum(b * l2 / (l2 - c) for b, c in zip(BK7_B, BK7_C)))


def k(axis, nu, t):
    lam = C_UM_THZ / nu
    return 2 * pi * ktp(axis, lam, t) / lam


print("n_z(1.064um, 25C)     =", mp.nstr(ktp("z", mpf("1.064"), 25), 20))
print("n_z(1.064um, 65C)     =", mp.nstr(ktp("z", mpf("1.064"), 65), 20))
print("n_y(0.792um, 40C)     =", mp.nstr(ktp("y", mpf("0.792"), 40), 20))
print("n_bk7(0.792um)        =", mp.nstr(bk7(mpf("0.792")), 20))

lam = mpf("1.584")
ng = ktp("y", lam, 40) - lam * diff(lambda x: ktp("y", x, 40), lam)
print("ng_y(1.584um, 40C)    =", mp.nstr(ng, 20))

print("path(1.5, 30deg)      =", mp.nstr(1 / cos(asin(sin(pi / 6) / mpf("1.5"))), 20))

# phase mismatch at T = 65 C, detuning +0.2 / -0.2 THz, fixed period 44.95 um
nu0 = C_UM_THZ / mpf("1.584")
nu1, nu2 = nu0 + mpf("0.2"), nu0 - mpf("0.2")
period = mpf("44.95")
dk = k("y", nu1 + nu2, 65) - k("y", nu1, 65) - k("z", nu2, 65) + 2 * pi / period
print("dk(65C,+0.2,-0.2)     =", mp.nstr(dk, 20))

# raw double-pass plate phase, 1 mm BK7 at normal incidence
thick = mpf(1000)
raw = 2 * thick * (2 * pi / mpf("0.792") * bk7(mpf("0.792"))
                   - 2 * 2 * pi / mpf("1.584") * bk7(mpf("1.584")))
print("plate_raw(1mm, 0deg)  =", mp.nstr(raw, 20))
