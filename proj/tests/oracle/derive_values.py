"""Independent high-precision reference values for the C++ tests.

Run: python3 tests/oracle/derive_values.py > tests/oracle_values.hpp
"""
import mpmath as mp

mp.mp.dps = 40


def lt(sigma):
    return mp.gamma(sigma + 1) / (mp.sqrt(4 * mp.pi) * mp.gamma(sigma + mp.mpf(3) / 2))


def root(fn, lo, hi):
    flo = fn(lo)
    for _ in range(200):
        mid = (lo + hi) / 2
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


values = {}

values["L_3_2"] = lt(mp.mpf(3) / 2)
values["L_1_2"] = lt(mp.mpf(1) / 2)
values["L_1"] = lt(mp.mpf(1))

zeros = {
    "J0_1": (0, 1), "J0_2": (0, 2), "J1_1": (1, 1), "J2_1": (2, 1), "J1_2": (1, 2),
}
for name, (nu, m) in zeros.items():
    values[name] = mp.besseljzero(nu, m)
values["J3_2_1"] = mp.besseljzero(mp.mpf(3) / 2, 1)

# thin cusp alpha = 1, N = 1, Lambda = 4, sigma = 3/2: one mode, x^4 < 4 beyond |x| = 1
F = lambda x: 16 * x - 8 * x**5 / 5 + x**9 / 9
tail = F(mp.sqrt(2)) - F(1)
values["thin_tail_integral"] = tail
values["thin_bound"] = lt(mp.mpf(3) / 2) * (18 + 2 * tail)
values["thin_tail_integral_printed_limit"] = F(mp.mpf(2) ** (mp.mpf(1) / 4)) - F(1)

# curved gaussian: gamma = 0.2, f = 0.8 exp(-s^2/8), sigma = 3/2, v = 1 (below threshold) and 6
g0 = mp.mpf("0.2")
f = lambda s: mp.mpf("0.8") * mp.exp(-s**2 / 8)
n = 1 + mp.mpf("0.8") * g0
def gauss_bound(v):
    A = lambda s: n**2 * (g0**2 / (4 * (1 - f(s) * g0) ** 2) + v)
    total = 0
    j = 1
    while True:
        gj = lambda s, j=j: A(s) - (mp.pi * j / (2 * f(s))) ** 2
        if gj(0) <= 0:
            break
        r = root(gj, mp.mpf(0), mp.mpf(40))
        total += 2 * mp.quad(lambda s: gj(s) ** 2, [0, r])
        j += 1
    return n ** (-3) * lt(mp.mpf(3) / 2) * total
values["gauss_bound_v1"] = gauss_bound(mp.mpf(1))
values["gauss_bound_v6"] = gauss_bound(mp.mpf(6))

# d = 3 straight, power_tail(1, 1), v = 9, sigma = 3/2
pt = lambda s: (mp.pi / 2) * max(abs(s), 1) ** -2
def nd_bound(weighted):
    total = 0
    for k in range(0, 6):
        for m in range(1, 6):
            z = mp.besseljzero(k, m)
            if (z / pt(0)) ** 2 >= 9:
                continue
            w = (1 if k == 0 else 2) if weighted else 1
            edge = mp.sqrt(3 * mp.pi / (2 * z))  # f(edge) = z / 3
            term = lambda s: (9 - (z / pt(s)) ** 2) ** 2
            total += w * 2 * mp.quad(term, [0, 1, edge])
    return lt(mp.mpf(3) / 2) * total
values["nd_verbatim"] = nd_bound(False)
values["nd_weighted"] = nd_bound(True)

# twisted unit disc: f = 0.9 exp(-s^2/2), theta' = 0.5, v = 8, sigma = 3/2
fg = lambda s: mp.mpf("0.9") * mp.exp(-s**2 / 2)
K = mp.mpf("0.9") * mp.mpf("0.5")
vv = 8 / (1 - K)
total = 0
for m in range(0, 8):
    for k in range(1, 8):
        z = mp.besseljzero(m, k)
        g = lambda s, z=z, m=m: vv - (z**2 + (fg(s) / 2) ** 2 * m**2) / fg(s) ** 2
        if g(0) <= 0:
            continue
        r = root(g, mp.mpf(0), mp.mpf(20))
        total += (1 if m == 0 else 2) * 2 * mp.quad(lambda s: g(s) ** 2, [0, r])
values["twist_bound"] = lt(mp.mpf(3) / 2) * (1 - K) ** mp.mpf(1.5) * total

values["omega_prime_area"] = 2 * mp.quad(lambda s: 2 * pt(s), [0, 1, 4])
values["omega_prime_vol_printed"] = 2 * mp.quad(pt, [0, 1, 4])
values["cusp_rhs_example"] = 4 * lt(mp.mpf(3) / 2) * mp.mpf(2) ** mp.mpf(-0.5)
values["phase_rhs_example"] = 2 * mp.pi * lt(mp.mpf(3) / 2) * mp.mpf(2) ** mp.mpf(-0.5) * 2

# gaussian bump gamma = c exp(-(s-s0)^2/(2 w^2)) with c = 0.5, s0 = 0, w = 1 at s = 1,
# f = 0.4: W^- = gamma^2/(4g^2) + f|gamma''|/(2g^3) + 5 f^2 gamma'^2/(4g^4), g = 1 - f|gamma|
c, w, s1, fw = mp.mpf("0.5"), mp.mpf(1), mp.mpf(1), mp.mpf("0.4")
gam = lambda s: c * mp.exp(-s**2 / (2 * w**2))
g1 = mp.diff(gam, s1)
g2 = mp.diff(gam, s1, 2)
gg = 1 - fw * abs(gam(s1))
values["wminus_bump"] = gam(s1) ** 2 / (4 * gg**2) + fw * abs(g2) / (2 * gg**3) + 5 * fw**2 * g1**2 / (4 * gg**4)
u = mp.mpf("0.3")
h = 1 + u * gam(s1)
values["wfull_bump"] = -gam(s1) ** 2 / (4 * h**2) + u * g2 / (2 * h**3) - 5 * u**2 * g1**2 / (4 * h**4)

print("#pragma once")
print()
print("// Generated by tests/oracle/derive_values.py (mpmath, 40 digits).")
print()
print("namespace oracle {")
print()
for key, val in values.items():
    print(f"inline constexpr double {key} = {mp.nstr(val, 20, min_fixed=-5, max_fixed=5)};")
print()
print("}  // namespace oracle")
