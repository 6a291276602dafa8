"""Print 17-digit reference values for the statistics/decision tests.

Everything is evaluated with mpmath at 40 significant digits from the
closed-form definitions, independently of the package implementation.
Run:  python3 tools/gen_stat_reference.py
"""

import mpmath as mp

mp.mp.dps = 40


def phi_inv(q):
    return mp.sqrt(2) * mp.erfinv(2 * q - 1)


def chisq_cdf(x, df):
    return mp.gammainc(mp.mpf(df) / 2, 0, mp.mpf(x) / 2, regularized=True)


def chisq_inv(alpha, df):
    # upper-tail quantile: P(X >= q) = alpha
    target = 1 - mp.mpf(alpha)
    df = mp.mpf(df)
    x = df * (1 - 2 / (9 * df) + phi_inv(target) * mp.sqrt(2 / (9 * df))) ** 3
    for _ in range(200):
        f = chisq_cdf(x, df) - target
        pdf = mp.exp((df / 2 - 1) * mp.log(x) - x / 2 - mp.loggamma(df / 2)
                     - (df / 2) * mp.log(2))
        nxt = x - f / pdf
        if nxt <= 0:
            nxt = x / 2
        if abs(nxt - x) < abs(x) * mp.mpf("1e-36"):
            x = nxt
            break
        x = nxt
    return x


def tau_sq(n, p):
    n, p = mp.mpf(n), mp.mpf(p)
    return p * (p - 1) * (n - 2) / ((n - 1) ** 2 * (n + 1))


def sigma_sq(n, p):
    n, p = mp.mpf(n), mp.mpf(p)
    return p * (p - 1) * (n - 3) / ((n - 4) ** 2 * (n - 6))


def t_star(t, n, p):
    n, p = mp.mpf(n), mp.mpf(p)
    return (t - p * (p - 1) / (2 * (n - 1))) / mp.sqrt(tau_sq(n, p))


def big_t_star(T, n, p):
    n, p = mp.mpf(n), mp.mpf(p)
    return (T - p * (p - 1) / (2 * (n - 4))) / mp.sqrt(sigma_sq(n, p))


def t_c(t, n, p):
    n, p = mp.mpf(n), mp.mpf(p)
    s = mp.sqrt((n + 1) / (n - 2))
    return s * (n - 1) * t + p * (p - 1) / 2 * (1 - s)


def big_t_c(T, n, p):
    n, p = mp.mpf(n), mp.mpf(p)
    s = mp.sqrt((n - 6) / (n - 3))
    return s * (n - 4) * T + p * (p - 1) / 2 * (1 - s)


def region_t_star(n, p, alpha):
    n, p = mp.mpf(n), mp.mpf(p)
    return p * (p - 1) / (2 * (n - 1)) + phi_inv(1 - mp.mpf(alpha)) * mp.sqrt(tau_sq(n, p))


def region_big_t_star(n, p, alpha):
    n, p = mp.mpf(n), mp.mpf(p)
    return p * (p - 1) / (2 * (n - 4)) + phi_inv(1 - mp.mpf(alpha)) * mp.sqrt(sigma_sq(n, p))


def region_t_c(n, p, alpha):
    n, p = mp.mpf(n), mp.mpf(p)
    q = chisq_inv(alpha, p * (p - 1) / 2)
    s = mp.sqrt((n - 2) / (n + 1))
    return p * (p - 1) / (2 * (n - 1)) * (1 - s) + q * s / (n - 1)


def region_big_t_c(n, p, alpha):
    n, p = mp.mpf(n), mp.mpf(p)
    q = chisq_inv(alpha, p * (p - 1) / 2)
    s = mp.sqrt((n - 3) / (n - 6))
    return p * (p - 1) / (2 * (n - 4)) * (1 - s) + q * s / (n - 4)


def show(label, value):
    print("%-34s %s" % (label, mp.nstr(value, 17)))


show("tau_sq(10,3)", tau_sq(10, 3))
show("sigma_sq(10,3)", sigma_sq(10, 3))
show("t_star(0.5,10,3)", t_star(mp.mpf("0.5"), 10, 3))
show("t_c(0.5,10,3)", t_c(mp.mpf("0.5"), 10, 3))
show("T_star(0.6,10,3)", big_t_star(mp.mpf("0.6"), 10, 3))
show("T_c(0.6,10,3)", big_t_c(mp.mpf("0.6"), 10, 3))
show("tau_sq(30,10)", tau_sq(30, 10))
show("sigma_sq(30,10)", sigma_sq(30, 10))
show("t_star(1.8,30,10)", t_star(mp.mpf("1.8"), 30, 10))
show("t_c(1.8,30,10)", t_c(mp.mpf("1.8"), 30, 10))
show("T_star(2.0,30,10)", big_t_star(mp.mpf("2.0"), 30, 10))
show("T_c(2.0,30,10)", big_t_c(mp.mpf("2.0"), 30, 10))
print()
show("region_t_star(10,3,0.05)", region_t_star(10, 3, "0.05"))
show("region_T_star(10,3,0.05)", region_big_t_star(10, 3, "0.05"))
show("region_t_c(10,3,0.05)", region_t_c(10, 3, "0.05"))
show("region_T_c(10,3,0.05)", region_big_t_c(10, 3, "0.05"))
show("region_t_star(30,10,0.01)", region_t_star(30, 10, "0.01"))
show("region_T_star(30,10,0.01)", region_big_t_star(30, 10, "0.01"))
show("region_t_c(30,10,0.01)", region_t_c(30, 10, "0.01"))
show("region_T_c(30,10,0.01)", region_big_t_c(30, 10, "0.01"))
print()
# Fisher Q at n=10, p=3, r = (0.5, 0.3, 0.1)
s = sum(mp.atanh(mp.mpf(r)) ** 2 for r in ("0.5", "0.3", "0.1"))
q_val = (7 * s - 3) / mp.sqrt(6)
show("fisher_Q(.5,.3,.1;10,3)", q_val)
print()
show("p 1-Phi(0.18516401995785303)", 1 - (1 + mp.erf(mp.mpf("0.18516401995785303") / mp.sqrt(2))) / 2)
show("p 1-Phi(0.71807033952313623)", 1 - (1 + mp.erf(mp.mpf("0.71807033952313623") / mp.sqrt(2))) / 2)
show("p 1-chisqcdf(4.7589058955865829,3)", 1 - chisq_cdf(mp.mpf("4.7589058955865829"), 3))
show("p 1-chisqcdf(3.4535573737456249,3)", 1 - chisq_cdf(mp.mpf("3.4535573737456249"), 3))
print()
show("chisq_inv(0.05, 3)", chisq_inv("0.05", 3))
show("phi_inv(0.95)", phi_inv(mp.mpf("0.95")))
