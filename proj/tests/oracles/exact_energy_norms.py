"""Independent oracle for the energy norms of the two benchmark solutions.

|||u|||^2 = sum_i alpha_i * int_{Omega_i} |grad u|^2.  With u = r^b mu(theta),
|grad u|^2 = r^(2b-2) (b^2 mu^2 + mu'^2), so integrating r from 0 to the
square boundary R(theta) gives R^(2b) / (2b) and only a smooth 1D integral in
theta remains.  Evaluated with mpmath at 30 digits.
"""
import mpmath as mp

mp.mp.dps = 30


def kellogg():
    b = mp.mpf("0.1")
    R = mp.mpf("161.4476387975881")
    rho = mp.pi / 4
    s = mp.mpf("-14.92256510455152")
    branches = [
        (mp.cos((mp.pi / 2 - s) * b), lambda t: t - mp.pi / 2 + rho, R),
        (mp.cos(rho * b), lambda t: t - mp.pi + s, 1),
        (mp.cos(s * b), lambda t: t - mp.pi - rho, R),
        (mp.cos((mp.pi / 2 - rho) * b), lambda t: t - 3 * mp.pi / 2 - s, 1),
    ]
    total = 0
    for k, (c, arg, alpha) in enumerate(branches):
        def integrand(t, c=c, arg=arg):
            mu = c * mp.cos(arg(t) * b)
            dmu = -c * b * mp.sin(arg(t) * b)
            rb = 1 / max(abs(mp.cos(t)), abs(mp.sin(t)))
            return (b * b * mu * mu + dmu * dmu) * rb ** (2 * b) / (2 * b)
        lo = k * mp.pi / 2
        total += alpha * mp.quad(integrand, [lo, lo + mp.pi / 4, lo + mp.pi / 2])
    # interface checks
    def mu(k, t):
        c, arg, _ = branches[k]
        return c * mp.cos(arg(t) * b)
    def dmu(k, t):
        c, arg, _ = branches[k]
        return -c * b * mp.sin(arg(t) * b)
    for k in range(4):
        t = (k + 1) * mp.pi / 2
        k2 = (k + 1) % 4
        t2 = t if k2 else t - 2 * mp.pi
        print("  interface", k, "value jump", mu(k, t) - mu(k2, t2),
              "flux jump", branches[k][2] * dmu(k, t) - branches[k2][2] * dmu(k2, t2))
    return total


def lshape():
    b = mp.mpf(2) / 3
    def integrand(t):
        mu = mp.sin((2 * t + mp.pi) / 3)
        dmu = mp.mpf(2) / 3 * mp.cos((2 * t + mp.pi) / 3)
        rb = 1 / max(abs(mp.cos(t)), abs(mp.sin(t)))
        return (b * b * mu * mu + dmu * dmu) * rb ** (2 * b) / (2 * b)
    pts = [k * mp.pi / 4 for k in range(7)]
    return mp.quad(integrand, pts)


if __name__ == "__main__":
    k2 = kellogg()
    print("kellogg |||u|||^2 =", k2, " |||u||| =", mp.sqrt(k2))
    l2 = lshape()
    print("lshape  |||u|||^2 =", l2, " |||u||| =", mp.sqrt(l2))
