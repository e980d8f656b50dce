"""Hand-typed numpy references for the operators, written independently of the package.

Each function returns the coefficient triple (V, W, U) of
``V f(z - i a_-) + W f(z + i a_-) + U f(z)`` at a point z.
"""
import numpy as np

E = lambda x: np.exp(2j * np.pi * x)
ep = lambda x: np.exp(1j * np.pi * x)


def Rp(z, a, K=80):
    """Truncated product prod_k (1 - q^{2k-1} e^{2 pi i z})(1 - q^{2k-1} e^{-2 pi i z}), q = e^{-pi a}."""
    q = np.exp(-np.pi * a)
    k = np.arange(1, K + 1)
    qk = q ** (2 * k - 1)
    return np.prod((1 - qk * E(z)) * (1 - qk * E(-z)))


def rvd(h, ap, am, mu, z):
    R = lambda u: Rp(u, ap)
    V = lambda z: np.prod([R(z - hn - 0.5j * am) for hn in h]) / (R(2 * z + 0.5j * ap) * R(2 * z - 1j * am + 0.5j * ap))
    om = [0, 0.5, 0.5j * ap, -0.5 - 0.5j * ap]
    p = [np.prod([R(hn) for hn in h]), np.prod([R(hn - 0.5) for hn in h]),
         np.exp(-2 * np.pi * ap) * np.prod([ep(-hn) * R(hn - 0.5j * ap) for hn in h]),
         np.exp(-2 * np.pi * ap) * np.prod([ep(hn) * R(hn + 0.5 + 0.5j * ap) for hn in h])]
    c = 0.5j * (ap + am)
    Ef = lambda t, z: R(z + mu - c - om[t]) * R(z - mu + c - om[t]) / (R(z - c - om[t]) * R(z + c - om[t]))
    U = sum(p[t] * (Ef(t, z) - Ef(t, om[t])) for t in range(4)) / (2 * R(mu - 0.5j * ap) * R(mu - 1j * am - 0.5j * ap))
    return V(z), V(-z), U


def A1(ht, am, z):
    ea = np.exp(np.pi * am)
    V = lambda z: np.prod([1 - E(-z) * E(h) / ea for h in ht]) / ((1 - E(-2 * z)) * (1 - E(-2 * z) * ea**-2))
    P = np.prod([ep(h) for h in ht])
    S = sum(E(h) + E(-h) for h in ht)
    U = (np.prod([E(h) - 1 for h in ht]) / (2 * (1 - E(z) * ea) * (1 - E(-z) * ea))
         + np.prod([E(h) + 1 for h in ht]) / (2 * (1 + E(z) * ea) * (1 + E(-z) * ea))
         + P / ea * ((E(z) + E(-z)) * S - (ea + 1 / ea) * (E(2 * z) + E(-2 * z))))
    return V(z), V(-z), U


def A1t(ht, am, z):
    e2 = np.exp(-2 * np.pi * am)
    ea = np.exp(np.pi * am)
    V = np.prod([1 - E(-z) * E(h) / ea for h in ht]) / (e2 * E(-2 * z) * (1 - E(-2 * z)) * (1 - E(-2 * z) * e2))
    W = np.prod([1 - E(z) * E(h) / ea for h in ht]) / (e2 * E(2 * z) * (1 - E(2 * z)) * (1 - E(2 * z) * e2))
    return V, W, A1(ht, am, z)[2]


def A2(h8, am, z):
    ea = np.exp(np.pi * am)
    h = h8
    V = E(2 * z) * np.prod([1 - E(-z) * E(hh) / ea for hh in h[:4]]) * np.prod([E(hh) for hh in h[4:]])
    W = ea**2 * E(-2 * z) * np.prod([1 - E(z) * E(hh) / ea for hh in h[4:]])
    P5 = np.prod([E(hh) for hh in h[4:]])
    P = np.prod([ep(hh) for hh in h])
    U = (P5 * ((sum(E(hh) for hh in h[:4]) + sum(E(-hh) for hh in h[4:])) / ea * E(z) - (1 + ea**-2) * E(2 * z))
         + P * ((sum(E(-hh) for hh in h[:4]) + sum(E(hh) for hh in h[4:])) / ea * E(-z) - (1 + ea**-2) * E(-2 * z)))
    return V, W, U


def A2t(h, l, am, z):
    ea = np.exp(np.pi * am)
    V = E(2 * z) * np.prod([1 - E(hh) / ea * E(-z) for hh in h])
    W = E(2 * z) * np.prod([1 - E(ll) * ea * E(-z) for ll in l])
    P = np.prod([ep(hh + ll) for hh, ll in zip(h, l)])
    U = (sum(E(hh) + E(ll) for hh, ll in zip(h, l)) * E(z) - (ea + 1 / ea) * E(2 * z)
         + P * (sum(E(-hh) + E(-ll) for hh, ll in zip(h, l)) * E(-z) - (ea + 1 / ea) * E(-2 * z)))
    return V, W, U


def A3(h, l, am, z):
    ea = np.exp(np.pi * am)
    V = E(2 * z) * np.prod([1 - E(hh) / ea * E(-z) for hh in h[:2]])
    W = E(2 * z) * np.prod([1 - E(ll) * ea * E(-z) for ll in l])
    U = ((E(h[0]) + E(h[1]) + sum(E(ll) for ll in l)) * E(z) - (ea + 1 / ea) * E(2 * z)
         + ep(h[0]) * ep(h[1]) * (ep(h[2] - h[3]) + ep(h[3] - h[2])) * np.prod([ep(ll) for ll in l]) * E(-z))
    return V, W, U


def A3t(h, l, am, z):
    ea = np.exp(np.pi * am)
    Vt = ea**-2 * np.prod([1 - E(hh) / ea * E(-z) for hh in h[:2]])
    Wt = ea**-2 * E(4 * z) * np.prod([1 - E(ll) * ea * E(-z) for ll in l])
    return Vt, Wt, A3(h, l, am, z)[2]


def A4(h, l, am, z):
    ea = np.exp(np.pi * am)
    V = ea**-2 * np.prod([1 - E(hh) / ea * E(-z) for hh in h[:2]])
    W = E(2 * z) * E(l[2] + l[3]) * np.prod([1 - E(ll) * ea * E(-z) for ll in l[:2]])
    U = ((E(l[2]) + E(l[3])) * E(z)
         + ep(h[0] + h[1]) * (ep(h[2] - h[3]) + ep(h[3] - h[2])) * np.prod([ep(ll) for ll in l]) * E(-z))
    return V, W, U


def A4t(h, l, am, z):
    ea = np.exp(np.pi * am)
    V = E(z) * np.prod([1 - E(hh) / ea * E(-z) for hh in h[:2]])
    W = E(l[2] + l[3]) * E(z) * np.prod([1 - E(ll) * ea * E(-z) for ll in l[:2]])
    return V, W, -A4(h, l, am, z)[2]


def qthird_barred(h, l, am, x):
    """Barred third-stage operator (E = 0) in the original labels, at the point x."""
    q = np.exp(-2 * np.pi * am)
    sq = np.sqrt(q)
    H, L = E(np.asarray(h)), E(np.asarray(l))
    back = (x - H[0] * sq) * (x - H[1] * sq) * (x - L[3] * sq)
    fwd = (x - L[0] / sq) * (x - L[1] / sq) * (x - L[2] / sq)
    const = ep(h[0] + h[1] + l[0] + l[1] + l[2] + l[3]) * (ep(h[2] - h[3]) + ep(h[3] - h[2]))
    mid = -(sq + 1 / sq) * x**3 + (H[0] + H[1] + L[3] + L[0] + L[1] + L[2]) * x**2 + const
    return back, fwd, mid
