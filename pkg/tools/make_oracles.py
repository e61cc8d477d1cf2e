"""Regenerate the frozen reference values used by the test suite.

Everything here is computed with mpmath at 40 digits, independently of the
package.  Run ``python tools/make_oracles.py`` and paste the output into
``tests/oracle_values.py`` if a value ever needs to change.
"""
import mpmath as mp

mp.mp.dps = 40
INF = mp.inf


def gauss_pdf(x):
    return mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)


def dexp_pdf(x):
    return mp.exp(-abs(x)) / 2


def lognormal_pdf(x):
    return mp.exp(-mp.log(x) ** 2 / 2) / (x * mp.sqrt(2 * mp.pi))


def laplace(pdf, s, n=0, lo=-INF, hi=INF, split=(0,)):
    pts = [lo, *split, hi]
    return mp.quad(lambda x: x ** n * mp.exp(s * x) * pdf(x), pts)


def chebyshev(moments, n):
    """alpha_0..alpha_{n-1}, beta_1..beta_n from raw moments via the
    modified Chebyshev algorithm in high precision."""
    m = len(moments)
    alpha, beta2 = [], []
    sig_prev = [mp.mpf(0)] * m
    sig = list(moments)
    alpha.append(moments[1] / moments[0])
    beta2.append(moments[0])
    for k in range(1, n + 1):
        sig_next = [mp.mpf(0)] * m
        for l in range(k, m - k):
            sig_next[l] = sig[l + 1] - alpha[k - 1] * sig[l] - beta2[k - 1] * sig_prev[l]
        alpha.append(sig_next[k + 1] / sig_next[k] - sig[k] / sig[k - 1])
        beta2.append(sig_next[k] / sig[k - 1])
        sig_prev, sig = sig, sig_next
    return alpha[:n], [mp.sqrt(b) for b in beta2[1 : n + 1]]


def fmt(v):
    return mp.nstr(v, 25)


def main():
    out = {}
    out["gauss_laplace"] = {s: laplace(gauss_pdf, mp.mpf(s)) for s in ("-2", "-1", "-0.5", "0", "0.5", "1", "2")}
    out["dexp_laplace"] = {f"{i / 10:.1f}": laplace(dexp_pdf, mp.mpf(i) / 10) for i in range(-9, 10)}
    out["uniform_laplace"] = {s: mp.quad(lambda x: mp.exp(mp.mpf(s) * x) / 2, [-1, 1]) for s in ("-3", "0.5", "3")}
    out["lognormal_laplace_neg"] = {s: mp.quad(lambda x: mp.exp(mp.mpf(s) * x) * lognormal_pdf(x), [0, 1, INF])
                                    for s in ("-0.5", "-2")}
    out["gauss_moments"] = {k: laplace(gauss_pdf, 0, k) for k in range(0, 21)}
    out["dexp_moments"] = {k: laplace(dexp_pdf, 0, k) for k in range(0, 21, 2)}
    out["lognormal_moments"] = {k: mp.quad(lambda x: x ** k * lognormal_pdf(x), [0, 1, mp.e ** k, INF])
                                for k in range(0, 7)}
    out["gauss_monomial_laplace"] = {(3, "0.5"): laplace(gauss_pdf, mp.mpf("0.5"), 3),
                                     (4, "-0.75"): laplace(gauss_pdf, mp.mpf("-0.75"), 4)}
    out["dexp_monomial_laplace"] = {(2, "0.4"): laplace(dexp_pdf, mp.mpf("0.4"), 2)}
    # lognormal recurrence from its moments exp(k^2/2)
    a, b = chebyshev([mp.e ** (mp.mpf(k * k) / 2) for k in range(14)], 6)
    out["lognormal_alpha"] = a
    out["lognormal_beta"] = b
    # sin against the Gaussian: <sin, e_{2k+1}> and ||sin||^2
    out["gauss_sin_norm_sq"] = mp.quad(lambda x: mp.sin(x) ** 2 * gauss_pdf(x), [-INF, 0, INF])
    out["gauss_sin_coeffs"] = [
        mp.quad(lambda x: mp.sin(x) * mp.hermite(n, x / mp.sqrt(2)) * gauss_pdf(x), [-INF, 0, INF])
        / mp.sqrt(2 ** n * mp.factorial(n))
        for n in range(8)
    ]
    # annihilator: integrate in y = ln x
    phi = lambda y: mp.exp(-y * y / 2) / mp.sqrt(2 * mp.pi)
    out["annihilator_norm_sq"] = mp.quad(lambda y: mp.sin(2 * mp.pi * y) ** 2 * phi(y), mp.linspace(-12, 12, 49))
    out["annihilator_moments"] = [mp.quad(lambda y: mp.exp(k * y) * mp.sin(2 * mp.pi * y) * phi(y),
                                          mp.linspace(-12, 12 + k, 97)) for k in range(5)]
    for key, val in out.items():
        if isinstance(val, dict):
            print(f"{key.upper()} = {{")
            for k, v in val.items():
                print(f"    {k!r}: {fmt(v)},")
            print("}")
        else:
            print(f"{key.upper()} = " + (f"[{', '.join(fmt(v) for v in val)}]" if isinstance(val, list) else fmt(val)))


if __name__ == "__main__":
    main()
