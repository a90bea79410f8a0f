"""A single smooth sigmoid whose two-neuron networks are dense in C[a,b].

The sigmoid is built from an enumeration of all monic polynomials with
rational coefficients, driven by the Calkin-Wilf enumeration of the
positive rationals.  Any continuous function on [a, b] can be approximated
to arbitrary accuracy by c1*sigma(x - t1) + c2*sigma(x - t2), where the
shift t1 encodes the index of a suitable polynomial.
"""

import numpy as np

from ridgekit import (
    SigmoidParams,
    calkin_wilf,
    cw_index,
    eval_network,
    fit_two_neuron,
    monic_enum,
    sigma,
)


def poly_str(p):
    """Readable form of a monic polynomial from its lower coefficients."""
    deg = len(p.coeffs)
    terms = [f"x^{deg}" if deg > 1 else ("x" if deg == 1 else "1")]
    for i in range(deg - 1, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        base = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
        mag = base if abs(c) == 1 and i > 0 else f"{abs(c)}{'' if i == 0 else '*' + base}"
        terms.append(("- " if c < 0 else "+ ") + mag)
    return " ".join(terms)


def main() -> None:
    print("Calkin-Wilf enumeration starts:",
          [str(calkin_wilf(n)) for n in range(1, 9)])
    print("round trip: index of 17/7 is", cw_index(calkin_wilf(115)))

    print("first monic polynomials:",
          ", ".join(poly_str(monic_enum(n)) for n in range(1, 9)))

    params = SigmoidParams(d=2, lam=0.25)
    for x in (0.0, 2.0, 6.0, 19.6):
        print(f"sigma({x:4.1f}) = {sigma(x, params):.5f}")
    print("closed form on the first plateau:", (1 + params.M(1)) / 2)

    # Fit a cubic to 1e-2 with a two-neuron network.
    f = lambda x: x ** 3 + x ** 2 - 5 * x + 3
    net, achieved = fit_two_neuron(f, -1.0, 1.0, 1e-2)
    print("network: n =", net.n, " theta2 =", net.theta2,
          " theta1 =", net.theta1_decimal())
    errs = [abs(eval_network(net, x) - f(x))
            for x in [i / 10 - 1 for i in range(21)]]
    print("max grid error for the cubic:", max(errs))

    # A transcendental target.
    g = lambda x: np.sin(x) - x * np.cos(x + 1)
    net2, achieved2 = fit_two_neuron(g, -1.0, 1.0, 0.1)
    errs2 = [abs(eval_network(net2, x) - g(x))
             for x in [i / 10 - 1 for i in range(21)]]
    print("sin/cos target, eps=0.1, achieved:", round(max(errs2), 4),
          " log10|theta1| =", round(net2.theta1_log10(), 2))


if __name__ == "__main__":
    main()
