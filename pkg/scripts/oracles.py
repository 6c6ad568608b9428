"""Quadrature oracles for the setting-averaged mean distance.

Computes the frozen constants used in tests/test_avg.py from one-dimensional
(or two-dimensional) integrals of closed-form integrands, independent of the
package's sampling code.

    python scripts/oracles.py
"""

import math

from scipy.integrate import dblquad, quad


def hbin(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bell_planar():
    # both detectors uniform on the x-z circle; only the relative angle matters
    val, _ = quad(lambda g: 2 * hbin(math.cos(g / 2) ** 2), 0, 2 * math.pi, limit=200)
    return val / (2 * math.pi)


def werner_sphere(lam):
    # outcome agreement probability (1 + lam c)/2, c = cosine of the relative angle,
    # uniform on [-1, 1] for independent uniform directions
    val, _ = quad(lambda c: hbin((1 + lam * c) / 2), -1, 1)
    return val


def classical_sphere():
    # diag(1/2, 0, 0, 1/2): agreement probability (1 + z_a z_b)/2
    val, _ = dblquad(lambda x, y: 2 * hbin((1 + x * y) / 2), -1, 1, -1, 1)
    return val / 4


def single_entropy_sphere():
    val, _ = quad(lambda c: hbin((1 + c) / 2), -1, 1)
    return val / 2


def main():
    print(f"bell planar mean distance      {bell_planar()!r}")
    print(f"bell sphere mean distance      {werner_sphere(1.0)!r}  (1/ln 2 = {1 / math.log(2)!r})")
    print(f"classical sphere mean distance {classical_sphere()!r}")
    print(f"single-qubit mean entropy      {single_entropy_sphere()!r}")
    for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
        print(f"werner({lam}) sphere mean      {werner_sphere(lam)!r}")


if __name__ == "__main__":
    main()
