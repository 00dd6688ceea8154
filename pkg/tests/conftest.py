import mpmath
import pytest

from qbessel.core import Kind, QBesselParams


def brute_calJ(p: QBesselParams, z, terms: int = 200, dps: int = 50):
    """Direct high-precision sum of the even series, no early stopping."""
    with mpmath.workdps(max(dps, mpmath.mp.dps)):
        q, nu, z = mpmath.mpf(p.q), mpmath.mpf(p.nu), mpmath.mpmathify(z)
        total, qq, qv = mpmath.mpf(0), mpmath.mpf(1), mpmath.mpf(1)
        for n in range(terms):
            if n:
                qq *= 1 - q**n
                qv *= 1 - q ** (nu + n)
            e = n * (n + nu) if p.jackson else mpmath.mpf(n * (n + 1)) / 2
            w = q**e / (qq * qv)
            if p.jackson:
                w /= mpmath.mpf(4) ** n
            total += (-1) ** n * w * z ** (2 * n)
        return total


@pytest.fixture
def jackson():
    return lambda nu, q: QBesselParams(Kind.JACKSON2, nu, q)


@pytest.fixture
def hahn():
    return lambda nu, q: QBesselParams(Kind.HAHN_EXTON3, nu, q)
