import numpy as np
import pytest

from qmanin import WeightSequence


@pytest.fixture
def wfac():
    return WeightSequence.factorial()


@pytest.fixture
def wconst():
    return WeightSequence.constant()


def qgauss_table(q_abs: float, length: int = 31) -> WeightSequence:
    """w_n = |q|^{n(n+1)}: radius exactly one for the given |q|."""
    return WeightSequence.explicit([q_abs ** (n * (n + 1)) for n in range(length)])


def random_complex(rng, scale=1.0):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def column_from_projection(g, w, N, n):
    """Column n of T_g computed through the algebra module: P(g * phi_n)."""
    import math

    from qmanin import normal_order_product, project_P
    from qmanin.algebra import ManinElement

    phi_n = ManinElement.monomial(g.q.value, n, 0, w.weight(n) ** -0.5)
    img = project_P(normal_order_product(g, phi_n), w)
    col = np.zeros(N + 1, dtype=complex)
    for mon, _ in img:
        if mon.i <= N:
            col[mon.i] = img.coefficient(mon.i, 0) * math.sqrt(w.weight(mon.i))
    return col
