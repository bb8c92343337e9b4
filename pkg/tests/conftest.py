import numpy as np
import pytest

from dichotomy.modulus import polynomial_expr
from dichotomy.maps import parse_rational


@pytest.fixture
def announce(capsys):
    """Print one line straight to the terminal, bypassing capture."""

    def emit(line: str) -> None:
        with capsys.disabled():
            print(line)

    return emit


def random_rational(rng: np.random.Generator, min_pole: float = 1.5, max_pole: float = 3.0):
    """``p(z) / prod (z - r_k)`` with every pole ``r_k`` at modulus in ``[min_pole, max_pole]``."""
    num_deg = int(rng.integers(1, 4))
    num = [complex(*np.round(rng.uniform(-1, 1, 2), 3)) for _ in range(num_deg + 1)]
    if abs(num[-1]) < 0.2:
        num[-1] = 1.0
    poles = []
    for _ in range(int(rng.integers(1, 3))):
        r = rng.uniform(min_pole, max_pole)
        t = rng.uniform(0, 2 * np.pi)
        poles.append(complex(round(r * np.cos(t), 3), round(r * np.sin(t), 3)))
    den = "*".join(f"({polynomial_expr([-r, 1])})" for r in poles)
    return parse_rational(f"({polynomial_expr(num)})/({den})"), poles
