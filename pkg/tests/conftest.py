import numpy as np
import pytest

from squarepeg import Curve, make_ellipse


@pytest.fixture(scope="session")
def ellipse21():
    return make_ellipse(2, 1)


@pytest.fixture(scope="session")
def unit_circle():
    return Curve([0, 0], [[1.0], [0.0]], [[0.0], [1.0]])


def three_lobe_curve() -> Curve:
    """Three-lobed closed curve (polar radius 1 + 0.3 cos 3t, expanded).

    x = cos t + 0.15 cos 2t + 0.15 cos 4t
    y = sin t - 0.15 sin 2t + 0.15 sin 4t
    Inscribes three transverse square classes.
    """
    return Curve(
        [0, 0],
        [[1.0, 0.15, 0.0, 0.15], [0.0, 0.0, 0.0, 0.0]],
        [[0.0, 0.0, 0.0, 0.0], [1.0, -0.15, 0.0, 0.15]],
    )


@pytest.fixture(scope="session")
def three_lobe():
    return three_lobe_curve()


def random_smooth_curve(rng: np.random.Generator, dim: int = 2, harmonics: int = 3) -> Curve:
    """Mildly perturbed ellipse-like curve; regular by construction retry."""
    for _ in range(20):
        cos_c = np.zeros((dim, harmonics))
        sin_c = np.zeros((dim, harmonics))
        cos_c[0, 0] = rng.uniform(1.5, 2.5)
        sin_c[1, 0] = rng.uniform(0.8, 1.4)
        cos_c += rng.uniform(-0.08, 0.08, size=cos_c.shape)
        sin_c += rng.uniform(-0.08, 0.08, size=sin_c.shape)
        a0 = rng.uniform(-1, 1, size=dim)
        try:
            return Curve(a0, cos_c, sin_c)
        except Exception:
            continue
    raise RuntimeError("could not draw a regular curve")
