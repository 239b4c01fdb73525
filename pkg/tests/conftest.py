import numpy as np
import pytest

from memphase import geometry
from memphase.materials import make_default_model


@pytest.fixture(scope="session")
def model():
    return make_default_model()


def sphere_curve(n=512, radius=1.0):
    t = np.linspace(0.0, np.pi, n + 1)
    pts = np.column_stack([-radius * np.cos(t), radius * np.sin(t)])
    return geometry.build_curve(pts, param_length=np.pi * radius)


def cylinder_curve(radius=0.5, length=1.0, n=256, x0=0.0):
    x = np.linspace(x0, x0 + length, n + 1)
    pts = np.column_stack([x, np.full(n + 1, radius)])
    return geometry.build_curve(pts, param_length=length)


def random_admissible_curve(rng, n=512, amplitude=0.35, modes=4):
    """Radially perturbed unit sphere; closed, x-monotone, y > 0 interior.

    The perturbation rho(t) = sum a_k cos(k t) has vanishing slope at the
    poles, which keeps the axis crossings perpendicular.
    """
    t = np.linspace(0.0, np.pi, n + 1)
    for _ in range(60):
        a = rng.uniform(-amplitude, amplitude, size=modes) / (1.0 + np.arange(modes)) ** 2
        rho = sum(a[k] * np.cos((k + 1) * t) for k in range(modes))
        r = 1.0 + rho
        x = -r * np.cos(t)
        y = r * np.sin(t)
        if np.min(r) < 0.3:
            amplitude *= 0.8
            continue
        if np.any(np.diff(x) < 1e-9):
            amplitude *= 0.8
            continue
        c = geometry.build_curve(np.column_stack([x, y]), param_length=np.pi)
        return geometry.reparametrize_constant_speed(c)
    raise RuntimeError("could not draw an admissible random curve")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
