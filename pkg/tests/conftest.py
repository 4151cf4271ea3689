import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from jaclab import radial

settings.register_profile("jaclab", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("jaclab")


@pytest.fixture(scope="session")
def builtin_densities():
    rng = np.random.default_rng(7)
    return {
        "constant": radial.constant_density(2),
        "power": radial.power_density(2, 1.5, 1.0),
        "piecewise": radial.piecewise_constant_density(2, [0.0, 0.5, 1.0], [1.5, (1 - 1.5 * 0.25) / 0.75]),
        "cusp": radial.renormalized(radial.cusp_density(2, 0.5, 1.0, 0.5, 0.25)),
        "sampled": radial.renormalized(
            radial.sampled_density(2, np.linspace(0, 1, 9), 1.0 + 0.5 * np.sin(np.linspace(0, 3, 9)))
        ),
        "random": radial.random_piecewise_density(2, rng),
        "n3_constant": radial.constant_density(3),
        "n3_power": radial.power_density(3, 4.0 / 3.0, 1.0),
    }
