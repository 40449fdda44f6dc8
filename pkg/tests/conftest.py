import pytest

from he2c_sim import kernels
from he2c_sim.config import example_config_path, load_config


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run the test once per available kernel backend."""
    previous = kernels.backend_name()
    kernels.set_active(request.param)
    yield request.param
    kernels.set_active(previous)


@pytest.fixture(scope="session")
def example_config():
    return load_config(example_config_path())
