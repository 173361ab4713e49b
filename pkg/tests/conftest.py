import numpy as np
import pytest

from jumpkit import JumpDiffusionSpec, derive_stream, symmetric_pair


@pytest.fixture
def stream():
    return derive_stream(20240811, 0)


def benchmark_spec():
    """Stable OU-type diffusion with symmetric compensated jumps.

    Shared by the generator, change-of-variable and expectation-identity
    checks.
    """
    return JumpDiffusionSpec(
        drift=lambda t, x: -0.5 * x,
        diffusion=lambda t, x: 0.4 * np.ones_like(np.asarray(x, dtype=float)),
        jump_intensity=1.0,
        mark_distribution=symmetric_pair(0.5),
        compensated=True,
    )


@pytest.fixture
def jump_ou_spec():
    return benchmark_spec()
