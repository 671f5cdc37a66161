"""Shared fixtures: the reference device model and its ECR calibration.

The calibration and the noisy pair channels are expensive (minutes of
Lindblad integration on the 16-level pair), so they are session-scoped and
persisted in the repository-local channel cache; the environment variable
must be set before ``ququart.transmon.ecr`` is imported.
"""

import os
from pathlib import Path

os.environ.setdefault(
    "QUQUART_CACHE_DIR",
    str(Path(__file__).resolve().parent.parent / ".ququart_cache"),
)

import numpy as np
import pytest

GHZ = 2.0 * np.pi  # rad/ns per GHz


@pytest.fixture(scope="session")
def pair_model():
    """Two fixed-frequency transmons at 6.3/6.1 GHz with a 1.8 MHz coupler."""
    from ququart.transmon.model import build_pair_model, transmon_from_spectrum

    control = transmon_from_spectrum(6.3 * GHZ, -0.310 * GHZ)
    target = transmon_from_spectrum(6.1 * GHZ, -0.300 * GHZ)
    return build_pair_model(control, target, 1.8e-3 * GHZ)


@pytest.fixture(scope="session")
def ecr_cal(pair_model):
    from ququart.transmon.ecr import calibrate_ecr

    return calibrate_ecr(pair_model)


@pytest.fixture(scope="session")
def ecr_sim(pair_model, ecr_cal):
    from ququart.transmon.ecr import simulate_ecr_unitary

    return simulate_ecr_unitary(pair_model, ecr_cal)


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary from the QR of a Ginibre matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
