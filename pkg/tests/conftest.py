"""Shared fixtures; puts src/ on the import path the way main.py does."""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))

from channel import ChannelRealization, SystemParams, sample_channels  # noqa: E402
from srmodel import build_an_precoder  # noqa: E402


@pytest.fixture
def default_params():
    return SystemParams()


@pytest.fixture
def small_params():
    """Nt=4, Ne=1 scenario used by the brute-force checks."""
    return SystemParams(nt=4, ne=1)


@pytest.fixture
def default_instance(default_params):
    ch = sample_channels(default_params, 0)
    return ch, build_an_precoder(ch), default_params


def unit(v):
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def basis_vector(nt, k):
    e = np.zeros(nt, dtype=complex)
    e[k] = 1.0
    return e


def make_channel(h1, h2, he, g1=1.0, g2=1.0):
    return ChannelRealization(h1=h1, h2=h2, he=he, g1=g1, g2=g2)
