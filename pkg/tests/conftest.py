#!/usr/bin/env python3

"""Shared wave profiles, built once per session"""

import math

import pytest

from periwave.families import Family, WaveProfile, construct

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="session")
def mkdv_profile() -> WaveProfile:
    """Dnoidal mKdV wave, k=0.5 on [0, 2π)"""
    return construct(Family(tag="mkdv_dnoidal"), 0.5, TWO_PI, 256)


@pytest.fixture(scope="session")
def kdv_profile() -> WaveProfile:
    """Cnoidal KdV wave, k=0.9 on [0, 2π)"""
    return construct(Family(tag="kdv_cnoidal"), 0.9, TWO_PI, 256)


@pytest.fixture(scope="session")
def mbbm_profile() -> WaveProfile:
    """Dnoidal-snoidal mBBM wave, k=0.5, L=10"""
    return construct(Family(tag="mbbm_dnsn"), 0.5, 10.0, 256)
