"""
Shared fixtures: reference polynomials with their charts, and a fixed working precision.
"""

import pytest
from mpmath import mp

from app.catalog import (
    CHARTS,
    five_variable_polynomial,
    planar_face_polynomial,
    ray_face_polynomial,
    reference_problem,
    root_family_polynomial,
)
from app.charts.chart import Chart
from app.rules.tolerances import ToleranceRules
from app.utils.settings import load_settings


@pytest.fixture(autouse=True)
def working_precision():
    """Every test runs at 50 digits unless it sets its own precision."""
    with mp.workdps(50):
        yield


@pytest.fixture
def rules():
    return ToleranceRules()


@pytest.fixture
def settings():
    return load_settings(seed=0, precision=50)


@pytest.fixture
def ray_face():
    """-3 x^(2,2,1) + x^(1,0,1) + x^(0,1,1) + x^(6,6,3)."""
    return ray_face_polynomial()


@pytest.fixture
def ray_chart():
    return Chart.from_matrix(CHARTS["ray_face"], 2)


@pytest.fixture
def planar_face():
    return planar_face_polynomial()


@pytest.fixture
def planar_chart():
    return Chart.from_matrix(CHARTS["planar_face"], 1)


@pytest.fixture
def root_family():
    return root_family_polynomial((1, 2), (3, 1))


@pytest.fixture
def root_chart():
    return Chart.from_matrix(CHARTS["root_family"], 2)


@pytest.fixture
def five_variable():
    return five_variable_polynomial()


@pytest.fixture
def five_variable_chart():
    return Chart.from_matrix(CHARTS["five_variable"], 4)


@pytest.fixture
def ray_problem():
    return reference_problem("ray_face", seed=0)
