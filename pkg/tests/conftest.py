import os

import numpy as np
import pytest

from file_formats import load_algebra, load_module, load_module_dir

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")


def data_path(name):
    return os.path.join(DATA_DIR, name)


@pytest.fixture(scope="session")
def a2():
    return load_algebra(data_path("a2.alg"))


@pytest.fixture(scope="session")
def a3rad2():
    return load_algebra(data_path("a3rad2.alg"))


@pytest.fixture(scope="session")
def a4rad2():
    return load_algebra(data_path("a4rad2.alg"))


@pytest.fixture(scope="session")
def kx2():
    return load_algebra(data_path("kx2.alg"))


@pytest.fixture(scope="session")
def semisimple2():
    return load_algebra(data_path("semisimple2.alg"))


@pytest.fixture
def a2_ct(a2):
    return load_module(data_path("a2_ct.mod"), a2)


@pytest.fixture
def a3rad2_ct(a3rad2):
    return load_module(data_path("a3rad2_ct.mod"), a3rad2)


@pytest.fixture
def a3rad2_ct_plus_s2(a3rad2):
    return load_module(data_path("a3rad2_ct_plus_s2.mod"), a3rad2)


@pytest.fixture
def a3rad2_indecomposables(a3rad2):
    return load_module_dir(data_path("a3rad2_indec"), a3rad2)


@pytest.fixture
def a4rad2_ct(a4rad2):
    return load_module(data_path("a4rad2_ct.mod"), a4rad2)


@pytest.fixture
def a2_indecomposables(a2):
    return load_module_dir(data_path("a2_indec"), a2)


@pytest.fixture
def a4rad2_indecomposables(a4rad2):
    return load_module_dir(data_path("a4rad2_indec"), a4rad2)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
