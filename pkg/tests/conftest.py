# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import logging

import pytest

from zipchow import ring, strata
from zipchow.azip import CyclicSubset


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long exhaustive sweeps')


@pytest.fixture(autouse=True)
def _reenable_logging():
    # cli.main disables logging globally when --verbose is absent.
    yield
    logging.disable(logging.NOTSET)


@pytest.fixture
def c2():
    return ring.siegel_c2()


@pytest.fixture
def a2u():
    return ring.unitary_a2()


@pytest.fixture
def c2_fixture():
    return strata.load_fixture('C2')


@pytest.fixture
def subset():
    def make(d, *members):
        return CyclicSubset.of(d, members)
    return make
