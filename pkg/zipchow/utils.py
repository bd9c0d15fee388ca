# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import collections
import os
import random
import timeit

import numpy

DEFAULT_MAX_D = 12
DEFAULT_MAX_COSETS = 100000


def _env_int(name, default):
    value = os.environ.get(name)
    if value is None or value == '':
        return default
    try:
        parsed = int(value)
    except ValueError:
        raise ValueError(f'{name} must be a positive integer, got {value!r}')
    if parsed < 1:
        raise ValueError(f'{name} must be a positive integer, got {value!r}')
    return parsed


def max_d():
    return _env_int('ZIPCHOW_MAX_D', DEFAULT_MAX_D)


def max_cosets():
    return _env_int('ZIPCHOW_MAX_COSETS', DEFAULT_MAX_COSETS)


def parse_int_list(text):
    """'2,3' -> [2, 3]; the empty string is the empty list."""
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(',')]
    except ValueError:
        raise ValueError(f'Expected comma-separated integers, got {text!r}')


def seed(seed):
    random.seed(seed)
    numpy.random.seed(seed)


class Timings:
    """Running mean and variance of named sections. Not thread-safe."""

    def __init__(self):
        self._means = collections.defaultdict(float)
        self._vars = collections.defaultdict(float)
        self._counts = collections.defaultdict(int)
        self.reset()

    def reset(self):
        self.last_time = timeit.default_timer()

    def time(self, name):
        now = timeit.default_timer()
        x = now - self.last_time
        self.last_time = now

        n = self._counts[name]
        mean = self._means[name] + (x - self._means[name]) / (n + 1)
        var = (
            n * self._vars[name] + n * (self._means[name] - mean) ** 2 + (x - mean) ** 2
        ) / (n + 1)

        self._means[name] = mean
        self._vars[name] = var
        self._counts[name] += 1

    def means(self):
        return dict(self._means)

    def stds(self):
        return {k: v ** 0.5 for k, v in self._vars.items()}

    def summary(self, prefix=''):
        means = self.means()
        stds = self.stds()
        total = sum(means.values())

        result = prefix
        for k in sorted(means, key=means.get, reverse=True):
            result += '\n    %s: %.3fms +- %.3fms (%.2f%%) ' % (
                k,
                1000 * means[k],
                1000 * stds[k],
                100 * means[k] / total if total else 0.0,
            )
        result += '\nTotal: %.3fms' % (1000 * total)
        return result
