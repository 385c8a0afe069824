# Copyright (c) the histop authors.
# SPDX-License-Identifier: Apache-2.0
"""Optimal finite-rank hereditary laws for linear viscoelasticity."""

from histop._core import *  # noqa: F401,F403
from histop._core import __doc__  # noqa: F401

__version__ = "0.1.0"
