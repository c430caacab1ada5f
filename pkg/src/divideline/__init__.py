"""Dividing lines between two geographic point populations.

A class-balanced ensemble of linear SVMs gives a straight dividing line; an
ensemble of small regression networks gives an averaged map whose level set
is a curved one.  The same map machinery turns regional incomes into an
income threshold contour.
"""

__version__ = "0.1.0"

from .errors import DividelineError, InputError  # noqa: E402,F401
