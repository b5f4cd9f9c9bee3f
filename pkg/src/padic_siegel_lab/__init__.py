"""Truncated Fourier expansions of degree-2 Maass lifts with non-real
Nebentypus, and p-adic convergence experiments on them."""

import sys

# exact encodings of large Bernoulli numbers exceed the default digit limit
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

__version__ = "0.1.0"
