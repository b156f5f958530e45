"""Explicit (l,l,l)-isogenies from genus-3 hyperelliptic Jacobians to
Jacobians of plane quartics, via algebraic theta functions."""
import atexit
import gc

# flint objects must be released before the interpreter tears down the
# extension module; collect reference cycles while it is still alive
atexit.register(gc.collect)

__version__ = "0.1.0"
