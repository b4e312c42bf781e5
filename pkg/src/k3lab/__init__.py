"""Point counts, Frobenius traces and component-group predictions for a
catalog of K3 surfaces with real or complex multiplication.

The package is organised around the pipeline

    ffield -> numfield -> models -> counting -> traces -> stats

with `monodromy` providing the exact signed-permutation model of the
component group and `cli` the command-line front end.
"""

__version__ = "0.1.0"
