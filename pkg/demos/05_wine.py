"""Residual sugar, density and alcohol in the UCI white-wine data.

Download winequality-white.csv (semicolon separated) from the UCI Machine
Learning Repository and pass its path:

    python demos/05_wine.py path/to/winequality-white.csv

Expected table: components 0.250, 0.179, -0.429 and overall 0.000.
"""
import sys
import time

from medialcorr import CsvSpec, empirical_coefficients, load_csv
from medialcorr.io import format_table

if len(sys.argv) != 2:
    sys.exit(__doc__)

t0 = time.perf_counter()
data = load_csv(sys.argv[1], CsvSpec(";", True, ("residual sugar", "density", "alcohol")))
rep = empirical_coefficients(data)
print(format_table(rep), end="")
print(f"n={data.n}, {time.perf_counter() - t0:.3f} s")
