"""Line-chart smoothing techniques and the machinery to rank them.

The package is organised as

* :mod:`linesmooth.core`      -- series validation and grid resampling
* :mod:`linesmooth.smoothers` -- the twelve smoothing techniques
* :mod:`linesmooth.metrics`   -- effectiveness measures and persistence diagrams
* :mod:`linesmooth.entropy`   -- approximate entropy (smoothing-level baseline)
* :mod:`linesmooth.pipeline`  -- level sweeps, robust fits, areas, ranks, grades
* :mod:`linesmooth.io`, :mod:`linesmooth.synth`, :mod:`linesmooth.svg`,
  :mod:`linesmooth.cli` -- ingestion, synthetic data, plots and the CLI
"""

from linesmooth.core import PointSet, Series, resample_to_grid, validate
from linesmooth.entropy import ApExParams, approx_entropy
from linesmooth.errors import LineSmoothError
from linesmooth.metrics import METRICS, persistence_diagram
from linesmooth.smoothers import KINDS, SmootherSpec, SmoothResult, smooth

__all__ = [
    "ApExParams",
    "KINDS",
    "LineSmoothError",
    "METRICS",
    "PointSet",
    "Series",
    "SmoothResult",
    "SmootherSpec",
    "approx_entropy",
    "persistence_diagram",
    "resample_to_grid",
    "smooth",
    "validate",
]
