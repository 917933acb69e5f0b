"""Boundedness and range analysis for multiplication and composition operators on Orlicz spaces.

Modules:

* ``young``: Young functions, numerical conjugates and growth certificates.
* ``measure``: atomic-plus-interval measure spaces, integration with divergence detection.
* ``orlicz``: modulars and Luxemburg norms.
* ``operators``: three-state verdicts for ``M_u`` and ``C_T``.
* ``range``: closed-range and finite-rank classification.
* ``oracle_lp``: closed forms for the ``L^p`` special case.
* ``cli``: config-driven front end.
"""

from .errors import ConfigError, ConjugationError, OrliczError, PreconditionError, QuadratureError

__version__ = "0.1.0"

__all__ = ["ConfigError", "ConjugationError", "OrliczError", "PreconditionError", "QuadratureError"]
