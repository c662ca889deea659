"""General inverse sigma_k polynomial toolkit.

Stability tests (right-Noetherian root chains), the coefficient/root
homeomorphism, cone dominance, continuity-path construction, and seeded
property suites for the associated polynomial inequalities.
"""

from .backend import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
