"""Exact verification of bicovariant differential calculi on SL_q(N) and GL_q(N).

Modules: ``scalars`` (rational functions), ``exactla`` (exact and modular
linear algebra), ``qgroup`` (R-matrix, functionals, right action),
``fodc`` (omega and S maps, the ideal R, f-constants), ``braidext``
(braiding, antisymmetrizers, Lambda_w), ``invariants`` (bi-invariant forms),
``ideals`` (uJ, sJ, Tsygan relations), ``suite`` (structural checks) and
``cli``.
"""

from .qgroup import CalcParams, structure_constants
from .report import TOOL_VERSION, Check, Report

__version__ = TOOL_VERSION
__all__ = ["CalcParams", "structure_constants", "Check", "Report", "__version__"]
