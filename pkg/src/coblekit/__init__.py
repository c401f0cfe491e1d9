"""coblekit: exact and modular verification of Heisenberg-invariant geometry
around the Coble cubic, the Coble-Shioda variety and the G_32 reflection
arrangement."""

from .report import VerificationReport, __version__

__all__ = ["VerificationReport", "__version__"]
