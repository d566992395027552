"""First-quantized adiabatic time evolution on a dense statevector."""

from fqate.grid import GridSpec, RegisterLayout
from fqate.statevector import StateVector

__all__ = ["GridSpec", "RegisterLayout", "StateVector"]
__version__ = "0.1.0"
