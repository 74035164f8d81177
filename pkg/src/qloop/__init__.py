"""Looped unitary evolutions.

Feedback loops closed around unitary scattering maps, the two-loop time
machine, their second-quantized lift and the ring-resonator analogue.
"""
from ._kernels import BACKEND
from .blockops import Partition, PartitionedUnitary, haar_random_unitary, is_unitary, unitarity_defect
from .errors import DimensionError, NumericalError, QloopError, SingularityError, ValidationError
from .fock import FockSpace, jordan_map, machine_phases, second_quantized_gate
from .loopcore import elementary_loop, s_form, time_machine
from .resonator import ResonatorParams, crosscheck_lossless, resonator_fields

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DimensionError",
    "FockSpace",
    "NumericalError",
    "Partition",
    "PartitionedUnitary",
    "QloopError",
    "ResonatorParams",
    "SingularityError",
    "ValidationError",
    "crosscheck_lossless",
    "elementary_loop",
    "haar_random_unitary",
    "is_unitary",
    "jordan_map",
    "machine_phases",
    "resonator_fields",
    "s_form",
    "second_quantized_gate",
    "time_machine",
    "unitarity_defect",
]
