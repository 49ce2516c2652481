"""Bordered Floer homology engine over F2.

Exact arithmetic in the genus-1 strands algebra, a unified container for
chain complexes and one- or two-sided (bi)modules, box tensor products,
filtered reduction with spectral-sequence pages and tau, framed knot
complement modules built from knot Floer chain models, embedded reference
(bi)modules for the three-component pattern, and a satellite tau pipeline
with a closed-form oracle.
"""

from .algebra import (
    I0, I1, R1, R2, R3, R12, R23, R123,
    chord_idempotents, mul, parse_element, format_element,
)
from .structures import (
    BorderedStructure, Generator, OperationTerm, SideSpec,
    StructureError, StructureFormatError,
    is_bounded, load_structure, save_structure,
    validate_a_infinity, validate_generic, validate_type_d,
)
from .tensor import TensorPlan, box, glue_filtered_complex
from .reduction import (
    CancellationPolicy, ReductionResult, brute_homology, cancel_pair, reduce,
)
from .knot_cfd import CFKModel, FramedComplement, build_cfd, builtin_model, validate_model
from .pipeline import (
    SatelliteReport, SatelliteRequest, sweep, tau_satellite, tau_whitehead,
)

__version__ = "0.1.0"
