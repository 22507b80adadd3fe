"""matom: atomic and spectral structure of nonnegative matrices.

Atoms are the communicating blocks (strongly connected components of the
support pattern); on top of them the package computes the order between
atoms, convex/invariant/admissible sets, per-atom spectral radii and Perron
vectors, distinguished atoms and the cone of nonnegative eigenvectors,
monatomicity, critical atoms and the ascent with a structured basis of the
generalized eigenspace, and the cyclic decomposition of atoms under matrix
powers -- with exact brute-force oracles validating the structure at small
sizes.
"""

from .errors import InputError, InvariantViolation, PowerIterationError
from .matrix import (
    BUILTIN_EXAMPLES,
    KernelSpec,
    NonnegativeMatrix,
    builtin_example,
    discretize_kernel,
    dump_matrix_market,
    kernel_spec,
    load_kernel_spec,
    load_matrix_market,
)
from .sets import (
    SupportGraph,
    future,
    image,
    is_admissible,
    is_co_invariant,
    is_convex,
    is_invariant,
    is_irreducible,
    past,
    restrict,
    strict_future,
    strict_past,
    support_graph,
)
from .atoms import (
    AtomPartition,
    AtomPoset,
    atom_order,
    atoms,
    height,
    is_antichain,
    longest_chain,
    subset_heights,
    verify_atom_characterizations,
)
from .spectral import (
    MonatomicityVerdict,
    MultiplicityDecomposition,
    SpectralProfile,
    Tolerances,
    classify_monatomic,
    decompose_nonnegative_eigenvector,
    distinguished_atoms,
    distinguished_eigenvector,
    eigencone_basis,
    multiplicity_decomposition,
    perron_vector,
    radius_multiplicity,
    resolvent,
    spectral_profile,
    spectral_radius,
)
from .ascent import (
    CriticalStructure,
    critical_atoms,
    critical_structure,
    exact_ascent,
    generalized_basis,
    vector_index,
)
from .cycles import (
    CyclicDecomposition,
    covering_steps,
    cyclic_classes,
    period,
    power_atoms,
)
from .estimator import AtomicStructure
from .report import AnalysisOutcome, build_report, export_dot, parse_report, serialize_report

__version__ = "0.1.0"

__all__ = [
    "AnalysisOutcome",
    "AtomPartition",
    "AtomPoset",
    "AtomicStructure",
    "BUILTIN_EXAMPLES",
    "CriticalStructure",
    "CyclicDecomposition",
    "InputError",
    "InvariantViolation",
    "KernelSpec",
    "MonatomicityVerdict",
    "MultiplicityDecomposition",
    "NonnegativeMatrix",
    "PowerIterationError",
    "SpectralProfile",
    "SupportGraph",
    "Tolerances",
    "atom_order",
    "atoms",
    "build_report",
    "builtin_example",
    "classify_monatomic",
    "covering_steps",
    "critical_atoms",
    "critical_structure",
    "cyclic_classes",
    "decompose_nonnegative_eigenvector",
    "discretize_kernel",
    "distinguished_atoms",
    "distinguished_eigenvector",
    "dump_matrix_market",
    "eigencone_basis",
    "exact_ascent",
    "export_dot",
    "future",
    "generalized_basis",
    "height",
    "image",
    "is_admissible",
    "is_antichain",
    "is_co_invariant",
    "is_convex",
    "is_invariant",
    "is_irreducible",
    "kernel_spec",
    "load_kernel_spec",
    "load_matrix_market",
    "longest_chain",
    "multiplicity_decomposition",
    "parse_report",
    "past",
    "period",
    "perron_vector",
    "power_atoms",
    "radius_multiplicity",
    "resolvent",
    "restrict",
    "serialize_report",
    "spectral_profile",
    "spectral_radius",
    "strict_future",
    "strict_past",
    "subset_heights",
    "support_graph",
    "verify_atom_characterizations",
    "vector_index",
]
