"""Matrix data model: nonnegative matrices, kernel discretization, built-in operators.

A :class:`NonnegativeMatrix` is a dense square matrix with entrywise
nonnegative values on one of two numeric backends:

* ``"float"`` -- float64, the default working backend;
* ``"exact"`` -- :class:`fractions.Fraction` entries, used where exact rank
  and multiplicity computations are required.

The convention throughout the package is that entry ``T[i][j]`` is the mass
flowing from node ``j`` to node ``i`` (the matrix acts on column vectors), so
a positive entry ``T[i][j]`` is the directed edge ``j -> i`` of the
communication graph.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .errors import InputError

FLOAT = "float"
EXACT = "exact"
_BACKENDS = (FLOAT, EXACT)


class NonnegativeMatrix:
    """Immutable dense square matrix with nonnegative entries.

    Construction validates squareness and nonnegativity and freezes the
    underlying array, so instances are safe to share across threads.
    """

    __slots__ = ("n", "entries", "backend")

    def __init__(self, entries, backend: str = FLOAT):
        if backend not in _BACKENDS:
            raise InputError(f"unknown backend {backend!r}, expected one of {_BACKENDS}")
        if backend == FLOAT:
            arr = np.array(entries, dtype=float)
            _check_square(arr.shape)
            if not np.all(np.isfinite(arr)):
                raise InputError("matrix entries must be finite")
            if arr.size and float(arr.min()) < 0.0:
                i, j = np.unravel_index(int(np.argmin(arr)), arr.shape)
                raise InputError(f"negative entry {arr[i, j]!r} at ({i}, {j})")
        else:
            rows = [[_as_fraction(x) for x in row] for row in entries]
            _check_square((len(rows), len(rows[0]) if rows else 0))
            for i, row in enumerate(rows):
                if len(row) != len(rows):
                    raise InputError("matrix must be square")
                for j, x in enumerate(row):
                    if x < 0:
                        raise InputError(f"negative entry {x} at ({i}, {j})")
            arr = np.empty((len(rows), len(rows)), dtype=object)
            for i, row in enumerate(rows):
                for j, x in enumerate(row):
                    arr[i, j] = x
        arr.setflags(write=False)
        self.n = int(arr.shape[0])
        self.entries = arr
        self.backend = backend

    # -- basic queries ---------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.backend == EXACT

    def entry(self, i: int, j: int):
        return self.entries[i, j]

    def to_float(self) -> np.ndarray:
        """A mutable float64 copy of the entries."""
        return np.array(self.entries, dtype=float)

    def rows(self) -> list[list]:
        return [list(row) for row in self.entries]

    def rational_rows(self) -> list[list[Fraction]]:
        """Entries as Fractions; requires the exact backend."""
        if not self.is_exact:
            raise InputError(
                "operation requires the exact backend; construct the matrix "
                "with backend='exact' (Fraction entries)"
            )
        return [list(row) for row in self.entries]

    def support_mask(self, threshold: float = 1e-12) -> np.ndarray:
        """Boolean mask of structurally positive entries.

        On the float backend an entry counts as zero when it is at most
        ``threshold`` times the largest entry; the exact backend compares
        literally against zero.
        """
        if self.is_exact:
            return np.array([[x != 0 for x in row] for row in self.entries], dtype=bool)
        arr = self.entries
        top = float(arr.max()) if self.n else 0.0
        cut = threshold * top
        return arr > cut

    # -- derived matrices ------------------------------------------------

    def transpose(self) -> "NonnegativeMatrix":
        return NonnegativeMatrix(self.entries.T, backend=self.backend)

    def restrict(self, members: Iterable[int]) -> "NonnegativeMatrix":
        """Zero out all rows and columns outside ``members`` (same size)."""
        keep = _validate_members(members, self.n)
        if not keep:
            raise InputError("restriction to the empty set")
        mask = np.zeros(self.n, dtype=bool)
        mask[sorted(keep)] = True
        if self.is_exact:
            zero = Fraction(0)
            out = np.array(
                [
                    [self.entries[i, j] if (mask[i] and mask[j]) else zero for j in range(self.n)]
                    for i in range(self.n)
                ],
                dtype=object,
            )
        else:
            out = self.to_float()
            out[~mask, :] = 0.0
            out[:, ~mask] = 0.0
        return NonnegativeMatrix(out, backend=self.backend)

    def block(self, members: Iterable[int]) -> np.ndarray:
        """The dense sub-block indexed by the sorted members (raw array)."""
        idx = sorted(_validate_members(members, self.n))
        return self.entries[np.ix_(idx, idx)]

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, NonnegativeMatrix):
            return NotImplemented
        return (
            self.backend == other.backend
            and self.n == other.n
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __repr__(self) -> str:
        return f"NonnegativeMatrix(n={self.n}, backend={self.backend!r})"


def _as_fraction(x) -> Fraction:
    try:
        return Fraction(x)
    except (ValueError, TypeError) as exc:
        raise InputError(f"cannot interpret {x!r} as an exact rational") from exc


def _check_square(shape) -> None:
    if len(shape) != 2 or shape[0] != shape[1]:
        raise InputError(f"matrix must be square, got shape {tuple(shape)}")
    if shape[0] < 1:
        raise InputError("matrix dimension must be at least 1")


def _validate_members(members: Iterable[int], n: int) -> frozenset:
    out = frozenset(int(x) for x in members)
    for x in out:
        if not 0 <= x < n:
            raise InputError(f"index {x} out of range for dimension {n}")
    return out


# ---------------------------------------------------------------------------
# Kernel operators on [0, 1]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelSpec:
    """A nonnegative kernel on [0, 1]^2 together with a grid size."""

    name: str
    fn: Callable[[float, float], float]
    grid: int

    def __post_init__(self):
        if self.grid < 1:
            raise InputError("grid size must be at least 1")


def _volterra(x: float, y: float) -> float:
    return 1.0 if x >= y else 0.0


def _k1(x: float, y: float) -> float:
    # two half-band kernel: 1{x <= 1/2 <= y <= x + 1/2} + 1{x >= 1/2, y <= x - 1/2}
    if x <= 0.5 <= y <= x + 0.5:
        return 1.0
    if x >= 0.5 and y <= x - 0.5:
        return 1.0
    return 0.0


def _k3(x: float, y: float) -> float:
    # anti-diagonal block kernel: 1{x <= 1/2 <= y} + 1{y <= 1/2 <= x}
    if x <= 0.5 <= y or y <= 0.5 <= x:
        return 1.0
    return 0.0


KERNELS: dict[str, Callable[[float, float], float]] = {
    "volterra": _volterra,
    "k1": _k1,
    "k3": _k3,
}


def kernel_spec(name: str, grid: int) -> KernelSpec:
    if name not in KERNELS:
        raise InputError(f"unknown kernel {name!r}, expected one of {sorted(KERNELS)}")
    return KernelSpec(name=name, fn=KERNELS[name], grid=grid)


def load_kernel_spec(text: str) -> KernelSpec:
    """Parse the JSON kernel description ``{"kernel": <name>, "grid": <m>}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid kernel spec JSON: {exc}") from exc
    if not isinstance(data, dict) or set(data) - {"kernel", "grid"}:
        raise InputError('kernel spec must be an object {"kernel": ..., "grid": ...}')
    name = data.get("kernel")
    grid = data.get("grid")
    if not isinstance(name, str) or not isinstance(grid, int) or isinstance(grid, bool):
        raise InputError('kernel spec fields: "kernel" (string) and "grid" (integer)')
    return kernel_spec(name, grid)


def discretize_kernel(spec: KernelSpec, backend: str = FLOAT) -> NonnegativeMatrix:
    """Midpoint-rule discretization of a kernel operator on [0, 1].

    ``T[i][j] = k(x_i, x_j) / m`` with ``x_i = (i + 1/2) / m``.  Midpoints
    keep indicator kernels away from their boundary lines, so the support of
    the result is exactly the sampled support of the kernel.
    """
    m = spec.grid
    xs = [(i + 0.5) / m for i in range(m)]
    rows: list[list] = []
    for i in range(m):
        row = []
        for j in range(m):
            val = spec.fn(xs[i], xs[j])
            if not math.isfinite(val):
                raise InputError(f"kernel {spec.name!r} is not finite at ({xs[i]}, {xs[j]})")
            if val < 0:
                raise InputError(f"kernel {spec.name!r} is negative at ({xs[i]}, {xs[j]})")
            if backend == EXACT:
                row.append(_as_fraction(val) / m)
            else:
                row.append(val / m)
        rows.append(row)
    return NonnegativeMatrix(rows, backend=backend)


# ---------------------------------------------------------------------------
# Built-in example operators
# ---------------------------------------------------------------------------

# Six-node operator with one 3-node communicating block feeding two parallel
# single nodes that merge into a sink; unspecified positive weights are 1.
_SIX_NODE = [
    [0, 1, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 0],
]

_TWO_CYCLE = [[0, 1], [1, 0]]

# One self-loop feeding another: two atoms with equal radius, defective radius.
_GRAPH_SUPP = [[1, 0], [1, 1]]

BUILTIN_EXAMPLES = (
    "fig-m-graph-6",
    "two-cycle",
    "graph-supp",
    "volterra-m",
    "kernel-k1-m",
    "kernel-k3-m",
)

_KERNEL_EXAMPLES = {
    "volterra-m": "volterra",
    "kernel-k1-m": "k1",
    "kernel-k3-m": "k3",
}


def builtin_example(name: str, grid: int = 4, backend: str = FLOAT) -> NonnegativeMatrix:
    """Return one of the named example operators.

    Kernel-backed fixtures (``volterra-m``, ``kernel-k1-m``, ``kernel-k3-m``)
    are parameterized by ``grid``; a trailing integer in the name, as in
    ``volterra-8``, overrides it.
    """
    base, kernel_grid = _split_grid_suffix(name)
    if kernel_grid is not None:
        grid = kernel_grid
    if base in _KERNEL_EXAMPLES:
        return discretize_kernel(kernel_spec(_KERNEL_EXAMPLES[base], grid), backend=backend)
    if base == "fig-m-graph-6":
        return NonnegativeMatrix(_SIX_NODE, backend=backend)
    if base == "two-cycle":
        return NonnegativeMatrix(_TWO_CYCLE, backend=backend)
    if base == "graph-supp":
        return NonnegativeMatrix(_GRAPH_SUPP, backend=backend)
    raise InputError(f"unknown example {name!r}, expected one of {BUILTIN_EXAMPLES}")


def _split_grid_suffix(name: str) -> tuple[str, int | None]:
    if name in BUILTIN_EXAMPLES:
        return name, None
    head, sep, tail = name.rpartition("-")
    if sep and tail.isdigit():
        base = head + "-m" if head + "-m" in _KERNEL_EXAMPLES else head
        if base in _KERNEL_EXAMPLES:
            return base, int(tail)
    return name, None


# ---------------------------------------------------------------------------
# Matrix Market I/O (coordinate + array, real/integer, general)
# ---------------------------------------------------------------------------


def load_matrix_market(text: str, backend: str = FLOAT) -> NonnegativeMatrix:
    """Parse a Matrix Market file into a dense nonnegative matrix.

    Supports the ``array`` (dense, column-major) and ``coordinate`` (sparse,
    1-based, unlisted entries zero, duplicates accumulated) formats with
    field ``real`` or ``integer`` and symmetry ``general``.  On the exact
    backend, values are parsed as exact rationals; ``p/q`` tokens are
    accepted as an extension so exact matrices round-trip losslessly.
    """
    lines = text.splitlines()
    if not lines:
        raise InputError("empty Matrix Market input")
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket" or header[1].lower() != "matrix":
        raise InputError(f"malformed Matrix Market header: {lines[0]!r}")
    layout, field, symmetry = (tok.lower() for tok in header[2:5])
    if layout not in ("coordinate", "array"):
        raise InputError(f"unsupported Matrix Market layout {layout!r}")
    if field not in ("real", "integer"):
        raise InputError(f"unsupported Matrix Market field {field!r} (real/integer only)")
    if symmetry != "general":
        raise InputError(f"unsupported Matrix Market symmetry {symmetry!r} (general only)")

    body = [ln for ln in (ln.strip() for ln in lines[1:]) if ln and not ln.startswith("%")]
    if not body:
        raise InputError("missing Matrix Market size line")
    parse = _as_fraction if backend == EXACT else _parse_float

    size = body[0].split()
    if layout == "array":
        if len(size) != 2:
            raise InputError(f"malformed array size line: {body[0]!r}")
        nrows, ncols = (_parse_dim(tok) for tok in size)
        if nrows != ncols:
            raise InputError(f"matrix must be square, got {nrows}x{ncols}")
        values = []
        for ln in body[1:]:
            values.extend(ln.split())
        if len(values) != nrows * ncols:
            raise InputError(f"expected {nrows * ncols} array values, got {len(values)}")
        zero = Fraction(0) if backend == EXACT else 0.0
        rows = [[zero] * ncols for _ in range(nrows)]
        k = 0
        for j in range(ncols):  # column-major per the format definition
            for i in range(nrows):
                rows[i][j] = parse(values[k])
                k += 1
        return NonnegativeMatrix(rows, backend=backend)

    if len(size) != 3:
        raise InputError(f"malformed coordinate size line: {body[0]!r}")
    nrows, ncols = _parse_dim(size[0]), _parse_dim(size[1])
    nnz = _parse_dim(size[2], allow_zero=True)
    if nrows != ncols:
        raise InputError(f"matrix must be square, got {nrows}x{ncols}")
    entries = body[1:]
    if len(entries) != nnz:
        raise InputError(f"expected {nnz} coordinate entries, got {len(entries)}")
    zero = Fraction(0) if backend == EXACT else 0.0
    rows = [[zero] * ncols for _ in range(nrows)]
    for ln in entries:
        toks = ln.split()
        if len(toks) != 3:
            raise InputError(f"malformed coordinate entry: {ln!r}")
        i, j = _parse_dim(toks[0]) - 1, _parse_dim(toks[1]) - 1
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise InputError(f"coordinate ({i + 1}, {j + 1}) out of bounds")
        rows[i][j] += parse(toks[2])
    return NonnegativeMatrix(rows, backend=backend)


def dump_matrix_market(matrix: NonnegativeMatrix, layout: str = "array") -> str:
    """Serialize to Matrix Market text; exact values round-trip losslessly."""
    if layout not in ("array", "coordinate"):
        raise InputError(f"unsupported layout {layout!r}")
    out = [f"%%MatrixMarket matrix {layout} real general"]
    n = matrix.n
    if layout == "array":
        out.append(f"{n} {n}")
        for j in range(n):
            for i in range(n):
                out.append(_format_value(matrix.entries[i, j]))
    else:
        coords = [
            (i, j)
            for i in range(n)
            for j in range(n)
            if (matrix.entries[i, j] != 0 if matrix.is_exact else matrix.entries[i, j] != 0.0)
        ]
        out.append(f"{n} {n} {len(coords)}")
        for i, j in coords:
            out.append(f"{i + 1} {j + 1} {_format_value(matrix.entries[i, j])}")
    return "\n".join(out) + "\n"


def _parse_float(tok: str) -> float:
    try:
        return float(tok)
    except ValueError as exc:
        raise InputError(f"invalid numeric token {tok!r}") from exc


def _parse_dim(tok: str, allow_zero: bool = False) -> int:
    try:
        value = int(tok)
    except ValueError as exc:
        raise InputError(f"invalid integer token {tok!r}") from exc
    if value < (0 if allow_zero else 1):
        raise InputError(f"invalid size value {value}")
    return value


def _format_value(x) -> str:
    if isinstance(x, Fraction):
        dec = _exact_decimal(x)
        return dec if dec is not None else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def _exact_decimal(x: Fraction) -> str | None:
    """Exact decimal expansion when the denominator is of the form 2^a 5^b."""
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    shift = max(twos, fives)
    scaled = x.numerator * 10**shift // x.denominator
    if shift == 0:
        return str(scaled)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(shift + 1, "0")
    return f"{sign}{digits[:-shift]}.{digits[-shift:]}"
