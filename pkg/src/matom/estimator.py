"""Scikit-learn style estimator wrapping the full analysis pipeline.

``AtomicStructure.fit(X)`` accepts a square nonnegative array (or a
:class:`NonnegativeMatrix`) and exposes the computed structure through
fitted attributes; atoms act as cluster labels, so the estimator composes
with the usual sklearn tooling (``get_params`` / ``set_params``, ``clone``,
``fit_predict``).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import InputError
from .matrix import NonnegativeMatrix
from .report import build_report
from .spectral import Tolerances


class AtomicStructure(ClusterMixin, BaseEstimator):
    """Atomic and spectral structure analyzer for nonnegative matrices.

    Parameters
    ----------
    rtol : float
        Relative tolerance for eigen-residuals and radius convergence.
    atol_factor : float
        Radius ties are resolved within ``atol_factor * rho(T)``.
    pos_tol_factor : float
        Support detection threshold for computed vectors, relative to the
        largest entry.
    support_threshold : float
        Relative cut below which a float entry counts as structural zero.
    exact : bool
        Convert array input to the exact rational backend.
    power : int or None
        Also compute the cyclic decomposition of every non-zero atom under
        this matrix power.
    oracle : bool
        Run the brute-force enumeration cross-checks (requires n <= 16).

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
        Atom index of every node (atoms are the clusters).
    atoms_ : list of sorted node lists, canonical order.
    radius_ : float
        Spectral radius.
    ascent_ : int or None
        Ascent at the spectral radius (None when ``rho(T) = 0``).
    report_ : dict
        The full serializable structure report.
    """

    def __init__(self, rtol: float = 1e-10, atol_factor: float = 1e-9,
                 pos_tol_factor: float = 1e-12, support_threshold: float = 1e-12,
                 exact: bool = False, power: int | None = None, oracle: bool = False):
        self.rtol = rtol
        self.atol_factor = atol_factor
        self.pos_tol_factor = pos_tol_factor
        self.support_threshold = support_threshold
        self.exact = exact
        self.power = power
        self.oracle = oracle

    def _tolerances(self) -> Tolerances:
        return Tolerances(
            rtol=self.rtol,
            atol_factor=self.atol_factor,
            pos_tol_factor=self.pos_tol_factor,
            support_threshold=self.support_threshold,
        )

    def fit(self, X, y=None):
        """Compute the structure of the square nonnegative matrix ``X``."""
        if isinstance(X, NonnegativeMatrix):
            matrix = X
        else:
            arr = check_array(X, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise InputError(f"expected a square matrix, got shape {arr.shape}")
            matrix = NonnegativeMatrix(arr, backend="exact" if self.exact else "float")
        outcome = build_report(
            matrix,
            tol=self._tolerances(),
            power=self.power,
            with_oracle=self.oracle,
            descriptor={"source": "array", "n": matrix.n, "backend": matrix.backend},
        )
        self.matrix_ = matrix
        self.n_features_in_ = matrix.n
        self.profile_ = outcome.profile
        self.partition_ = outcome.profile.partition
        self.poset_ = outcome.profile.poset
        self.critical_ = outcome.critical
        self.monatomic_ = outcome.monatomic
        self.report_ = outcome.report
        self.atoms_ = [sorted(a) for a in self.partition_.atoms]
        self.labels_ = np.asarray(self.partition_.atom_of, dtype=int)
        self.n_atoms_ = len(self.atoms_)
        self.radius_ = outcome.profile.radius
        self.ascent_ = outcome.critical.ascent if outcome.critical is not None else None
        return self

    def predict(self, X=None):
        """Atom labels of the fitted matrix (clustering semantics)."""
        check_is_fitted(self, "labels_")
        return self.labels_

    def get_report(self) -> dict:
        check_is_fitted(self, "report_")
        return self.report_
