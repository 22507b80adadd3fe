"""Structure report: one serializable aggregate of the whole analysis.

The report is a plain dict with deterministic content (canonical atom
order, sorted members, version ``schema: 1``); ``serialize_report`` renders
byte-identical JSON for identical inputs and tolerances.  Exact rational
scalars are rendered as strings to avoid float loss.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError
from .matrix import NonnegativeMatrix
from . import cycles, oracle, sets
from .ascent import CriticalStructure, critical_structure
from .atoms import verify_atom_characterizations
from .spectral import (
    DEFAULT_TOLERANCES,
    MonatomicityVerdict,
    SpectralProfile,
    Tolerances,
    classify_monatomic,
    distinguished_atoms,
    distinguished_eigenvector,
    radius_multiplicity,
    spectral_profile,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AnalysisOutcome:
    """Everything the pipeline computed, plus the serializable report."""

    matrix: NonnegativeMatrix
    profile: SpectralProfile
    critical: CriticalStructure | None
    monatomic: MonatomicityVerdict | None
    report: dict


def build_report(matrix: NonnegativeMatrix, tol: Tolerances = DEFAULT_TOLERANCES,
                 power: int | None = None, with_oracle: bool = False,
                 descriptor: dict | None = None) -> AnalysisOutcome:
    """Run the full pipeline on a matrix and assemble the report."""
    profile = spectral_profile(matrix, tol)
    critical = critical_structure(profile) if profile.radius > 0.0 else None
    monatomic = classify_monatomic(matrix, tol) if profile.radius > 0.0 else None

    report: dict = {
        "schema": SCHEMA_VERSION,
        "input": descriptor or {"source": "matrix", "n": matrix.n, "backend": matrix.backend},
        "n": matrix.n,
        "backend": matrix.backend,
        "tolerances": {
            "rtol": tol.rtol,
            "atol_factor": tol.atol_factor,
            "pos_tol_factor": tol.pos_tol_factor,
            "support_threshold": tol.support_threshold,
        },
        "radius": profile.radius,
        "radius_multiplicity": (
            radius_multiplicity(profile) if profile.radius > 0.0 else None
        ),
        "ambiguous": profile.ambiguous,
        "atoms": [
            {
                "id": a.index,
                "members": sorted(a.members),
                "nonzero": a.nonzero,
                "radius": a.radius,
                "distinguished": a.distinguished,
                "critical": a.critical,
                "borderline": a.borderline,
            }
            for a in profile.atom_data
        ],
        "poset": {"covers": [list(c) for c in profile.poset.covers]},
        "distinguished_eigenvalues": [
            {
                "value": value,
                "atoms": list(group),
                "vectors": [
                    [float(x) for x in distinguished_eigenvector(profile, k)] for k in group
                ],
            }
            for value, group in distinguished_atoms(profile).items()
        ],
        "monatomic": _monatomic_section(monatomic),
        "critical": _critical_section(critical),
        "periodicity": _periodicity_section(profile, power),
    }
    if matrix.n <= oracle.ENUMERATION_CAP:
        fam = oracle.enumerate_families(profile.graph)
        report["invariant_sets"] = sorted(
            (sorted(oracle.mask_to_set(m)) for m in fam.invariant), key=lambda s: (len(s), s)
        )
    if with_oracle:
        report["oracle"] = _oracle_section(matrix, profile, tol)
    return AnalysisOutcome(
        matrix=matrix, profile=profile, critical=critical, monatomic=monatomic, report=report
    )


def _monatomic_section(verdict: MonatomicityVerdict | None) -> dict | None:
    if verdict is None:
        return None
    return {
        "is_monatomic": verdict.is_monatomic,
        "nonzero_atom": sorted(verdict.nonzero_atom) if verdict.nonzero_atom else None,
        "right_vector": _vector(verdict.right_vector),
        "left_vector": _vector(verdict.left_vector),
        "conditions": dict(verdict.conditions),
        "evidence": dict(verdict.evidence),
        "borderline": verdict.borderline,
    }


def _critical_section(critical: CriticalStructure | None) -> dict | None:
    if critical is None:
        return None
    return {
        "atom_ids": list(critical.atom_ids),
        "heights": {str(a): critical.heights[a] for a in critical.atom_ids},
        "ascent": critical.ascent,
        "covers": [list(c) for c in critical.covers],
        "basis": [_vector(w) for w in critical.basis],
        "basis_matrix": [[float(x) for x in row] for row in critical.basis_matrix],
        "borderline": critical.borderline,
    }


def _periodicity_section(profile: SpectralProfile, power: int | None) -> list | None:
    if power is None:
        return None
    out = []
    for a in profile.atom_data:
        if not a.nonzero:
            continue
        decomposition = cycles.cyclic_classes(profile.graph, a.members, power)
        out.append(
            {
                "atom": a.index,
                "power": power,
                "period": cycles.period(profile.graph, a.members),
                "class_count": decomposition.count,
                "classes": [sorted(c) for c in decomposition.classes],
            }
        )
    return out


def _oracle_section(matrix: NonnegativeMatrix, profile: SpectralProfile,
                    tol: Tolerances) -> dict:
    if matrix.n > oracle.ENUMERATION_CAP:
        raise InputError(
            f"oracle cross-checks require n <= {oracle.ENUMERATION_CAP}, got {matrix.n}"
        )
    g = profile.graph
    fam = oracle.enumerate_families(g)
    full = range(1 << g.n)
    agreement = all(
        sets.is_invariant(g, oracle.mask_to_set(m)) == (m in set(fam.invariant))
        and sets.is_convex(g, oracle.mask_to_set(m)) == (m in set(fam.convex))
        and sets.is_admissible(g, oracle.mask_to_set(m)) == (m in set(fam.admissible))
        and sets.is_irreducible(g, oracle.mask_to_set(m)) == (m in set(fam.irreducible))
        for m in full
    )
    characterizations = verify_atom_characterizations(g)
    reachability = all(
        oracle.boolean_reachability(g, atom.members) == sets.future(g, atom.members)
        for atom in profile.atom_data
    )
    return {
        "set_calculus_agreement": agreement,
        "atom_characterizations_agree": characterizations.agree,
        "future_matches_boolean_power": reachability,
        "families": {
            "invariant": len(fam.invariant),
            "co_invariant": len(fam.co_invariant),
            "convex": len(fam.convex),
            "admissible": len(fam.admissible),
            "irreducible": len(fam.irreducible),
        },
        "restriction_admissibility_probe": oracle.restriction_admissibility_probe(g),
    }


def _vector(v: np.ndarray | None) -> list | None:
    return None if v is None else [float(x) for x in v]


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"not JSON serializable: {obj!r}")


def serialize_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"


def parse_report(text: str) -> dict:
    return json.loads(text)


def export_dot(report: dict) -> str:
    """Graphviz rendering of the atom poset.

    One node per atom labeled with its radius; distinguished atoms get a
    thick outline, critical atoms are filled; arrows follow the cover
    relation downward (from an atom to the atoms just below it).
    """
    lines = ["digraph atoms {", "  rankdir=TB;", '  node [shape=circle];']
    for atom in report["atoms"]:
        attrs = [f'label="{atom["radius"]:.6g}"']
        if atom["distinguished"]:
            attrs.append("penwidth=3")
        if atom["critical"]:
            attrs.append("style=filled")
            attrs.append('fillcolor="gold"')
        lines.append(f'  a{atom["id"]} [{" ".join(attrs)}];')
    for upper, lower in report["poset"]["covers"]:
        lines.append(f"  a{upper} -> a{lower};")
    lines.append("}")
    return "\n".join(lines) + "\n"
