# qsg/verification/registry.py
"""Identifiers of every checkable claim, grouped by what drives them."""
from typing import Dict, List

AXIOM_CLAIMS: Dict[str, str] = {
    "def1.1.2": "cocycle R(t, s + r) = R(t + r, s) R(t, r)",
    "def1.1.3": "strong continuity R(t, s) -> I as s -> 0",
    "def1.1.4": "growth bound ||R(t, s)|| <= M(t + s)",
    "def1.2": "generator A(t) as the limit of (R(t, s) - I)/s",
    "thm1.6.2": "averages (1/s) integral of R(t, h) dh tend to I",
    "thm1.6.3": "R(t0, s0) commutes with A(t)",
    "thm1.6.4": "derivative in s equals A(t + s) R(t, s)",
    "thm1.6.4.commuted": "derivative in s equals R(t, s) A(t + s)",
    "thm1.6.5": "integral equation R(t, s) - I = integral of A(t + h) R(t, h) dh",
}

IDENTITY_CLAIMS: Dict[str, str] = {
    "thm2.1.1": "(lambda - A(t)) D = e^(lambda s) - R(t, s)",
    "thm2.1.2": "D (lambda - A(t)) = e^(lambda s) - R(t, s)",
    "cor2.2": "semigroup case: D independent of t",
    "cor2.3.1": "power identity, right form",
    "cor2.3.2": "power identity, left form",
}

SUBSPACE_CLAIMS: Dict[str, str] = {
    "cor2.3.3": "N(lambda - A) lies in N(e^(lambda s) - R)",
    "cor2.3.4": "Rg(e^(lambda s) - R) lies in Rg(lambda - A)",
    "cor2.3.5": "N((lambda - A)^n) lies in N((e^(lambda s) - R)^n)",
    "cor2.3.6": "Rg((e^(lambda s) - R)^n) lies in Rg((lambda - A)^n)",
    "cor2.3.7": "hyper-range of e^(lambda s) - R lies in the hyper-range of lambda - A",
}

SPECTRAL_CLAIMS: Dict[str, str] = {
    "thm2.4.1": "e^(s sigma(A)) lies in sigma(R)",
    "thm2.4.2": "point spectrum mapping",
    "thm2.4.3": "approximate point spectrum mapping",
    "thm2.4.3.approx": "approximate eigenvectors of A are approximate eigenvectors of R",
    "thm2.4.4": "essential spectrum mapping",
    "thm2.4.4.alpha": "nullity and co-rank transfer from lambda - A to e^(lambda s) - R",
    "thm2.4.5": "residual spectrum mapping",
    "thm2.5": "regular spectrum mapping",
}

ALL_CLAIMS: Dict[str, str] = {**AXIOM_CLAIMS, **IDENTITY_CLAIMS, **SUBSPACE_CLAIMS, **SPECTRAL_CLAIMS}


def expand_claims(selection) -> List[str]:
    """'all' or a list of ids, returned sorted and without repetition."""
    if selection == "all":
        return sorted(ALL_CLAIMS)
    return sorted(set(selection))
