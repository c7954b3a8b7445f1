"""The ambient toric layer: multiplicities, admissible sets and the fan Theta-dagger.

Every color ``D_i`` is replaced by ``s_i`` generators ``S_i1..S_is_i`` of the
same degree ``phi(D_i)``; the rays keep one generator ``W_j`` each, of degree
``phi(Y_j)``.  The ambient rays ``v_ij, w_j`` are the Gale dual of this
degree matrix, i.e. the columns of a basis of its kernel.  The lattice is
thereby fixed only up to linear equivalence, which is all the cone
statements below depend on.
"""

from __future__ import annotations

import itertools
import warnings
from typing import Iterable, NamedTuple, Sequence

from .cone import Cone, Limits, cone_from_generators
from .errors import ConfigurationError
from .gale import PhiCone, PsiCone, PsiConfiguration, sharp_bunch_to_fan
from .rational import kernel_basis

DEFAULT_MULTIPLICITY = 2


class AmbientConfiguration:
    def __init__(self, base: PsiConfiguration, multiplicities: Sequence[int] | None = None):
        r, n = base.r, base.n
        if multiplicities is None:
            multiplicities = [DEFAULT_MULTIPLICITY] * r
        multiplicities = tuple(int(s) for s in multiplicities)
        if len(multiplicities) != r:
            raise ConfigurationError(f"need {r} multiplicities, got {len(multiplicities)}")
        if any(s < 1 for s in multiplicities):
            raise ConfigurationError("multiplicities must be at least 1")
        if any(s == 1 for s in multiplicities):
            warnings.warn("a multiplicity equals 1; genuine Cox rings always have s_i >= 2",
                          stacklevel=2)
        self.base = base
        self.multiplicities = multiplicities
        # generator index set: (color i, copy j) pairs first, then rays
        index: list[tuple] = [("S", i, j) for i in range(r) for j in range(multiplicities[i])]
        index += [("W", j) for j in range(n)]
        self.index = tuple(index)
        self.size = len(index)
        self.color_slots = tuple(
            tuple(p for p, g in enumerate(index) if g[0] == "S" and g[1] == i) for i in range(r))
        self.ray_slots = tuple(sum(multiplicities) + j for j in range(n))
        self.degrees = tuple(base.phi_columns[g[1]] if g[0] == "S" else base.phi_columns[r + g[1]]
                             for g in index)
        self.degree_matrix = tuple(tuple(col[t] for col in self.degrees) for t in range(base.k))
        if base.k:
            dual = kernel_basis(self.degree_matrix, self.size)
        else:
            dual = tuple(tuple(int(a == b) for b in range(self.size)) for a in range(self.size))
        self.dim = len(dual)
        self.ambient_rays = tuple(tuple(row[f] for row in dual) for f in range(self.size))
        self.limits = Limits(max_generators=max(16, self.size),
                             max_dimension=max(8, self.dim, base.k))
        self._cones: dict[int, Cone] = {}
        self._degree_cones: dict[int, Cone] = {}

    @property
    def labels(self) -> tuple[str, ...]:
        names = self.base.datum.color_names
        return tuple(f"S[{names[g[1]]},{g[2] + 1}]" if g[0] == "S" else f"W{g[1] + 1}"
                     for g in self.index)

    def cone(self, mask: int) -> Cone:
        """``cone`` of the ambient rays selected by ``mask``."""
        got = self._cones.get(mask)
        if got is None:
            gens = [self.ambient_rays[f] for f in range(self.size) if mask >> f & 1]
            got = self._cones[mask] = cone_from_generators(self.dim, gens, limits=self.limits)
        return got

    def degree_cone(self, mask: int) -> Cone:
        got = self._degree_cones.get(mask)
        if got is None:
            gens = [self.degrees[f] for f in range(self.size) if mask >> f & 1]
            got = self._degree_cones[mask] = cone_from_generators(self.base.k, gens, limits=self.limits)
        return got


def build_ambient(base: PsiConfiguration, multiplicities: Sequence[int] | None = None) -> AmbientConfiguration:
    return AmbientConfiguration(base, multiplicities)


def _bits(positions: Iterable[int]) -> int:
    mask = 0
    for p in positions:
        mask |= 1 << p
    return mask


def admissible_sets(amb: AmbientConfiguration, I: Iterable[int]) -> list[int]:
    """Masks over the ``v_ij``: all copies of colors in ``I``, all but one copy of the rest."""
    I = set(I)
    choices = []
    for i, slots in enumerate(amb.color_slots):
        if i in I:
            choices.append([_bits(slots)])
        else:
            full = _bits(slots)
            choices.append([full ^ (1 << p) for p in slots])
    return sorted(sum(combo) for combo in itertools.product(*choices))


def psi_sigma(amb: AmbientConfiguration, sigma: PsiCone, mask: int | None = None) -> list[Cone]:
    """The ambient cones ``cone(w_J + a)``, ``a`` admissible for ``I``, for the realization ``mask``."""
    base = amb.base
    if mask is None:
        mask = sigma.mask
    if base.psi(mask) != sigma:
        raise ConfigurationError("mask does not realize the given psi-cone")
    I, J = base.split(mask)
    w = _bits(amb.ray_slots[j] for j in J)
    return sorted({amb.cone(w | a) for a in admissible_sets(amb, I)}, key=Cone.sort_key)


def theta_dagger(amb: AmbientConfiguration, theta: Iterable[PhiCone]) -> list[Cone]:
    """Toric sharp of ``theta`` over the ambient generators."""
    wanted = {t.cone for t in theta}
    if not wanted:
        return []
    full = (1 << amb.size) - 1
    out = {amb.cone(full ^ s) for s in range(1 << amb.size) if amb.degree_cone(s) in wanted}
    return sorted(out, key=Cone.sort_key)


class Equivalence(NamedTuple):
    lhs: bool
    rhs: bool
    agree: bool


def check_membership_equivalence(amb: AmbientConfiguration, theta: Iterable[PhiCone],
                                 sigma: PsiCone, mask: int | None = None) -> Equivalence:
    """``sigma`` in the sharp of ``theta`` versus ``Psi(sigma)`` inside ``theta_dagger``."""
    theta = list(theta)
    lhs = sigma in set(sharp_bunch_to_fan(amb.base, theta))
    dagger = set(theta_dagger(amb, theta))
    rhs = all(c in dagger for c in psi_sigma(amb, sigma, mask))
    return Equivalence(lhs, rhs, lhs == rhs)


def equivalence_report(amb: AmbientConfiguration, theta: Iterable[PhiCone],
                       sigmas: Iterable[PsiCone]) -> list[tuple[PsiCone, int, Equivalence]]:
    """One ``(sigma, realizing mask, verdict)`` triple per realization."""
    theta = list(theta)
    out = []
    for s in sigmas:
        for mask in amb.base.realizations(s):
            out.append((s, mask, check_membership_equivalence(amb, theta, s, mask)))
    return out
