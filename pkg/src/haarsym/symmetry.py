"""Finite symmetry subgroups of U(d), orbits, and the quotient distance.

A :class:`SymmetryGroup` is a verified finite closed subgroup H of U(d);
a :class:`FiniteSymmetrySet` carries an unverified finite set of
unitaries (for example an epsilon-net of a continuous symmetry group),
for which quotient distances are upper bounds rather than exact values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal, Sequence, Union

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    DuplicateElementsError,
    MissingIdentityError,
    MissingInverseError,
    NotClosedError,
)
from .linalg import check_unitary, fidelity, max_abs_diff

if TYPE_CHECKING:
    from .haar import QuotientSample

CLOSURE_ATOL = 1e-9
# Elements closer than this are considered the same group element; the gap
# to CLOSURE_ATOL separates roundoff from genuinely distinct elements.
DISTINCT_ATOL = 1e-6

PHASE_EPS = 1e-9

EquivalenceMode = Literal["strict", "phase_insensitive"]


@dataclass(frozen=True)
class SymmetryGroup:
    """Verified finite closed subgroup of U(d), identity first."""

    dim: int
    elements: np.ndarray  # shape (order, dim, dim)
    label: str = "H"

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def __iter__(self):
        return iter(self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1


@dataclass(frozen=True)
class FiniteSymmetrySet:
    """Finite set of unitaries with no closure requirement.

    Quotient distances computed against such a set only upper-bound the
    true quotient distance of the continuous group it approximates.
    """

    dim: int
    elements: np.ndarray
    label: str = "net"

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def __iter__(self):
        return iter(self.elements)


GroupLike = Union[SymmetryGroup, FiniteSymmetrySet]


@dataclass(frozen=True)
class StateOrbit:
    """The set {h|psi> : h in H} in group element order."""

    states: np.ndarray  # shape (order, dim)

    def __len__(self) -> int:
        return self.states.shape[0]

    def __iter__(self):
        return iter(self.states)


def _element_stack(elements: Sequence, dim: int | None = None) -> np.ndarray:
    mats = []
    for k, e in enumerate(elements):
        m = check_unitary(e, what=f"element {k}")
        if dim is None:
            dim = m.shape[0]
        elif m.shape[0] != dim:
            raise DimensionMismatchError(
                f"element {k} has dim {m.shape[0]}, expected {dim}"
            )
        mats.append(m)
    return np.stack(mats)


def verify_group(
    elements: Sequence, tol: float = CLOSURE_ATOL, label: str = "H"
) -> SymmetryGroup:
    """Verify the finite-group axioms and return a SymmetryGroup.

    Checks, in order: no duplicate elements (within DISTINCT_ATOL), the
    identity is present, closure under products, and closure under
    adjoints.  Error indices refer to positions in the input list; the
    returned group has the identity moved to the front.
    """
    if len(elements) == 0:
        raise ValueError("a group needs at least one element")
    mats = _element_stack(elements)
    order, dim = mats.shape[0], mats.shape[1]

    for i in range(order):
        for j in range(i + 1, order):
            if max_abs_diff(mats[i], mats[j]) <= DISTINCT_ATOL:
                raise DuplicateElementsError(i, j)

    eye = np.eye(dim)
    id_idx = next(
        (i for i in range(order) if max_abs_diff(mats[i], eye) <= tol), None
    )
    if id_idx is None:
        raise MissingIdentityError(dim)

    for i in range(order):
        for j in range(order):
            prod = mats[i] @ mats[j]
            if not any(max_abs_diff(prod, mats[k]) <= tol for k in range(order)):
                raise NotClosedError(i, j)

    for i in range(order):
        adj = mats[i].conj().T
        if not any(max_abs_diff(adj, mats[k]) <= tol for k in range(order)):
            raise MissingInverseError(i)

    ordering = [id_idx] + [i for i in range(order) if i != id_idx]
    stacked = mats[ordering].copy()
    stacked.setflags(write=False)
    return SymmetryGroup(dim=dim, elements=stacked, label=label)


def finite_symmetry_set(elements: Sequence, label: str = "net") -> FiniteSymmetrySet:
    """Wrap a list of unitaries without verifying group axioms."""
    mats = _element_stack(elements)
    mats = mats.copy()
    mats.setflags(write=False)
    return FiniteSymmetrySet(dim=mats.shape[1], elements=mats, label=label)


def trivial_group(dim: int) -> SymmetryGroup:
    """The subgroup {I_dim}; quotienting by it changes nothing."""
    eye = np.eye(dim, dtype=complex)[None, :, :].copy()
    eye.setflags(write=False)
    return SymmetryGroup(dim=dim, elements=eye, label="identity")


def orbit(psi, group: GroupLike) -> StateOrbit:
    """[h|psi> for h in H] in group element order."""
    state = np.asarray(psi, dtype=complex)
    if state.shape != (group.dim,):
        raise DimensionMismatchError(
            f"state dim {state.shape} does not match group dim {group.dim}"
        )
    return StateOrbit(states=group.elements @ state)


def h_equivalent(
    psi1,
    psi2,
    group: SymmetryGroup,
    mode: EquivalenceMode = "phase_insensitive",
    tol: float = 1e-9,
) -> bool:
    """Whether some h in H maps psi2 onto psi1.

    ``strict`` compares amplitudes exactly (||psi1 - h psi2|| <= tol);
    ``phase_insensitive`` ignores a global phase, requiring
    1 - |<psi1|h psi2>|^2 <= tol.  Downstream metrics are all built on
    |<.|.>|^2, hence the phase-insensitive default.
    """
    if mode not in ("strict", "phase_insensitive"):
        raise ValueError(f"unknown mode {mode!r}")
    a = np.asarray(psi1, dtype=complex)
    b = np.asarray(psi2, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatchError("states of different dims")
    for moved in orbit(b, group):
        if mode == "strict":
            if float(np.linalg.norm(a - moved)) <= tol:
                return True
        else:
            if 1.0 - fidelity(a, moved) <= tol:
                return True
    return False


def quotient_distance(class_state, target, group: GroupLike) -> float:
    """min over h in H of 1 - |<h psi | target>|^2.

    For a verified group the result does not depend on which orbit member
    is passed as ``class_state``; for a FiniteSymmetrySet it upper-bounds
    the continuous-group distance.
    """
    tgt = np.asarray(target, dtype=complex)
    if tgt.shape != (group.dim,):
        raise DimensionMismatchError("target dim does not match group dim")
    best = min(1.0 - fidelity(moved, tgt) for moved in orbit(class_state, group))
    return max(best, 0.0)


def _phase_normalize(state: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first significant amplitude is real positive."""
    mags = np.abs(state)
    significant = mags > PHASE_EPS
    if not significant.any():
        return state.copy()
    k = int(np.argmax(significant))
    phase = state[k] / mags[k]
    return state * np.conj(phase)


def _lex_key(state: np.ndarray) -> tuple:
    return tuple(float(x) for amp in state for x in (amp.real, amp.imag))


def canonical_representative(orb: StateOrbit) -> np.ndarray:
    """Deterministic representative of a state orbit.

    Each member is phase-normalized, then the member with the
    lexicographically smallest (real, imaginary) amplitude sequence wins.
    The result is independent of the orbit's input ordering.
    """
    if len(orb) == 0:
        raise ValueError("empty orbit")
    normalized = [_phase_normalize(s) for s in orb]
    return min(normalized, key=_lex_key)


def class_action(x: "QuotientSample", psi) -> StateOrbit:
    """Orbit of U|psi> for the stored representative U of the class x.

    Replacing the representative U by hU permutes the orbit but leaves it
    unchanged as a set, so the class action is well defined.
    """
    state = np.asarray(psi, dtype=complex)
    rep = x.representative
    if state.shape != (rep.shape[0],):
        raise DimensionMismatchError("state dim does not match representative dim")
    return orbit(rep @ state, x.group)


# ---------------------------------------------------------------------------
# Builtin groups and the JSON group description
# ---------------------------------------------------------------------------

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def swap_matrix_2q() -> np.ndarray:
    """SWAP on two qubits (d=4): exchanges basis indices 1 and 2."""
    m = np.eye(4, dtype=complex)
    m[[1, 2]] = m[[2, 1]]
    return m


def _pauli_x_on_qubit(qubit: int, dim: int) -> np.ndarray:
    n = dim.bit_length() - 1
    if 2**n != dim:
        raise ValueError(f"pauli-x@{qubit} needs a power-of-two dim, got {dim}")
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    # Little-endian: qubit 0 is the least significant bit of the basis index.
    left = np.eye(2 ** (n - 1 - qubit), dtype=complex)
    right = np.eye(2**qubit, dtype=complex)
    return np.kron(left, np.kron(_PAULI_X, right))


def _builtin_element(name: str, dim: int) -> np.ndarray:
    if name == "identity":
        return np.eye(dim, dtype=complex)
    if name == "swap-2q":
        if dim != 4:
            raise ValueError(f"swap-2q requires dim 4, got {dim}")
        return swap_matrix_2q()
    if name.startswith("pauli-x@"):
        return _pauli_x_on_qubit(int(name.split("@", 1)[1]), dim)
    raise ValueError(f"unknown builtin group element {name!r}")


def builtin_group(name: str, dim: int | None = None) -> SymmetryGroup:
    """Builtin groups: ``identity`` (any dim) and ``swap-2q`` (dim 4)."""
    if name == "identity":
        if dim is None:
            raise ValueError("builtin group 'identity' needs an explicit dim")
        return trivial_group(dim)
    if name == "swap-2q":
        return verify_group(
            [np.eye(4, dtype=complex), swap_matrix_2q()], label="swap-2q"
        )
    raise ValueError(f"unknown builtin group {name!r}")


def _parse_matrix(entries, dim: int) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.shape != (dim, dim, 2):
        raise ValueError(
            f"explicit group element must be a {dim}x{dim} matrix of [re, im] pairs"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def group_from_dict(data: dict) -> GroupLike:
    """Build a group from its JSON description.

    Schema: ``{"label": str, "dim": int, "elements": [...]}`` where each
    element is a builtin name ("identity", "swap-2q", "pauli-x@<q>") or an
    explicit matrix as nested [re, im] pairs.  ``"closed": false`` skips
    group verification and yields a FiniteSymmetrySet.
    """
    try:
        dim = int(data["dim"])
        raw_elements = data["elements"]
    except KeyError as exc:
        raise ValueError(f"group description missing key {exc}") from exc
    label = str(data.get("label", "H"))
    mats = []
    for entry in raw_elements:
        if isinstance(entry, str):
            mats.append(_builtin_element(entry, dim))
        else:
            mats.append(_parse_matrix(entry, dim))
    if data.get("closed", True):
        return verify_group(mats, label=label)
    return finite_symmetry_set(mats, label=label)


def load_group(path) -> GroupLike:
    with open(path, "r", encoding="utf-8") as fh:
        return group_from_dict(json.load(fh))
