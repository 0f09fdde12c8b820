"""Exact 2x2 unitary algebra for single-qubit operations.

Operators are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype ``complex128``.
Every unitary can be written as

    U = exp(i*delta) * (cos(theta/2) * 1 + i * sin(theta/2) * n . sigma)

and :class:`AxisAngle` holds ``(delta, theta, n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

EPS_UNIT = 1e-9
EPS_COMM = 1e-9
EPS_SING = 1e-7

# below this |sin(theta/2)| the axis of a decomposed matrix is pinned to +z
_AXIS_EPS = 1e-12
# |cos(theta/2)| below this selects the representative by the sign of the axis
_TIE_EPS = 1e-12

TWO_PI = 2.0 * math.pi

IDENTITY = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)

_PAULIS = (SIGMA1, SIGMA2, SIGMA3)
Z_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True, eq=False)
class AxisAngle:
    """Global phase ``delta``, rotation angle ``theta`` and unit axis ``n``."""

    delta: float
    theta: float
    n: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float).reshape(3)
        if not (math.isfinite(self.delta) and math.isfinite(self.theta) and np.all(np.isfinite(n))):
            raise DomainError("axis-angle parameters must be finite")
        n.setflags(write=False)
        object.__setattr__(self, "n", n)

    def inverse(self) -> AxisAngle:
        return AxisAngle(-self.delta, self.theta, -self.n)

    def __repr__(self) -> str:
        return (
            f"AxisAngle(delta={self.delta:.12g}, theta={self.theta:.12g}, "
            f"n=({self.n[0]:.12g}, {self.n[1]:.12g}, {self.n[2]:.12g}))"
        )


def pauli(index: int) -> np.ndarray:
    """Return a copy of the Pauli matrix sigma_index, index in {1, 2, 3}."""
    if index not in (1, 2, 3):
        raise DomainError(f"Pauli index must be 1, 2 or 3, got {index!r}")
    return _PAULIS[index - 1].copy()


def dot_sigma(v: Sequence[float]) -> np.ndarray:
    """Return v . sigma for a real 3-vector v."""
    return v[0] * SIGMA1 + v[1] * SIGMA2 + v[2] * SIGMA3


def dagger(u: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(u))


def unitarity_error(u: np.ndarray) -> float:
    """Max-entry deviation of U^dagger U from the identity, combined with ||det U| - 1|."""
    u = np.asarray(u)
    gram = dagger(u) @ u - IDENTITY
    return max(float(np.max(np.abs(gram))), abs(abs(np.linalg.det(u)) - 1.0))


def is_unitary(u: np.ndarray, tol: float = EPS_UNIT) -> bool:
    return unitarity_error(u) < tol


def as_unitary(m, tol: float = EPS_UNIT) -> np.ndarray:
    """Validate ``m`` as a finite 2x2 unitary and return it as a complex array."""
    u = np.array(m, dtype=complex)
    if u.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise DomainError("matrix entries must be finite")
    err = unitarity_error(u)
    if err >= tol:
        raise DomainError(f"matrix is not unitary (deviation {err:.3e})")
    return u


def from_axis_angle(p: AxisAngle) -> np.ndarray:
    norm = float(np.linalg.norm(p.n))
    if abs(norm - 1.0) > EPS_UNIT:
        raise DomainError(f"rotation axis must be a unit vector, |n| = {norm!r}")
    half = 0.5 * p.theta
    su2 = math.cos(half) * IDENTITY + 1j * math.sin(half) * dot_sigma(p.n)
    return np.exp(1j * p.delta) * su2


def _canonical(delta: float, c: float, v: np.ndarray, axis_eps: float) -> AxisAngle:
    """Canonical parameters for exp(i delta) (c 1 + i v.sigma) with c^2 + |v|^2 = 1.

    The representative has cos(theta/2) >= 0, so theta lies in [0, pi]; at
    theta = pi the axis is chosen with a positive leading component.
    """
    v = np.asarray(v, dtype=float)
    flip = c < -_TIE_EPS
    if abs(c) <= _TIE_EPS:
        nonzero = v[np.abs(v) > _TIE_EPS]
        flip = nonzero.size > 0 and nonzero[0] < 0
    if flip:
        delta += math.pi
        c, v = -c, -v
    s = float(np.linalg.norm(v))
    if s < axis_eps:
        return AxisAngle(delta % TWO_PI, 0.0, Z_AXIS)
    theta = 2.0 * math.atan2(s, c)
    return AxisAngle(delta % TWO_PI, theta, v / s)


def su2_components(u: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Split U = exp(i delta) (c 1 + i v.sigma) into (delta, c, v), delta = arg(det U)/2."""
    delta = 0.5 * float(np.angle(np.linalg.det(u)))
    v_mat = u * np.exp(-1j * delta)
    c = 0.5 * float(np.trace(v_mat).real)
    vec = np.array([(np.trace(v_mat @ s) / 2j).real for s in _PAULIS])
    return delta, c, vec


def to_axis_angle(u: np.ndarray) -> AxisAngle:
    delta, c, v = su2_components(np.asarray(u, dtype=complex))
    return _canonical(delta, c, v, _AXIS_EPS)


def compose_axis_angle(a: AxisAngle, b: AxisAngle) -> AxisAngle:
    """Parameters of from_axis_angle(a) @ from_axis_angle(b) by the SU(2) composition law.

    cos(T/2)   = ca cb - sa sb (na . nb)
    sin(T/2) N = sa cb na + ca sb nb - sa sb (na x nb)
    """
    for p in (a, b):
        if abs(float(np.linalg.norm(p.n)) - 1.0) > EPS_UNIT:
            raise DomainError("rotation axes must be unit vectors")
    ca, sa = math.cos(0.5 * a.theta), math.sin(0.5 * a.theta)
    cb, sb = math.cos(0.5 * b.theta), math.sin(0.5 * b.theta)
    c = ca * cb - sa * sb * float(np.dot(a.n, b.n))
    v = sa * cb * a.n + ca * sb * b.n - sa * sb * np.cross(a.n, b.n)
    # the pure-phase convention applies only when the rotation is numerically zero;
    # pinning at EPS_SING would discard rotations the product still carries
    return _canonical(a.delta + b.delta, c, v, _AXIS_EPS)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def commutes(a: np.ndarray, b: np.ndarray, tol: float = EPS_COMM) -> bool:
    return float(np.max(np.abs(commutator(a, b)))) < tol


def is_scalar(u: np.ndarray, tol: float = EPS_COMM) -> bool:
    """True when ``u`` is a multiple of the identity."""
    return abs(u[0, 1]) < tol and abs(u[1, 0]) < tol and abs(u[0, 0] - u[1, 1]) < tol


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-12))
    return v * np.exp(-1j * np.angle(v[k]))


def simultaneous_eigenvectors(ops: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Common eigenvectors of pairwise-commuting 2x2 unitaries.

    Returns an orthonormal pair; the global phase of each vector is fixed so its
    first non-negligible amplitude is real and positive.
    """
    ops = [np.asarray(op, dtype=complex) for op in ops]
    if not ops:
        raise DomainError("need at least one operator")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not commutes(ops[i], ops[j]):
                raise DomainError(f"operators {i} and {j} do not commute")

    pivot = next((op for op in ops if not is_scalar(op)), None)
    if pivot is None:
        vectors = [np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)]
    else:
        _, vecs = np.linalg.eig(pivot)
        first = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
        # orthogonal complement of a unit 2-vector, exact up to rounding
        second = np.array([-np.conj(first[1]), np.conj(first[0])])
        vectors = [_fix_phase(first), _fix_phase(second)]

    for v in vectors:
        for op in ops:
            w = op @ v
            lam = np.vdot(v, w)
            if np.linalg.norm(w - lam * v) >= EPS_UNIT:
                raise DomainError("eigenvector residual exceeds tolerance")
    return vectors


def random_axis_angle(rng: np.random.Generator) -> AxisAngle:
    """Uniform phase and angle in [0, 2pi), axis uniform on the sphere."""
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    return AxisAngle(rng.uniform(0.0, TWO_PI), rng.uniform(0.0, TWO_PI), n)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    return from_axis_angle(random_axis_angle(rng))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = EPS_UNIT) -> bool:
    """True when a = exp(i x) b for some real x."""
    overlap = np.vdot(b.ravel(), a.ravel())
    if abs(overlap) < tol:
        return False
    phase = overlap / abs(overlap)
    return float(np.max(np.abs(a - phase * b))) < tol
