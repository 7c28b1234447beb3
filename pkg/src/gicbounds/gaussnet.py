"""Exact entropy / mutual information kernel for jointly Gaussian scalars.

Every variable is a zero-mean Gaussian written as a finite linear combination
of independent unit-variance latent factors, so covariances are exact inner
products of coefficient vectors and conditioning is orthogonal projection in
latent space.  This keeps degenerate (rank-deficient) variable sets well
defined: entropies of singular collections fall back to the
pseudo-determinant on the span, and conditional mutual informations are
computed as differences of residual log-volumes, which makes the chain rule
hold to machine precision and lets 0*inf cancellations (needed at unit cross
gain) resolve exactly.

Units: all rates and entropies are in bits.  For the complex field a set of m
variables has h = m*log2(pi*e) + log2 det(Sigma); for the real field
h = (m/2)*log2(2*pi*e) + (1/2)*log2 det(Sigma).
"""

from __future__ import annotations

import math

import numpy as np

REAL = "real"
COMPLEX = "complex"

#: determinants / variances below this are treated as exactly singular
SING_EPS = 1e-12

LOG2_PIE = math.log2(math.pi * math.e)
LOG2_2PIE = math.log2(2.0 * math.pi * math.e)


class FieldError(ValueError):
    """Raised when a real-field system is given complex coefficients."""


class GaussianSystem:
    """A growing basis of independent unit-variance zero-mean latents."""

    def __init__(self, field: str = COMPLEX):
        if field not in (REAL, COMPLEX):
            raise ValueError(f"unknown field {field!r}")
        self.field = field
        self.dim = 0

    def latent(self) -> "GaussVar":
        """Allocate a fresh independent unit-variance latent."""
        self.dim += 1
        coeffs = np.zeros(self.dim, dtype=complex)
        coeffs[-1] = 1.0
        return GaussVar(self, coeffs)

    def gaussian(self, std: float) -> "GaussVar":
        """Fresh independent zero-mean Gaussian with standard deviation std."""
        if std < 0:
            raise ValueError("negative standard deviation")
        return self.latent() * std

    def const_zero(self) -> "GaussVar":
        return GaussVar(self, np.zeros(self.dim, dtype=complex))


class GaussVar:
    """One scalar variable: a coefficient vector over the system's latents."""

    __slots__ = ("system", "coeffs")

    def __init__(self, system: GaussianSystem, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=complex)
        if not np.all(np.isfinite(coeffs.view(float))):
            raise ValueError("non-finite coefficient")
        if system.field == REAL and np.any(np.abs(coeffs.imag) > 0):
            raise FieldError("complex coefficient in a real-field system")
        self.system = system
        self.coeffs = coeffs

    def _vec(self) -> np.ndarray:
        """Coefficients padded to the system's current dimension."""
        n = self.system.dim
        if len(self.coeffs) == n:
            return self.coeffs
        out = np.zeros(n, dtype=complex)
        out[: len(self.coeffs)] = self.coeffs
        return out

    @property
    def variance(self) -> float:
        return float(np.real(np.vdot(self.coeffs, self.coeffs)))

    def cov(self, other: "GaussVar") -> complex:
        """E[self * conj(other)]."""
        a, b = self._vec(), other._vec()
        return complex(np.dot(a, b.conj()))

    def __add__(self, other):
        if not isinstance(other, GaussVar):
            return NotImplemented
        return GaussVar(self.system, self._vec() + other._vec())

    def __sub__(self, other):
        if not isinstance(other, GaussVar):
            return NotImplemented
        return GaussVar(self.system, self._vec() - other._vec())

    def __neg__(self):
        return GaussVar(self.system, -self.coeffs)

    def __mul__(self, scalar):
        scalar = complex(scalar)
        if self.system.field == REAL and scalar.imag != 0.0:
            raise FieldError("complex scale in a real-field system")
        return GaussVar(self.system, self.coeffs * scalar)

    __rmul__ = __mul__


def correlated_pair(sigma: float, rho: complex, z: GaussVar) -> GaussVar:
    """Build W with Var(W) = sigma^2 and E[Z W*] = rho*sigma, W independent
    of everything except Z.

    A fresh latent carries the independent component, so W = conj(rho)*sigma*Z
    + sigma*sqrt(1-|rho|^2)*(new latent).
    """
    if not 0.0 <= sigma <= 1.0:
        raise ValueError(f"sigma={sigma} outside [0, 1]")
    rho = complex(rho)
    if abs(rho) > 1.0 + 1e-12:
        raise ValueError(f"|rho|={abs(rho)} exceeds 1")
    if z.system.field == REAL and rho.imag != 0.0:
        raise FieldError("complex correlation in a real-field system")
    if abs(z.variance - 1.0) > 1e-9:
        raise ValueError("reference variable must have unit variance")
    resid = math.sqrt(max(0.0, 1.0 - abs(rho) ** 2))
    return z * (rho.conjugate() * sigma) + z.system.latent() * (sigma * resid)


def _coeff_matrix(variables) -> np.ndarray:
    variables = list(variables)
    if not variables:
        raise ValueError("empty variable list")
    sysm = variables[0].system
    for v in variables:
        if v.system is not sysm:
            raise ValueError("variables from different systems")
    return np.vstack([v._vec() for v in variables])


def _field_of(variables, field):
    sysm = variables[0].system
    if field is None:
        return sysm.field
    if field != sysm.field:
        raise ValueError(f"field {field!r} does not match system {sysm.field!r}")
    return field


def entropy(variables, field: str | None = None) -> float:
    """Joint differential entropy in bits; -inf when the set is singular."""
    variables = list(variables)
    mat = _coeff_matrix(variables)
    field = _field_of(variables, field)
    gram = mat @ mat.conj().T
    eigs = np.linalg.eigvalsh(gram)
    det = float(np.prod(eigs)) if len(eigs) else 1.0
    if det < SING_EPS:
        return float("-inf")
    m = len(variables)
    if field == COMPLEX:
        return m * LOG2_PIE + math.log2(det)
    return 0.5 * m * LOG2_2PIE + 0.5 * math.log2(det)


def _residual(mat: np.ndarray, cond: np.ndarray | None) -> np.ndarray:
    """Project the rows of mat onto the orthocomplement of the rows of cond."""
    if cond is None or cond.shape[0] == 0:
        return mat
    u, s, vh = np.linalg.svd(cond, full_matrices=False)
    if s.size:
        keep = s > max(SING_EPS, s[0] * 1e-13)
        q = vh[keep]
        mat = mat - (mat @ q.conj().T) @ q
    return mat


def _log2_pvol(mat: np.ndarray) -> tuple[int, float]:
    """Rank and log2 pseudo-determinant of mat @ mat^H."""
    gram = mat @ mat.conj().T
    eigs = np.linalg.eigvalsh(gram)
    scale = max(1.0, float(eigs[-1])) if eigs.size else 1.0
    pos = eigs[eigs > SING_EPS * scale]
    if pos.size == 0:
        return 0, 0.0
    return int(pos.size), float(np.sum(np.log2(pos)))


def mutual_info(a, b, cond=(), field: str | None = None) -> float:
    """I(a; b | cond) in bits, exact for the jointly Gaussian system.

    Computed as h(a|cond) - h(a|b,cond) through residual log-volumes, which
    equals h(a,cond)+h(b,cond)-h(a,b,cond)-h(cond) whenever all four terms
    are finite and stays correct (via pseudo-determinants on the span) when
    the conditioning or joint sets are singular.  Returns +inf when knowing b
    removes a whole dimension of a (infinite information).
    """
    a, b, cond = list(a), list(b), list(cond)
    mat_a = _coeff_matrix(a)
    field = _field_of(a, field)
    mat_c = _coeff_matrix(cond) if cond else None
    mat_bc = _coeff_matrix(b + cond) if (b or cond) else None

    r1, l1 = _log2_pvol(_residual(mat_a, mat_c))
    r2, l2 = _log2_pvol(_residual(mat_a, mat_bc))
    if r2 < r1:
        return float("inf")
    bits = l1 - l2
    if field == REAL:
        bits *= 0.5
    return bits
