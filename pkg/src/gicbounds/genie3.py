"""Three-user genie-aided sum-rate upper bounds.

Three families are implemented, all evaluated exactly at Gaussian inputs via
covariance algebra (cross-checked in the tests against the gaussnet kernel):

* change-of-interference: noisy-interference side information U_k =
  (interference at receiver k) + W_k replaces one conditioning input of the
  chain bound, at the price of penalty terms and a mixed-regime restriction;
* Etkin-type: a single receiver gets the genie S_b = (interference at the
  *lead* receiver) + N_b, giving a chain whose negative non-Gaussian entropy
  pairs off through the Gaussian-conditioning identity;
* hybrid: equal-weight time sharing of {nothing, S, U} over the three
  receivers, combining both mechanisms; valid for all cross gains.

Penalty terms arising from the conditional worst-additive-noise step are kept
in their tight conditional-entropy-difference form
h(X+Z-W | U) - h(X+Z-W+V~ | U) - log|h|^2, which is what the closed-form
symmetric simplifications below assume; V is a fresh Gaussian at the
relevant conditional variance and V~ its rescaling by the pairing
coefficient, both defined per family below.

All parameter searches are deterministic grids with one local refinement
(and a golden-section polish for the 1-D symmetric reductions).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._optim import grid_then_golden
from .baselines import (
    FEAS_SLACK,
    BoundResult,
    best_result,
    etw_two_user,
    gen_kramer_three,
    kramer_two_user,
    z_extension_three,
)
from .channel import Channel
from .gaussnet import COMPLEX, GaussianSystem, correlated_pair, mutual_info

_EPS = 1e-12

SIGMA_POINTS = 101
RHO_POINTS = 101
PHASE_POINTS = 64


@dataclass(frozen=True)
class NoiseParam:
    """One genie noise: stddev sigma in [0,1] and complex correlation rho
    with the same-index receiver noise (E[Z N*] = rho * sigma)."""

    sigma: float
    rho: complex = 0.0

    def __post_init__(self):
        if not 0.0 <= self.sigma <= 1.0:
            raise ValueError(f"sigma={self.sigma} outside [0, 1]")
        if abs(complex(self.rho)) > 1.0 + 1e-12:
            raise ValueError("correlation magnitude exceeds 1")


@dataclass(frozen=True)
class GenieConfig3:
    """Noise parameters for the hybrid bound: w for the change-of-interference
    genies U_k, n for the Etkin-type genies S_k."""

    w: tuple
    n: tuple

    def __post_init__(self):
        if len(self.w) != 3 or len(self.n) != 3:
            raise ValueError("need exactly three W and three N parameters")

    @classmethod
    def tied(cls, w: NoiseParam, n: NoiseParam) -> "GenieConfig3":
        return cls((w, w, w), (n, n, n))


# covariance helpers (numpy broadcasting; sigma real >= 0, rho complex) -----

def _var_z_minus_cn(sigma, rho, c):
    """Var(Z - c N) with E[Z N*] = rho sigma."""
    return (1.0 + np.abs(c) ** 2 * sigma**2
            - 2.0 * np.real(np.conj(c) * rho * sigma))


def _cond_var(vx, cov_abs2, vy):
    """Var(X|Y) = Var(X) - |Cov|^2 / Var(Y); conditioning on an (almost)
    deterministic variable is vacuous."""
    vx, cov_abs2, vy = np.broadcast_arrays(
        np.asarray(vx, float), np.asarray(cov_abs2, float), np.asarray(vy, float))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = vx - cov_abs2 / vy
    return np.where(vy > _EPS, out, vx)


def _v_w(sigma, rho):
    """sigma^2_{W | Z-W}."""
    vzw = _var_z_minus_cn(sigma, rho, 1.0)
    cov2 = np.abs(rho * sigma - sigma**2) ** 2
    return _cond_var(sigma**2, cov2, vzw)


def _v_n(sigma, rho, c):
    """sigma^2_{N | Z - c N}."""
    vz = _var_z_minus_cn(sigma, rho, c)
    cov2 = np.abs(rho * sigma - c * sigma**2) ** 2
    return _cond_var(sigma**2, cov2, vz)


def _v_n_prime(sigma, rho, cp):
    """sigma^2_{Z | N - cp Z}."""
    vn = (sigma**2 + np.abs(cp) ** 2
          - 2.0 * np.real(np.conj(cp) * np.conj(rho) * sigma))
    cov2 = np.abs(rho * sigma - np.conj(cp)) ** 2
    return _cond_var(1.0, cov2, vn)


def _star(cv, vzw, coeff2, v_pair):
    """Tight conditional worst-noise pair:
    log cv - log(cv + var V~) - log coeff2, combined so that coeff2 -> 0 and
    exact-cancellation points stay finite."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log2(cv) - np.log2(coeff2 * (cv - vzw) + v_pair)


def _safe_log2(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log2(x)


def _perm_channel(channel: Channel, perm) -> Channel:
    if tuple(perm) == tuple(range(channel.k)):
        return channel
    return channel.permuted(perm)


def _gauss_inputs(channel: Channel):
    """Single-letter Gaussian system for the channel (always built in the
    complex field; rates are in bits per complex use by convention)."""
    sysm = GaussianSystem(COMPLEX)
    xs = [sysm.gaussian(math.sqrt(pk)) for pk in channel.power]
    zs = [sysm.latent() for _ in range(channel.k)]
    ys = []
    for r in range(channel.k):
        y = xs[r] + zs[r]
        for t in range(channel.k):
            if t != r:
                y = y + xs[t] * complex(channel.h[r, t])
        ys.append(y)
    return sysm, xs, zs, ys


# Etkin-type bound ----------------------------------------------------------

def _etkin_terms(channel: Channel, sigma, rho, branch: str):
    """Vectorized sum rate and validity of the Etkin-type chain for lead user
    1 (after any relabeling); entries needing the exact 0*inf cancellation
    come back non-finite and are resolved through the kernel."""
    h, p = channel.h, channel.power
    p1, p2, p3 = p
    h12, h13, h23 = h[0, 1], h[0, 2], h[1, 2]
    a12, a13, a23 = abs(h12) ** 2, abs(h13) ** 2, abs(h23) ** 2

    sigma = np.asarray(sigma, dtype=float)
    rho = np.asarray(rho, dtype=complex)
    var_s = a12 * p2 + a13 * p3 + sigma**2
    cov_ys = np.conj(h12) * p2 + h23 * np.conj(h13) * p3 + rho * sigma
    var_y = p2 + a23 * p3 + 1.0
    var_y_s = _cond_var(var_y, np.abs(cov_ys) ** 2, var_s)

    t_edge = (math.log2(1.0 + p1 / (a12 * p2 + a13 * p3 + 1.0))
              + math.log2(1.0 + p3))

    if branch == "first":
        if abs(h13) < 1e-15:
            bad = np.full(sigma.shape, False)
            return np.full(sigma.shape, np.inf), bad, bad
        c = h23 / h13
        neg = _var_z_minus_cn(sigma, rho, c)
        vpair = _v_n(sigma, rho, c)
        valid = (vpair >= a13 - FEAS_SLACK) & (vpair <= 1.0 + FEAS_SLACK)
        denom = a13 * p3 + vpair
    elif branch == "second":
        if abs(h23) < 1e-15:
            bad = np.full(sigma.shape, False)
            return np.full(sigma.shape, np.inf), bad, bad
        cp = h13 / h23
        neg = (sigma**2 + np.abs(cp) ** 2
               - 2.0 * np.real(np.conj(cp) * np.conj(rho) * sigma))
        vpair = _v_n_prime(sigma, rho, cp)
        valid = (vpair >= a23 - FEAS_SLACK) & (vpair <= 1.0 + FEAS_SLACK)
        denom = a23 * p3 + vpair
    else:
        raise ValueError(f"unknown branch {branch!r}")

    with np.errstate(invalid="ignore"):
        value = (t_edge + _safe_log2(var_s) - _safe_log2(neg)
                 + _safe_log2(var_y_s) - _safe_log2(denom))
    degenerate = (neg < 1e-9) | (var_y_s < 1e-9) | (var_s < 1e-9)
    return value, valid, degenerate


def _etkin_kernel_value(channel: Channel, sigma: float, rho: complex) -> float:
    """Joint log-det evaluation of the same chain; handles the singular
    N = Z configurations exactly (pseudo-determinant on the span)."""
    sysm, xs, zs, ys = _gauss_inputs(channel)
    n2 = correlated_pair(sigma, rho, zs[1])
    s2 = xs[1] * complex(channel.h[0, 1]) + xs[2] * complex(channel.h[0, 2]) + n2
    return (mutual_info([xs[0]], [ys[0]])
            + mutual_info([xs[1]], [ys[1], s2], [xs[0]])
            + mutual_info([xs[2]], [ys[2]], [xs[0], xs[1]]))


def etkin_bound(channel: Channel, n2: NoiseParam, branch: str = "first",
                perm=(0, 1, 2)) -> BoundResult:
    """Etkin-type genie bound at fixed N_2 parameters for one user ordering."""
    if channel.k != 3:
        raise ValueError("three-user bound")
    ch = _perm_channel(channel, perm)
    sig = np.asarray([n2.sigma])
    rho = np.asarray([complex(n2.rho)])
    value, valid, degenerate = _etkin_terms(ch, sig, rho, branch)
    params = {"sigma": n2.sigma, "rho": complex(n2.rho), "branch": branch}
    if not bool(valid[0]):
        return BoundResult.infeasible("etkin3", 3, params, tuple(perm))
    v = float(value[0])
    if degenerate[0] or not math.isfinite(v):
        v = _etkin_kernel_value(ch, n2.sigma, complex(n2.rho))
    return BoundResult.make("etkin3", 3, v, params, tuple(perm))


def _rho_grid(complex_params: bool, n_rho=RHO_POINTS, n_phase=PHASE_POINTS):
    if complex_params:
        mags = np.linspace(0.0, 1.0, n_rho)
        phases = np.arange(n_phase) * (2.0 * np.pi / n_phase)
        return (mags[:, None] * np.exp(1j * phases)[None, :]).ravel()
    return np.linspace(-1.0, 1.0, 2 * n_rho - 1).astype(complex)


def _perm_classes(channel: Channel):
    """Orderings that can give distinct bounds: symmetric channels need one,
    circulant (semi-symmetric) channels two (cyclic shifts are relabelings),
    anything else all 3!."""
    if channel.symmetric_gain() is not None:
        return [(0, 1, 2)]
    h = channel.h
    circulant = (abs(h[0, 1] - h[1, 2]) < 1e-12 and abs(h[1, 2] - h[2, 0]) < 1e-12
                 and abs(h[0, 2] - h[1, 0]) < 1e-12 and abs(h[1, 0] - h[2, 1]) < 1e-12
                 and np.allclose(channel.power, channel.power[0]))
    if circulant:
        return [(0, 1, 2), (0, 2, 1)]
    return list(itertools.permutations(range(3)))


def _etkin_scan(channel, branch, rho_grid, sigmas):
    sig = np.repeat(sigmas, len(rho_grid))
    rho = np.tile(rho_grid, len(sigmas))
    value, valid, degenerate = _etkin_terms(channel, sig, rho, branch)
    value = np.where(valid, value, np.inf)
    fix = np.nonzero(valid & (degenerate | ~np.isfinite(value)))[0]
    for i in fix:
        value[i] = _etkin_kernel_value(channel, float(sig[i]), complex(rho[i]))
    i = int(np.argmin(value))
    return float(value[i]), float(sig[i]), complex(rho[i])


def etkin_optimize(channel: Channel, perms=None,
                   resolution=(SIGMA_POINTS, RHO_POINTS, PHASE_POINTS)
                   ) -> BoundResult:
    """Grid-optimized Etkin-type bound over both validity branches and the
    user orderings (the distinct relabeling classes by default), with one
    local 10x refinement around the incumbent.  resolution gives the
    (sigma, |rho|, phase) grid sizes; surfaces pass a coarser profile."""
    if channel.k != 3:
        raise ValueError("three-user bound")
    if perms is None:
        perms = _perm_classes(channel)
    n_sigma, n_rho, n_phase = resolution
    complex_params = channel.field == COMPLEX and np.any(channel.h.imag != 0)
    best = BoundResult.infeasible("etkin3", 3)
    for perm in perms:
        ch = _perm_channel(channel, perm)
        for branch in ("first", "second"):
            rho_grid = _rho_grid(complex_params, n_rho, n_phase)
            sigmas = np.linspace(0.0, 1.0, n_sigma)
            val, s0, r0 = _etkin_scan(channel=ch, branch=branch,
                                      rho_grid=rho_grid, sigmas=sigmas)
            if math.isfinite(val):
                # one 10x local refinement around the incumbent
                ds = 1.0 / (n_sigma - 1)
                sig2 = np.clip(np.linspace(s0 - ds, s0 + ds, 21), 0.0, 1.0)
                if complex_params:
                    dm, dp = 1.0 / (n_rho - 1), 2 * np.pi / n_phase
                    m0, ph0 = abs(r0), np.angle(r0)
                    mags = np.clip(np.linspace(m0 - dm, m0 + dm, 11), 0, 1)
                    phs = np.linspace(ph0 - dp, ph0 + dp, 11)
                    rho2 = (mags[:, None] * np.exp(1j * phs)[None, :]).ravel()
                else:
                    dr = 1.0 / (n_rho - 1)
                    rho2 = np.clip(
                        np.linspace(r0.real - dr, r0.real + dr, 21), -1, 1
                    ).astype(complex)
                val2, s2, r2 = _etkin_scan(ch, branch, rho2, sig2)
                if val2 < val:
                    val, s0, r0 = val2, s2, r2
            if math.isfinite(val):
                cand = BoundResult.make(
                    "etkin3", 3, val,
                    {"sigma": s0, "rho": r0, "branch": branch}, tuple(perm))
                best = best_result([best, cand])
    return best


# change-of-interference bound ----------------------------------------------

def _coi_value(channel: Channel, sw, rw):
    """Sum rate of the change-of-interference bound; sw, rw have shape
    (..., 3).  Returns (value, feasible) arrays of shape (...)."""
    h, p = channel.h, channel.power
    sw = np.asarray(sw, dtype=float)
    rw = np.asarray(rw, dtype=complex)

    total = 0.0
    feasible = np.full(sw.shape[:-1], True)
    vzw = _var_z_minus_cn(sw, rw, 1.0)          # (..., 3)
    v_w = _v_w(sw, rw)
    with np.errstate(invalid="ignore"):
        for u in range(3):
            nxt, prev = (u + 1) % 3, (u + 2) % 3
            a_un = abs(h[u, nxt]) ** 2
            a_pu = abs(h[prev, u]) ** 2
            feasible &= a_un <= 1.0 + FEAS_SLACK
            inr = a_un * p[nxt]
            total = total + math.log2((p[u] + inr + 1.0) / (inr + 1.0))
            total = total + _safe_log2(inr + sw[..., u] ** 2)
            total = total - _safe_log2(vzw[..., u])
            cw = rw[..., u] * sw[..., u] - sw[..., u] ** 2
            cv = _cond_var(p[u] + vzw[..., u], np.abs(cw) ** 2,
                           inr + sw[..., u] ** 2)
            total = total + _star(cv, vzw[..., u], a_pu, v_w[..., prev])
            feasible &= v_w[..., prev] >= a_pu * vzw[..., u] - FEAS_SLACK
        value = np.where(feasible, 0.5 * total, np.inf)
        value = np.where(np.isnan(value), np.inf, value)
    return value, feasible


def coi_bound(channel: Channel, w_params, perm=(0, 1, 2)) -> BoundResult:
    """Change-of-interference bound at fixed W parameters (three NoiseParams,
    indexed by the relabeled users)."""
    if channel.k != 3:
        raise ValueError("three-user bound")
    ch = _perm_channel(channel, perm)
    sw = np.array([[w.sigma for w in w_params]])
    rw = np.array([[complex(w.rho) for w in w_params]])
    value, feasible = _coi_value(ch, sw, rw)
    params = {"w": tuple(w_params)}
    if not bool(feasible[0]):
        return BoundResult.infeasible("coi3", 3, params, tuple(perm))
    return BoundResult.make("coi3", 3, float(value[0]), params, tuple(perm))


def _tied_param_grid(complex_params: bool, n_sigma=SIGMA_POINTS,
                     n_rho=RHO_POINTS, n_phase=PHASE_POINTS):
    sig = np.linspace(0.0, 1.0, n_sigma)
    rho = (_rho_grid(complex_params) if complex_params
           else np.linspace(-1.0, 1.0, 2 * n_rho - 1).astype(complex))
    s = np.repeat(sig, len(rho))
    r = np.tile(rho, len(sig))
    return s, r


def coi_optimize(channel: Channel, perms=None) -> BoundResult:
    """Optimized change-of-interference bound: tied (sigma, rho) grid with a
    10x refinement for symmetric channels, coordinate descent per user for
    general ones."""
    if channel.k != 3:
        raise ValueError("three-user bound")
    symmetric = channel.symmetric_gain() is not None
    if perms is None:
        perms = _perm_classes(channel)
    complex_params = channel.field == COMPLEX and np.any(channel.h.imag != 0)
    best = BoundResult.infeasible("coi3", 3)
    for perm in perms:
        ch = _perm_channel(channel, perm)
        if symmetric:
            val, wopt = _coi_tied_search(ch, complex_params)
        else:
            val, wopt = _coi_coordinate_descent(ch, complex_params)
        if math.isfinite(val):
            cand = BoundResult.make("coi3", 3, val, {"w": wopt}, tuple(perm))
            best = best_result([best, cand])
    return best


def _coi_eval_tied(ch, s, r):
    val, feas = _coi_value(ch, np.stack([np.atleast_1d(s)] * 3, -1),
                           np.stack([np.atleast_1d(r)] * 3, -1))
    return val, feas


def _coi_boundary_polish(ch, s0, r0, v0, dr):
    """The optimum often sits exactly on a feasibility boundary (the noise
    constraints are typically active at the best choice); bisect toward an
    infeasible rho neighbor to land on it."""
    direction = None
    for sign in (-1.0, 1.0):
        _, feas = _coi_eval_tied(ch, np.asarray([s0]),
                                 np.asarray([complex(r0 + sign * dr)]))
        if not feas[0]:
            direction = sign
            break
    if direction is None:
        return v0, s0, r0
    lo, hi = 0.0, dr
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        _, feas = _coi_eval_tied(ch, np.asarray([s0]),
                                 np.asarray([complex(r0 + direction * mid)]))
        if feas[0]:
            lo = mid
        else:
            hi = mid
    rb = complex(r0 + direction * lo)
    val, feas = _coi_eval_tied(ch, np.asarray([s0]), np.asarray([rb]))
    if feas[0] and val[0] < v0:
        return float(val[0]), s0, rb
    return v0, s0, r0


def _coi_tied_search(ch, complex_params):
    s, r = _tied_param_grid(complex_params)
    value, _ = _coi_eval_tied(ch, s, r)
    i = int(np.argmin(value))
    v0, s0, r0 = float(value[i]), float(s[i]), complex(r[i])
    if not math.isfinite(v0):
        return v0, None
    ds = 1.0 / (SIGMA_POINTS - 1)
    sig2 = np.clip(np.linspace(s0 - ds, s0 + ds, 15), 0.0, 1.0)
    if complex_params:
        dm, dp = 1.0 / (RHO_POINTS - 1), 2 * np.pi / PHASE_POINTS
        mags = np.clip(np.linspace(abs(r0) - dm, abs(r0) + dm, 9), 0, 1)
        phs = np.linspace(np.angle(r0) - dp, np.angle(r0) + dp, 9)
        rho2 = (mags[:, None] * np.exp(1j * phs)[None, :]).ravel()
    else:
        dr = 1.0 / (RHO_POINTS - 1)
        rho2 = np.clip(np.linspace(r0.real - dr, r0.real + dr, 15),
                       -1, 1).astype(complex)
    s2 = np.repeat(sig2, len(rho2))
    r2 = np.tile(rho2, len(sig2))
    value2, _ = _coi_value(ch, np.stack([s2] * 3, -1), np.stack([r2] * 3, -1))
    j = int(np.argmin(value2))
    if value2[j] < v0:
        v0, s0, r0 = float(value2[j]), float(s2[j]), complex(r2[j])
    if not complex_params:
        v0, s0, r0 = _coi_boundary_polish(ch, s0, r0, v0,
                                          2.0 / (RHO_POINTS - 1))
    w = NoiseParam(min(s0, 1.0), r0)
    return v0, (w, w, w)


def _coi_coordinate_descent(ch, complex_params, sweeps=3):
    sw = np.full(3, 0.6)
    rw = np.zeros(3, dtype=complex)
    s_grid, r_grid = _tied_param_grid(complex_params, 41, 21, 16)
    val = np.inf
    for _ in range(sweeps):
        for u in range(3):
            sw_t = np.repeat(sw[None, :], len(s_grid), axis=0)
            rw_t = np.repeat(rw[None, :], len(s_grid), axis=0)
            sw_t[:, u] = s_grid
            rw_t[:, u] = r_grid
            values, _ = _coi_value(ch, sw_t, rw_t)
            i = int(np.argmin(values))
            if values[i] < val:
                val = float(values[i])
                sw[u], rw[u] = s_grid[i], r_grid[i]
    if not math.isfinite(val):
        return val, None
    return val, tuple(NoiseParam(float(sw[u]), complex(rw[u])) for u in range(3))


# hybrid bound ---------------------------------------------------------------

def _hybrid_value(channel: Channel, sw, rw, sn, rn, branch: str):
    """Sum rate of the hybrid bound; parameter arrays have shape (..., 3).

    Group (a, b, c) gives receiver b the genie S_b built from the
    interference at lead receiver a, and receiver c the change-of-interference
    input U_c; the three cyclic groups are averaged.
    """
    with np.errstate(invalid="ignore"):
        return _hybrid_value_inner(channel, sw, rw, sn, rn, branch)


def _hybrid_value_inner(channel, sw, rw, sn, rn, branch):
    h, p = channel.h, channel.power
    sw = np.asarray(sw, float)
    rw = np.asarray(rw, complex)
    sn = np.asarray(sn, float)
    rn = np.asarray(rn, complex)

    vzw = _var_z_minus_cn(sw, rw, 1.0)
    v_w = _v_w(sw, rw)
    total = 0.0
    feasible = np.full(sw.shape[:-1], True)
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        hab, hac, hbc = h[a, b], h[a, c], h[b, c]
        sb, rb = sn[..., b], rn[..., b]

        total = total + math.log2(
            1.0 + p[a] / (abs(hab) ** 2 * p[b] + abs(hac) ** 2 * p[c] + 1.0))

        var_s = abs(hab) ** 2 * p[b] + abs(hac) ** 2 * p[c] + sb**2
        cov_ys = np.conj(hab) * p[b] + hbc * np.conj(hac) * p[c] + rb * sb
        var_y_s = _cond_var(p[b] + abs(hbc) ** 2 * p[c] + 1.0,
                            np.abs(cov_ys) ** 2, var_s)

        if branch == "I0":
            cgen = hbc / hac if abs(hac) > 1e-15 else np.inf
            neg = _var_z_minus_cn(sb, rb, cgen)
            vpair = _v_n(sb, rb, cgen)
            coeff2 = abs(hac) ** 2
        elif branch == "I1":
            cp = hac / hbc if abs(hbc) > 1e-15 else np.inf
            neg = (sb**2 + np.abs(cp) ** 2
                   - 2.0 * np.real(np.conj(cp) * np.conj(rb) * sb))
            vpair = _v_n_prime(sb, rb, cp)
            coeff2 = abs(hbc) ** 2
        else:
            raise ValueError(f"unknown branch {branch!r}")

        total = total + _safe_log2(var_s) - _safe_log2(neg) \
            + _safe_log2(var_y_s)

        # U-user c: conditional worst-noise pair plus the rest of its chain
        var_u0 = abs(h[c, a]) ** 2 * p[a] + abs(h[c, b]) ** 2 * p[b]
        cw = rw[..., c] * sw[..., c] - sw[..., c] ** 2
        cv = _cond_var(p[c] + vzw[..., c], np.abs(cw) ** 2,
                       var_u0 + sw[..., c] ** 2)
        total = total + _star(cv, vzw[..., c], coeff2, vpair)
        total = total + _safe_log2(var_u0 + sw[..., c] ** 2) \
            - _safe_log2(var_u0 + v_w[..., c]) - _safe_log2(vzw[..., c])

        # feasibility for this group
        if branch == "I0":
            feasible &= v_w[..., a] >= sb**2 - FEAS_SLACK
            feasible &= vpair >= coeff2 * vzw[..., c] - FEAS_SLACK
        else:
            feasible &= v_w[..., a] >= sw[..., a] ** 2 - FEAS_SLACK
            feasible &= vpair >= coeff2 * vzw[..., c] - FEAS_SLACK

    value = np.where(feasible, total / 3.0, np.inf)
    value = np.where(np.isnan(value), np.inf, value)
    return value, feasible


def hybrid_bound(channel: Channel, cfg: GenieConfig3, branch: str = "I0",
                 perm=(0, 1, 2)) -> BoundResult:
    """Hybrid (time-shared genie) bound at a fixed noise configuration."""
    if channel.k != 3:
        raise ValueError("three-user bound")
    ch = _perm_channel(channel, perm)
    sw = np.array([[w.sigma for w in cfg.w]])
    rw = np.array([[complex(w.rho) for w in cfg.w]])
    sn = np.array([[n.sigma for n in cfg.n]])
    rn = np.array([[complex(n.rho) for n in cfg.n]])
    value, feasible = _hybrid_value(ch, sw, rw, sn, rn, branch)
    params = {"cfg": cfg, "branch": branch}
    if not bool(feasible[0]):
        return BoundResult.infeasible("hybrid3", 3, params, tuple(perm))
    return BoundResult.make("hybrid3", 3, float(value[0]), params, tuple(perm))


def hybrid_optimize(channel: Channel, perms=None, sweeps=3) -> BoundResult:
    """Coordinate-descent search over the six (sigma, rho) pairs (tied W and
    tied N blocks alternated, then per-user touch-up); non-global by design,
    documented as such.  Symmetric channels are better served by
    hybrid_symmetric_bound."""
    if channel.k != 3:
        raise ValueError("three-user bound")
    if perms is None:
        perms = _perm_classes(channel)
    complex_params = channel.field == COMPLEX and np.any(channel.h.imag != 0)
    s_grid, r_grid = _tied_param_grid(complex_params, 33, 17, 16)
    best = BoundResult.infeasible("hybrid3", 3)
    for perm in perms:
        ch = _perm_channel(channel, perm)
        for branch in ("I0", "I1"):
            val, cfg = _hybrid_cd(ch, branch, s_grid, r_grid, sweeps)
            if math.isfinite(val):
                cand = BoundResult.make("hybrid3", 3, val,
                                        {"cfg": cfg, "branch": branch},
                                        tuple(perm))
                best = best_result([best, cand])
    return best


def _hybrid_cd(ch, branch, s_grid, r_grid, sweeps):
    n = len(s_grid)
    sw = np.full(3, 1.0)
    rw = np.full(3, 0.5, dtype=complex)
    sn = np.full(3, 0.7)
    rn = np.full(3, 0.5, dtype=complex)
    val = np.inf
    blocks = [("w", None), ("n", None)] + [("w", u) for u in range(3)] \
        + [("n", u) for u in range(3)]
    for _ in range(sweeps):
        for kind, user in blocks:
            sw_t = np.repeat(sw[None, :], n, 0)
            rw_t = np.repeat(rw[None, :], n, 0)
            sn_t = np.repeat(sn[None, :], n, 0)
            rn_t = np.repeat(rn[None, :], n, 0)
            cols = range(3) if user is None else [user]
            for u in cols:
                if kind == "w":
                    sw_t[:, u], rw_t[:, u] = s_grid, r_grid
                else:
                    sn_t[:, u], rn_t[:, u] = s_grid, r_grid
            values, _ = _hybrid_value(ch, sw_t, rw_t, sn_t, rn_t, branch)
            i = int(np.argmin(values))
            if values[i] < val:
                val = float(values[i])
                sw, rw = sw_t[i].copy(), rw_t[i].copy()
                sn, rn = sn_t[i].copy(), rn_t[i].copy()
    if not math.isfinite(val):
        return val, None
    cfg = GenieConfig3(
        tuple(NoiseParam(float(sw[u]), complex(rw[u])) for u in range(3)),
        tuple(NoiseParam(float(sn[u]), complex(rn[u])) for u in range(3)))
    return val, cfg


# symmetric simplification (two 1-D minimizations) ---------------------------

def _sym_reduced_rate(p, g, sn, rn, sw, rw):
    """Closed-form symmetric hybrid rate
    log((P+2|g|^2P+1)/(|g|^2 s_{Z-N}^2 s_{Z-W}^2))
    + log(P+|g|^2P+1 - |g*(g+1)P + rho_N sigma_N|^2/(2|g|^2P+sigma_N^2))
    with real rho parameters.  Extended precision: the optimum can approach a
    0/0 boundary (rho -> 1 at g = 1) that double precision resolves only to
    ~1e-7."""
    g = np.clongdouble(complex(g))
    p = np.longdouble(p)
    sn = np.asarray(sn, dtype=np.longdouble)
    rn = np.asarray(rn, dtype=np.longdouble)
    sw = np.asarray(sw, dtype=np.longdouble)
    rw = np.asarray(rw, dtype=np.longdouble)
    g2 = np.abs(g) ** 2
    szn = 1.0 + sn**2 - 2.0 * rn * sn
    szw = 1.0 + sw**2 - 2.0 * rw * sw
    num = np.abs(np.conj(g) * (g + 1.0) * p + rn * sn) ** 2
    inner = p + g2 * p + 1.0 - num / (2.0 * g2 * p + sn**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.log2((p + 2.0 * g2 * p + 1.0) / (g2 * szn * szw)) \
            + np.log2(inner)
    ok = (szn > _EPS) & (szw > _EPS) & (inner > 0)
    return np.asarray(np.where(ok, val, np.inf), dtype=float)


def sym_pinned_a(g, sn):
    """First-family pinned parameters at sigma_N = sn: sigma_W = 1,
    rho_W = 2 sn^2 - 1 and the rho_N root that zeroes the penalty variance.
    Returns (rho_n, rho_w, feasible)."""
    g2 = abs(complex(g)) ** 2
    sn = np.asarray(sn, dtype=float)
    t = 4.0 * g2 * (1.0 - sn**2)
    disc = (t - 1.0) * (t - sn**2)
    with np.errstate(invalid="ignore", divide="ignore"):
        rn = (t - np.sqrt(disc)) / sn
    rw = 2.0 * sn**2 - 1.0
    ok = (disc >= 0) & (sn > 0) & (np.abs(rn) <= 1.0 + 1e-12)
    return rn, rw, ok


def sym_pinned_b(g, rn):
    """Second-family pinned parameters at rho_N = rn: sigma_N = 1 and
    sigma_W = rho_W = sqrt(1 - (1+rho_N)/(2|g|^2)).
    Returns (rho_w, feasible)."""
    g2 = abs(complex(g)) ** 2
    rn = np.asarray(rn, dtype=float)
    arg = 1.0 - (1.0 + rn) / (2.0 * g2) if g2 > _EPS else np.full_like(rn, -1.0)
    with np.errstate(invalid="ignore"):
        rw = np.sqrt(arg)
    ok = (arg >= 0) & (np.abs(rw) <= 1.0 + 1e-12)
    return rw, ok


def hybrid_symmetric_bound(p: float, g: complex) -> BoundResult:
    """min(R0, R1) of the symmetric hybrid reduction: R0 sweeps sigma_N with
    the first pinned family, R1 sweeps rho_N with the second (which is the
    same optimization as the generalized Kramer bound)."""
    g = complex(g)
    g2 = abs(g) ** 2
    if g2 < _EPS:
        return BoundResult.infeasible("hybrid3_sym", 3)

    def r0_obj(sn):
        sn = np.asarray(sn, dtype=float)
        rn, rw, ok = sym_pinned_a(g, sn)
        val = _sym_reduced_rate(p, g, sn, np.where(ok, rn, 0.0),
                                1.0, np.where(ok, rw, 0.0))
        return np.where(ok, val, np.inf)

    def r1_obj(rn):
        rn = np.asarray(rn, dtype=float)
        rw, ok = sym_pinned_b(g, rn)
        val = _sym_reduced_rate(p, g, 1.0, rn, np.where(ok, rw, 0.0),
                                np.where(ok, rw, 0.0))
        return np.where(ok, val, np.inf)

    sn0, r0 = grid_then_golden(r0_obj, 1e-6, 1.0, n=SIGMA_POINTS)
    hi = min(1.0, 2.0 * g2 - 1.0)
    if hi >= -1.0:
        rn0, r1 = grid_then_golden(r1_obj, -1.0, hi, n=2 * RHO_POINTS - 1)
    else:
        rn0, r1 = float("nan"), float("inf")
    value = min(r0, r1)
    if not math.isfinite(value):
        return BoundResult.infeasible("hybrid3_sym", 3)
    return BoundResult.make(
        "hybrid3_sym", 3, value,
        {"r0": r0, "r1": r1, "sigma_n": sn0, "rho_n": rn0})


# combined best upper bound --------------------------------------------------

def best_upper_three(channel: Channel, include_hybrid_cd: bool | None = None
                     ) -> BoundResult:
    """Minimum over all implemented three-user upper bounds; the two-user and
    correlated-noise bounds join only for symmetric scenarios (their stated
    forms are symmetric).  Ties break by bound name."""
    if channel.k != 3:
        raise ValueError("three-user bound")
    g = channel.symmetric_gain()
    candidates = []
    if g is not None:
        p = float(channel.power[0])
        candidates += [
            kramer_two_user(p, g, k_users=3),
            etw_two_user(p, g, k_users=3),
            gen_kramer_three(channel),
            hybrid_symmetric_bound(p, g),
        ]
        perms = [(0, 1, 2)]
        if include_hybrid_cd is None:
            include_hybrid_cd = False
    else:
        perms = list(itertools.permutations(range(3)))
        if include_hybrid_cd is None:
            include_hybrid_cd = True
    candidates.append(z_extension_three(channel))
    candidates.append(etkin_optimize(channel, perms))
    candidates.append(coi_optimize(channel, perms))
    if include_hybrid_cd:
        candidates.append(hybrid_optimize(channel, perms))
    return best_result(candidates)


def new_minimum_three(channel: Channel) -> BoundResult:
    """Minimum of the three new bound families only (no prior-art bounds)."""
    g = channel.symmetric_gain()
    candidates = [etkin_optimize(channel), coi_optimize(channel)]
    if g is not None:
        candidates.append(hybrid_symmetric_bound(float(channel.power[0]), g))
    else:
        candidates.append(hybrid_optimize(channel))
    res = best_result(candidates)
    return res
