"""Second-order split-operator propagation, real and imaginary time.

Every Hamiltonian term is diagonal in one (basis1, basis2) pair, so a time
step is a chain of elementwise multiplications interleaved with (partial)
Fourier transforms.  An x1-p2 cross term is handled by a staggered update
with transforms on mode 2 only; the symmetric primitive per step is

    C(dt/2) X(dt/2) P(dt) X(dt/2) C(dt/2)

with C the cross stage.  Adjacent half-stages of consecutive steps are fused
inside :func:`evolve`.  Time-dependent coefficients are sampled at the
midpoint of each sub-interval, preserving second-order accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import fft as sfft

from .models import ModeSpec, SplitHamiltonian


class EvolutionError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# state
# ---------------------------------------------------------------------------

@dataclass
class WaveFunction2D:
    """Complex amplitudes on the (mode1, mode2) position grid, L2-normalized
    with respect to the grid weights dx1*dx2."""

    psi: np.ndarray
    mode1: ModeSpec
    mode2: ModeSpec

    @property
    def weight(self) -> float:
        return self.mode1.dx * self.mode2.dx

    def norm(self) -> float:
        return math.sqrt(np.vdot(self.psi, self.psi).real * self.weight)

    def normalize(self) -> "WaveFunction2D":
        self.psi /= self.norm()
        return self

    def copy(self) -> "WaveFunction2D":
        return WaveFunction2D(self.psi.copy(), self.mode1, self.mode2)

    def overlap(self, other: "WaveFunction2D") -> complex:
        return complex(np.vdot(self.psi, other.psi) * self.weight)

    def density1(self) -> np.ndarray:
        """Marginal probability over mode 1 positions."""
        return np.sum(np.abs(self.psi) ** 2, axis=1) * self.weight

    def edge_amplitude(self) -> float:
        """Largest dimensionless amplitude on the mode-1 grid edges."""
        amp = max(np.max(np.abs(self.psi[0])), np.max(np.abs(self.psi[-1])))
        return float(amp * math.sqrt(self.weight))


def gaussian_state(mode1: ModeSpec, mode2: ModeSpec,
                   centers: Sequence, variances: Sequence) -> WaveFunction2D:
    """Normalized sum of product Gaussians; a ``None`` center/variance on the
    second mode means uniform over the periodic direction."""
    x1 = mode1.positions()
    x2 = mode2.positions()
    psi = np.zeros((mode1.points, mode2.points), dtype=complex)
    v1, v2 = variances
    for c1, c2 in centers:
        g1 = np.exp(-((x1 - c1) ** 2) / (4.0 * v1))
        if c2 is None or v2 is None:
            g2 = np.ones_like(x2)
        else:
            # periodic modes wrap the displacement onto (-pi, pi]
            d2 = x2 - c2
            if mode2.kind == "periodic":
                d2 = np.angle(np.exp(1j * d2))
            g2 = np.exp(-(d2 ** 2) / (4.0 * v2))
        psi += np.outer(g1, g2)
    wf = WaveFunction2D(psi, mode1, mode2)
    return wf.normalize()


# ---------------------------------------------------------------------------
# propagator
# ---------------------------------------------------------------------------

def _fft2(a):
    return sfft.fft2(a, norm="ortho", overwrite_x=True)


def _ifft2(a):
    return sfft.ifft2(a, norm="ortho", overwrite_x=True)


def _fft_mode2(a):
    return sfft.fft(a, axis=1, norm="ortho", overwrite_x=True)


def _ifft_mode2(a):
    return sfft.ifft(a, axis=1, norm="ortho", overwrite_x=True)


class _Propagator:
    """Precomputed exponentials for one (Hamiltonian, dt) pair.

    ``tstep = -1j*dt`` gives real time, ``tstep = -dt`` imaginary time.
    """

    def __init__(self, ham: SplitHamiltonian, tstep: complex):
        self.ham = ham
        self.tstep = tstep
        self.n1 = ham.mode1.points
        self.n2 = ham.mode2.points

        v_static = ham.v1[:, None] + ham.v2[None, :]
        self.exp_v_half = np.exp(0.5 * tstep * v_static)
        self.exp_v_full = self.exp_v_half ** 2

        k_static = ham.k1[:, None] + ham.k2[None, :]
        if ham.k12 is not None:
            k_static = k_static + ham.k12
        self.exp_k_full = np.exp(tstep * k_static)

        self.w12 = ham.w12
        self._w_cache: dict = {}

        self.cross = ham.cross
        if self.cross is not None and self.cross.cosine:
            if ham.mode2.kind != "periodic":
                raise EvolutionError("cosine cross term needs a periodic mode 2")
            n2_int = np.rint(ham.mode2.momenta()).astype(int)
            odd = (n2_int % 2) != 0
            self._even_idx = np.where(~odd)[0]
            self._odd_idx = np.where(odd)[0]
            self.x1 = ham.mode1.positions()
        if self.cross is not None and self.cross.f is not None:
            table = np.outer(self.cross.f, self.cross.g)
            self.exp_cross_static_half = np.exp(0.5 * tstep * table)
            self.exp_cross_static_full = self.exp_cross_static_half ** 2
        else:
            self.exp_cross_static_half = None
            self.exp_cross_static_full = None

        # optional scheduled linear terms (noise offsets)
        self.x1_lin = ham.opt_schedule("x1_lin")
        self.p2_lin = ham.opt_schedule("p2_lin")
        self.cross_phase = ham.opt_schedule("cross_phase")
        self._x1_grid = ham.mode1.positions()
        self._p2_grid = ham.mode2.momenta()

    def has_cross(self) -> bool:
        return self.cross is not None and (
            self.cross.cosine or self.cross.f is not None)

    # -- stages -------------------------------------------------------------
    def _exp_w(self, weight: float):
        """exp(tstep*weight*W12), cached by the scalar weight."""
        key = round(weight, 14)
        tab = self._w_cache.get(key)
        if tab is None:
            tab = np.exp((self.tstep * weight) * self.w12)
            if len(self._w_cache) > 16:
                self._w_cache.clear()
            self._w_cache[key] = tab
        return tab

    def apply_x(self, psi, frac: float, samples) -> np.ndarray:
        """Position stage over ``frac`` of dt; ``samples`` lists the times at
        which scheduled coefficients are sampled (one per fused half)."""
        psi *= self.exp_v_half if frac == 0.5 else self.exp_v_full
        if self.w12 is not None:
            c = sum(self.ham.coupling(t) for t in samples) / len(samples)
            if c != 0.0:
                psi *= self._exp_w(c * frac)
        if self.x1_lin is not None:
            c = sum(self.x1_lin(t) for t in samples) / len(samples)
            if c != 0.0:
                psi *= np.exp((self.tstep * frac * c) * self._x1_grid)[:, None]
        return psi

    def apply_p(self, psi, t_mid: float) -> np.ndarray:
        psi = _fft2(psi)
        psi *= self.exp_k_full
        if self.p2_lin is not None:
            c = self.p2_lin(t_mid)
            if c != 0.0:
                psi *= np.exp((self.tstep * c) * self._p2_grid)[None, :]
        return _ifft2(psi)

    def apply_cross(self, psi, frac: float, samples) -> np.ndarray:
        psi = _fft_mode2(psi)
        if self.cross.cosine:
            c = sum(self.ham.coupling(t) for t in samples) / len(samples)
            c *= self.cross.scale
            if c != 0.0:
                phase = 0.0
                if self.cross_phase is not None:
                    phase = sum(self.cross_phase(t) for t in samples) / len(samples)
                # cos(x1 - pi*n + phase) = +-cos(x1 + phase) on integer n
                col = np.exp((self.tstep * frac * (-c)) * np.cos(self.x1 + phase))
                inv = np.conj(col) if isinstance(self.tstep, complex) \
                    and self.tstep.real == 0.0 else 1.0 / col
                psi[:, self._even_idx] *= col[:, None]
                psi[:, self._odd_idx] *= inv[:, None]
        if self.exp_cross_static_half is not None:
            psi *= self.exp_cross_static_half if frac == 0.5 \
                else self.exp_cross_static_full
        return _ifft_mode2(psi)


# ---------------------------------------------------------------------------
# public stepping API
# ---------------------------------------------------------------------------

def step_real(wf: WaveFunction2D, ham: SplitHamiltonian, t: float,
              dt: float) -> WaveFunction2D:
    """One symmetric second-order step from t to t+dt (local error O(dt^3))."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    prop = _Propagator(ham, -1j * dt)
    _primitive_step(wf, prop, t, dt)
    if not np.isfinite(wf.psi[0, 0]):
        raise EvolutionError(f"non-finite amplitudes after step at t={t}")
    return wf


def _primitive_step(wf, prop, t, dt):
    psi = wf.psi
    if prop.has_cross():
        psi = prop.apply_cross(psi, 0.5, (t + 0.25 * dt,))
    psi = prop.apply_x(psi, 0.5, (t + 0.25 * dt,))
    psi = prop.apply_p(psi, t + 0.5 * dt)
    psi = prop.apply_x(psi, 0.5, (t + 0.75 * dt,))
    if prop.has_cross():
        psi = prop.apply_cross(psi, 0.5, (t + 0.75 * dt,))
    wf.psi = psi


def evolve(wf: WaveFunction2D, ham: SplitHamiltonian, t0: float, t1: float,
           dt: float, recorder: Optional[Callable[[float, WaveFunction2D], None]] = None,
           record_stride: int = 0, norm_tol: float = 1e-10) -> WaveFunction2D:
    """Propagate from t0 to t1, fusing adjacent half-stages between steps.

    The recorder (if any) is called on closed states every ``record_stride``
    steps and at both endpoints.  Norm is checked after every step.
    """
    n_steps = int(round((t1 - t0) / dt))
    if n_steps < 1:
        raise ValueError("evolution window shorter than one step")
    prop = _Propagator(ham, -1j * dt)
    has_cross = prop.has_cross()

    if recorder is not None:
        recorder(t0, wf)

    psi = wf.psi
    k = 0
    while k < n_steps:
        if record_stride and recorder is not None:
            seg = min(record_stride, n_steps - k)
        else:
            seg = n_steps - k
        t = t0 + k * dt
        # opening half-stages
        if has_cross:
            psi = prop.apply_cross(psi, 0.5, (t + 0.25 * dt,))
        psi = prop.apply_x(psi, 0.5, (t + 0.25 * dt,))
        for j in range(seg):
            tj = t + j * dt
            psi = prop.apply_p(psi, tj + 0.5 * dt)
            last = j == seg - 1
            if last:
                psi = prop.apply_x(psi, 0.5, (tj + 0.75 * dt,))
                if has_cross:
                    psi = prop.apply_cross(psi, 0.5, (tj + 0.75 * dt,))
            else:
                samples = (tj + 0.75 * dt, tj + 1.25 * dt)
                if has_cross:
                    psi = prop.apply_x(psi, 0.5, (tj + 0.75 * dt,))
                    psi = prop.apply_cross(psi, 1.0, samples)
                    psi = prop.apply_x(psi, 0.5, (tj + 1.25 * dt,))
                else:
                    psi = prop.apply_x(psi, 1.0, samples)
            nrm2 = np.vdot(psi, psi).real * wf.weight
            if not np.isfinite(nrm2):
                raise EvolutionError(f"non-finite state at step {k + j}")
            if abs(nrm2 - 1.0) > 200.0 * norm_tol:
                raise EvolutionError(
                    f"norm drift {nrm2 - 1.0:.3e} at step {k + j}")
        k += seg
        wf.psi = psi
        if recorder is not None:
            recorder(t0 + k * dt, wf)
    return wf


# ---------------------------------------------------------------------------
# expectation values
# ---------------------------------------------------------------------------

def energy_expectation(wf: WaveFunction2D, ham: SplitHamiltonian,
                       t: Optional[float] = None) -> float:
    """<H> over all assembled terms; scheduled terms need a time."""
    w = wf.weight
    psi = wf.psi
    px = np.abs(psi) ** 2 * w
    e = float(np.sum(px * (ham.v1[:, None] + ham.v2[None, :])))
    if ham.w12 is not None and t is not None:
        e += ham.coupling(t) * float(np.sum(px * ham.w12))
    phik = _fft2(psi.copy())
    pk = np.abs(phik) ** 2 * w
    k_tab = ham.k1[:, None] + ham.k2[None, :]
    if ham.k12 is not None:
        k_tab = k_tab + ham.k12
    e += float(np.sum(pk * k_tab))
    if ham.cross is not None:
        mixed = _fft_mode2(psi.copy())
        pm = np.abs(mixed) ** 2 * w
        if ham.cross.f is not None:
            e += float(np.sum(pm * np.outer(ham.cross.f, ham.cross.g)))
        if ham.cross.cosine and t is not None:
            x1 = ham.mode1.positions()
            n2 = np.rint(ham.mode2.momenta()).astype(int)
            phase = 0.0
            fn = ham.opt_schedule("cross_phase")
            if fn is not None:
                phase = fn(t)
            tab = np.cos(x1[:, None] - math.pi * n2[None, :] + phase)
            e += -ham.coupling(t) * ham.cross.scale * float(np.sum(pm * tab))
    return e


# ---------------------------------------------------------------------------
# imaginary time
# ---------------------------------------------------------------------------

def ground_state_imaginary(ham: SplitHamiltonian, ansatz: WaveFunction2D,
                           dt_im: float, n_steps: int,
                           deflate_against: Sequence[WaveFunction2D] = (),
                           t_sched: float = 0.0, tol: float = 1e-10,
                           energy_stride: int = 10):
    """Relax ``ansatz`` by imaginary-time propagation, renormalizing every
    step and Gram-Schmidt projecting against ``deflate_against`` (which must
    be orthonormal) to reach excited states.

    Returns (state, energy, info); non-convergence is reported in info rather
    than raised, with the state still returned.
    """
    if abs(ansatz.norm() - 1.0) > 1e-8:
        raise ValueError("ansatz must be normalized")
    wf = ansatz.copy()
    prop = _Propagator(ham.bound(coupling=lambda t: ham.coupling(t_sched))
                       if ham.has_coupling() and "coupling" in ham.schedules
                       else ham, -dt_im)
    e_prev = None
    converged = False
    steps_done = 0
    for k in range(n_steps):
        _primitive_step(wf, prop, t_sched, dt_im)
        for base in deflate_against:
            wf.psi -= base.overlap(wf) * base.psi
        nrm = wf.norm()
        if nrm == 0.0 or not np.isfinite(nrm):
            raise EvolutionError(f"state vanished during imaginary step {k}")
        wf.psi /= nrm
        steps_done = k + 1
        if (k + 1) % energy_stride == 0 or k == n_steps - 1:
            e = energy_expectation(wf, ham, t_sched)
            if e_prev is not None:
                scale = max(abs(e), abs(e_prev), 1e-300)
                per_step = abs(e - e_prev) / scale / energy_stride
                if per_step < tol:
                    converged = True
                    e_prev = e
                    break
            e_prev = e
    energy = e_prev if e_prev is not None else energy_expectation(wf, ham, t_sched)
    info = {"converged": converged, "steps": steps_done, "energy": energy}
    return wf, energy, info
