"""One-dimensional reduction of the two-mode double-well qubit.

Provides the tight-binding parameters (next-nearest hopping from the 1D
tunnelling formula, nearest hopping by a spectral fit to the 2D Hamiltonian),
the Born-Oppenheimer alternative, classical tunnelling actions in the
inverted potential, the protection-optimal Josephson energy, and the analytic
flux-noise dephasing rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import fft as sfft
from scipy.integrate import quad, solve_ivp
from scipy.linalg import eig_banded, eigh
from scipy.sparse.linalg import LinearOperator, eigsh

from .models import EffectiveParams  # re-exported model-parameter record

__all__ = [
    "EffectiveParams", "TwoModeQubit", "TunnelPath",
    "t2_formula", "spectrum_1d", "spectrum_2d", "dense_spectrum_2d",
    "fit_t1", "born_oppenheimer_params", "tunnel_action", "optimal_ej",
    "dephasing_rate", "dephasing_rate_series", "cos_matrix_element_sum",
]


@dataclass(frozen=True)
class TwoModeQubit:
    """Bare parameters of the two-mode double-well qubit Hamiltonian
    4 E_C_theta n_th^2 + 4 E_C_phi n_ph^2 + E_L phi^2
    - 2 E_J cos(theta)cos(phi) + dEJ sin(theta)sin(phi)."""

    e_c_theta: float
    e_c_phi: float
    e_l: float
    e_j: float
    delta_ej: float = 0.0      # dEJ / 2E_J (fractional asymmetry)

    @property
    def z_phi(self) -> float:
        return math.sqrt(self.e_c_phi / (math.pi ** 2 * self.e_l))

    @property
    def z_zeta_equiv(self) -> float:
        """Zeta-mode impedance implied by the C = (R-1) C_J bookkeeping."""
        ratio = self.e_c_phi / self.e_c_theta
        e_c_zeta = self.e_c_phi / (ratio - 1.0)
        return math.sqrt(e_c_zeta / (math.pi ** 2 * self.e_l))


def t2_formula(e_j: float, e_c_phi: float) -> float:
    """Next-nearest hopping from the one-dimensional tunnelling formula,
    valid for E_J/E_C_phi >= 1."""
    r = e_j / e_c_phi
    return (8.0 * e_c_phi / math.sqrt(math.pi)) * (4.0 * r) ** 0.75 \
        * math.exp(-4.0 * math.sqrt(r))


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

def spectrum_1d(e_c_alpha: float, e_j_alpha: float, e_j_2alpha: float,
                n_levels: int = 6, n_charge: int = 257,
                offset: float = 0.0) -> np.ndarray:
    """Low eigenvalues of 4 E_Ca (n+offset)^2 - E_Ja cos a - E_J2a cos 2a in
    the charge basis (pentadiagonal, solved as a banded matrix)."""
    m = np.arange(n_charge) - n_charge // 2
    bands = np.zeros((3, n_charge))
    bands[0] = 4.0 * e_c_alpha * (m + offset) ** 2
    bands[1, :-1] = -0.5 * e_j_alpha
    bands[2, :-2] = -0.5 * e_j_2alpha
    vals = eig_banded(bands, lower=True, eigvals_only=True,
                      select="i", select_range=(0, n_levels - 1))
    return vals


def _qubit2d_tables(q: TwoModeQubit, n_theta: int, n_phi: int, x_max: float):
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    dphi = 2.0 * x_max / n_phi
    phi = -x_max + dphi * np.arange(n_phi)
    k_th = 2.0 * math.pi * np.fft.fftfreq(n_theta, d=2.0 * math.pi / n_theta)
    k_ph = 2.0 * math.pi * np.fft.fftfreq(n_phi, d=dphi)
    v = (q.e_l * phi[None, :] ** 2
         - 2.0 * q.e_j * np.cos(theta)[:, None] * np.cos(phi)[None, :])
    if q.delta_ej:
        v = v + (q.delta_ej * 2.0 * q.e_j) * np.sin(theta)[:, None] * np.sin(phi)[None, :]
    kin_th = 4.0 * q.e_c_theta * k_th ** 2
    kin_ph = 4.0 * q.e_c_phi * k_ph ** 2
    return v, kin_th, kin_ph


def _default_phi_window(q: TwoModeQubit) -> float:
    """Half-width covering the low-lying comb states with safety margin."""
    e_c_alpha = math.pi ** 2 * q.e_l / 4.0
    e_j2 = max(2.0 * t2_formula(max(q.e_j, q.e_c_phi), q.e_c_phi), 1e-12)
    m_sq = 0.25 * math.sqrt(2.0 * e_j2 / e_c_alpha)
    m_ext = math.sqrt(12.0 * m_sq) + 3.5
    return math.pi * max(6.0, m_ext)


def spectrum_2d(q: TwoModeQubit, n_levels: int = 6, n_theta: int = 64,
                n_phi: int = 256, x_max: Optional[float] = None,
                tol: float = 0.0) -> np.ndarray:
    """Lowest eigenvalues of the two-mode Hamiltonian on a position grid,
    by Lanczos iteration with FFT-applied kinetic terms.

    The grid window is widened automatically if an eigenvector reaches the
    phi boundary.
    """
    if x_max is None:
        x_max = _default_phi_window(q)
    for attempt in range(3):
        v, kin_th, kin_ph = _qubit2d_tables(q, n_theta, n_phi, x_max)
        shift = float(np.min(v))
        v0 = v - shift
        shape = (n_theta, n_phi)

        def matvec(x):
            psi = x.reshape(shape)
            out = v0 * psi
            ft = sfft.fft(psi, axis=0, norm="ortho")
            ft *= kin_th[:, None]
            out = out + sfft.ifft(ft, axis=0, norm="ortho")
            ft = sfft.fft(psi, axis=1, norm="ortho")
            ft *= kin_ph[None, :]
            out = out + sfft.ifft(ft, axis=1, norm="ortho")
            return out.ravel()

        dim = n_theta * n_phi
        op = LinearOperator((dim, dim), matvec=matvec, dtype=complex)
        k = n_levels + 2
        vals, vecs = eigsh(op, k=k, which="SA", tol=tol,
                           ncv=max(4 * k, 40), maxiter=20000)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        edge = 0.0
        for i in range(n_levels):
            psi = vecs[:, i].reshape(shape)
            amp = max(np.max(np.abs(psi[:, 0])), np.max(np.abs(psi[:, -1])))
            edge = max(edge, amp / np.max(np.abs(psi)))
        if edge < 1e-7:
            return vals[:n_levels] + shift
        x_max *= 1.5
    raise RuntimeError("2D spectrum grid failed to contain the eigenstates")


def dense_spectrum_2d(q: TwoModeQubit, n_levels: int = 6, n_theta: int = 32,
                      n_phi: int = 32, x_max: Optional[float] = None) -> np.ndarray:
    """Dense-matrix oracle for the same Hamiltonian on a small grid."""
    if x_max is None:
        x_max = _default_phi_window(q)
    v, kin_th, kin_ph = _qubit2d_tables(q, n_theta, n_phi, x_max)
    f_th = sfft.fft(np.eye(n_theta), axis=0, norm="ortho")
    f_ph = sfft.fft(np.eye(n_phi), axis=0, norm="ortho")
    k_th = f_th.conj().T @ np.diag(kin_th) @ f_th
    k_ph = f_ph.conj().T @ np.diag(kin_ph) @ f_ph
    dim = n_theta * n_phi
    h = np.diag(v.ravel()).astype(complex)
    h += np.kron(k_th, np.eye(n_phi))
    h += np.kron(np.eye(n_theta), k_ph)
    vals = eigh(h, eigvals_only=True, subset_by_index=(0, n_levels - 1))
    return vals


# ---------------------------------------------------------------------------
# effective-parameter extraction
# ---------------------------------------------------------------------------

def spectral_error(gaps_1d: np.ndarray, gaps_2d: np.ndarray) -> float:
    """Mean relative mismatch of the first five excitation gaps."""
    g1, g2 = np.asarray(gaps_1d)[:5], np.asarray(gaps_2d)[:5]
    return float(np.mean(np.abs(g1 - g2) / g2))


def fit_t1(q: TwoModeQubit, n_levels: int = 6,
           levels_2d: Optional[np.ndarray] = None,
           fit_tol: float = 0.05, **grid_kw) -> EffectiveParams:
    """Fit the nearest-neighbour hopping so the reduced model reproduces the
    two-mode spectrum, holding E_C_alpha and the next-nearest hopping fixed.

    Golden-section search on log E_J_alpha against the mean relative error of
    the first five excitation gaps.  A fit that lands on the search floor
    (hopping below spectral resolution) or keeps a large residual is flagged.
    """
    if levels_2d is None:
        levels_2d = spectrum_2d(q, n_levels=n_levels, **grid_kw)
    gaps_2d = levels_2d[1:] - levels_2d[0]
    e_c_alpha = math.pi ** 2 * q.e_l / 4.0
    e_j_2alpha = 2.0 * t2_formula(q.e_j, q.e_c_phi)

    def eps_s(log_ej1):
        vals = spectrum_1d(e_c_alpha, 10.0 ** log_ej1, e_j_2alpha, n_levels)
        return spectral_error(vals[1:] - vals[0], gaps_2d)

    lo, hi = -16.0, math.log10(4.0 * e_j_2alpha)
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = eps_s(c), eps_s(d)
    for _ in range(48):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = eps_s(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = eps_s(d)
    log_best = c if fc < fd else d
    err = min(fc, fd)
    flagged = err > fit_tol or log_best < lo + 1.0
    return EffectiveParams(e_c_alpha, 10.0 ** log_best, e_j_2alpha,
                           source="fit", fit_error=err, flagged=flagged)


def born_oppenheimer_params(q: TwoModeQubit) -> tuple:
    """Reduced parameters from freezing the heavy angle and keeping the light
    mode in its ground state; valid for E_C_theta < 2 E_L and 2 E_J < E_C_phi.

    Returns (EffectiveParams, warnings).
    """
    warnings = []
    if not q.e_c_theta < 2.0 * q.e_l:
        warnings.append("outside validity: E_C_theta >= 2 E_L")
    if not 2.0 * q.e_j < q.e_c_phi:
        warnings.append("outside validity: 2 E_J >= E_C_phi")
    e_j_alpha = 2.0 * q.e_j * math.exp(-math.pi * q.z_phi / 2.0)
    e_j_2alpha = q.e_j ** 2 / (4.0 * q.e_c_phi)
    params = EffectiveParams(q.e_c_theta, e_j_alpha, e_j_2alpha,
                             source="born_oppenheimer")
    return params, warnings


def cos_matrix_element_sum(x: float, alpha: float = 0.0,
                           terms: int = 200) -> float:
    """e^{-x} sum_{k>=1} x^{2k} / ((2k)^alpha (2k)!), which tends to
    1/(2 x^alpha) for large x (oscillator cos-matrix-element identities)."""
    total = 0.0
    for k in range(1, terms + 1):
        term = x ** (2 * k) / math.factorial(2 * k) if 2 * k < 170 else 0.0
        total += term / (2 * k) ** alpha
    return math.exp(-x) * total


# ---------------------------------------------------------------------------
# tunnelling actions
# ---------------------------------------------------------------------------

@dataclass
class TunnelPath:
    points: np.ndarray            # sampled (phi, theta) pairs
    action: float
    estimate: float = 0.0         # piecewise-linear / closed-form estimate
    miss: float = 0.0             # saddle miss distance of the shooting solve

    def __post_init__(self):
        if self.action <= 0:
            raise ValueError("tunnelling action must be positive")


def s2_closed_form(e_j: float, e_c_phi: float) -> float:
    return 4.0 * math.sqrt(e_j / e_c_phi)


def s1_closed_form(e_j: float, e_c_phi: float, e_c_theta: float) -> float:
    return (2.0 * (math.sqrt(2.0) - 1.0) * math.sqrt(2.0 * e_j / e_c_theta)
            + (math.sqrt(2.0) - 1.0) * math.pi * math.sqrt(e_j / (2.0 * e_c_phi)))


def tunnel_action(e_j: float, e_c_phi: float, e_c_theta: float,
                  neighbour: str = "next_nearest",
                  rtol: float = 1e-10, max_time: float = 1e3,
                  n_samples: int = 400) -> TunnelPath:
    """Classical action along the minimal tunnelling path between adjacent
    potential minima of 2 E_J (1 - cos(theta) cos(phi)), inductive term absent.

    next_nearest: the straight path along phi, by quadrature.
    nearest: the path is integrated from the classical equations of motion in
    the inverted potential, shooting from a minimum toward the saddle and
    symmetrizing; the piecewise-linear estimate is returned alongside.
    """
    if neighbour == "next_nearest":
        def integrand(phi):
            return math.sqrt(e_j * (1.0 - math.cos(phi)) / (2.0 * e_c_phi))
        s, _ = quad(integrand, 0.0, 2.0 * math.pi, limit=200)
        pts = np.stack([np.linspace(0, 2 * math.pi, n_samples),
                        np.zeros(n_samples)], axis=1)
        return TunnelPath(pts, s, estimate=s2_closed_form(e_j, e_c_phi))
    if neighbour != "nearest":
        raise ValueError(f"unknown neighbour kind {neighbour!r}")

    def rhs(t, y):
        phi, theta, n_phi, n_theta = y
        return [8.0 * e_c_phi * n_phi,
                8.0 * e_c_theta * n_theta,
                2.0 * e_j * math.sin(phi) * math.cos(theta),
                2.0 * e_j * math.cos(phi) * math.sin(theta)]

    def ridge(t, y):
        return y[0] + y[1] - math.pi
    ridge.terminal = True
    ridge.direction = 1

    def escape(t, y):
        return max(abs(y[0]), abs(y[1])) - 2.2 * math.pi
    escape.terminal = True

    delta = 1e-4

    def shoot(psi):
        # start displaced along (cos psi, sin psi) with matched velocity T = V
        d = np.array([math.cos(psi), math.sin(psi)])
        x0 = delta * d
        v_here = 2.0 * e_j * (1.0 - math.cos(x0[0]) * math.cos(x0[1]))
        # velocity direction ~ displacement direction; momenta from T = V
        denom = 4.0 * e_c_phi * d[0] ** 2 + 4.0 * e_c_theta * d[1] ** 2
        p_scale = math.sqrt(v_here / max(denom, 1e-300))
        y0 = [x0[0], x0[1], p_scale * d[0], p_scale * d[1]]
        sol = solve_ivp(rhs, (0.0, max_time), y0, rtol=rtol, atol=1e-12,
                        events=(ridge, escape), dense_output=True,
                        max_step=max_time / 50.0)
        if sol.t_events[0].size:
            te = sol.t_events[0][0]
            ye = sol.sol(te)
            return ye[1] - math.pi / 2.0, sol, te
        # escaped without reaching the ridge: classify by which way it ran
        yf = sol.y[:, -1]
        return (math.pi if yf[0] > yf[1] else -math.pi), sol, None

    # bisection on the launch angle between the two axis escapes
    lo_ang, hi_ang = 1e-6, math.pi / 2.0 - 1e-6
    f_lo = shoot(lo_ang)[0]
    f_hi = shoot(hi_ang)[0]
    if f_lo * f_hi > 0:
        raise RuntimeError("tunnelling shot failed to bracket the saddle")
    for _ in range(60):
        mid = 0.5 * (lo_ang + hi_ang)
        f_mid, sol, te = shoot(mid)
        if f_mid * f_lo <= 0:
            hi_ang = mid
        else:
            lo_ang, f_lo = mid, f_mid
    miss, sol, te = shoot(0.5 * (lo_ang + hi_ang))
    if te is None or abs(miss) > 1e-3:
        raise RuntimeError(
            f"tunnelling path missed the saddle by {miss:.3e}")

    ts = np.linspace(0.0, te, n_samples)
    ys = sol.sol(ts)
    rate = (8.0 * e_c_phi * ys[2] ** 2 + 8.0 * e_c_theta * ys[3] ** 2)
    s_half = np.trapz(rate, ts)
    pts_half = ys[:2].T
    pts = np.vstack([pts_half, math.pi - pts_half[::-1]])
    return TunnelPath(pts, 2.0 * s_half,
                      estimate=s1_closed_form(e_j, e_c_phi, e_c_theta),
                      miss=abs(miss))


# ---------------------------------------------------------------------------
# optimal Josephson energy
# ---------------------------------------------------------------------------

def degeneracy(levels: Sequence[float]) -> float:
    e0, e1, e2 = levels[0], levels[1], levels[2]
    return math.log10((e2 - e0) / max(e1 - e0, 1e-300))


def optimal_ej(ec_ratio: float, z_zeta: float,
               ej_grid: Sequence[float], n_theta: int = 64,
               n_phi: int = 256) -> dict:
    """Josephson energy maximizing the excitation-gap ratio figure of merit
    D = log10((E2-E0)/(E1-E0)) at zero external flux."""
    e_c_phi = 1.0
    e_c_theta = e_c_phi / ec_ratio
    e_c_zeta = e_c_phi / (ec_ratio - 1.0)
    e_l = e_c_zeta / (math.pi ** 2 * z_zeta ** 2)
    ds = []
    for ej in ej_grid:
        q = TwoModeQubit(e_c_theta, e_c_phi, e_l, ej)
        levels = spectrum_2d(q, n_levels=3, n_theta=n_theta, n_phi=n_phi)
        ds.append(degeneracy(levels))
    k = int(np.argmax(ds))
    if k in (0, len(ej_grid) - 1):
        raise RuntimeError("degeneracy maximum on the scan edge; widen the grid")
    # parabolic refinement in log E_J
    x = np.log(np.asarray(ej_grid[k - 1:k + 2], dtype=float))
    y = np.asarray(ds[k - 1:k + 2])
    denom = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2])
    a = (x[2] * (y[1] - y[0]) + x[1] * (y[0] - y[2]) + x[0] * (y[2] - y[1])) / denom
    b = (x[2] ** 2 * (y[0] - y[1]) + x[1] ** 2 * (y[2] - y[0])
         + x[0] ** 2 * (y[1] - y[2])) / denom
    x_star = -b / (2.0 * a) if a < 0 else x[1]
    return {"e_j_star": float(np.exp(x_star)), "d_star": float(ds[k]),
            "grid": list(ej_grid), "d_values": ds}


# ---------------------------------------------------------------------------
# dephasing rate
# ---------------------------------------------------------------------------

def dephasing_rate(sigma: float, z_phi: float) -> float:
    """Idle dephasing rate from white residual-coupling noise of st.dev.
    sigma through the oscillator's cosine matrix elements (closed form)."""
    if sigma < 0:
        raise ValueError("noise strength must be nonnegative")
    x = math.pi * z_phi
    return 2.0 * sigma ** 2 * math.exp(-x) * math.cosh(x)


def dephasing_rate_series(sigma: float, z_phi: float, terms: int = 50) -> float:
    """Partial-sum form of the same rate over the even oscillator levels."""
    x = math.pi * z_phi
    total = 0.0
    for k in range(terms):
        if 2 * k < 170:
            total += x ** (2 * k) / math.factorial(2 * k)
    return 2.0 * sigma ** 2 * math.exp(-x) * total
