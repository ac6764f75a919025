"""Two-mode split Hamiltonians for the protected-gate models.

Unit conventions: hbar = 1, 2e = 1 (so e^2 = 1/4), phi_0 = 1.  All energies are
quoted in units of the reference charging energy of the model at hand (the
oscillator charging energy for the ideal-qubit gate, E_C_phi for the 0-pi
families).  Impedances always enter as the dimensionless ratio Z/R_Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# mode grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeSpec:
    """Discretized mode: a periodic angle or a truncated continuous variable."""

    kind: str                 # "periodic" | "continuous"
    points: int
    x_max: float = 0.0        # half-width, continuous modes only
    role: str = "qubit"       # "qubit" | "ancilla"

    def __post_init__(self):
        if self.kind not in ("periodic", "continuous"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.points < 16:
            raise ValueError("mode needs at least 16 points")
        if self.points & (self.points - 1):
            raise ValueError("mode point count must be a power of two")
        if self.kind == "continuous" and self.x_max <= 0:
            raise ValueError("continuous mode needs x_max > 0")

    @property
    def dx(self) -> float:
        if self.kind == "periodic":
            return TWO_PI / self.points
        return 2.0 * self.x_max / self.points

    def positions(self) -> np.ndarray:
        if self.kind == "periodic":
            return TWO_PI * np.arange(self.points) / self.points
        return -self.x_max + self.dx * np.arange(self.points)

    def momenta(self) -> np.ndarray:
        """Conjugate-variable grid in FFT ordering (integers for a rotor)."""
        return TWO_PI * np.fft.fftfreq(self.points, d=self.dx)


def default_continuous_mode(z_over_rq: float, points: int = 256,
                            x_max_factor: float = 1.0,
                            role: str = "ancilla") -> ModeSpec:
    """Oscillator grid wide enough that an impedance-Z ground state has
    boundary amplitude below 1e-8 (the envelope st. dev. is sqrt(pi Z/R_Q),
    and 10*pi*max(1, sqrt(Z)/2) keeps ~8.9 sigma of clearance)."""
    x_max = 10.0 * math.pi * max(1.0, math.sqrt(max(z_over_rq, 1e-12)) / 2.0)
    return ModeSpec("continuous", points, x_max=x_max * x_max_factor, role=role)


# ---------------------------------------------------------------------------
# Hamiltonian container
# ---------------------------------------------------------------------------

@dataclass
class CrossTerm:
    """x1-p2 coupling, diagonal after a partial Fourier transform on mode 2.

    Either a cosine coupling  -c(t) * scale * cos(x1 - perp * p2 + phase(t))
    (``cosine=True``; fast path needs integer p2, i.e. a periodic mode 2) or a
    static separable product  f(x1) * g(p2).
    """

    cosine: bool = False
    scale: float = 1.0           # constant multiplier on the scheduled coupling
    f: Optional[np.ndarray] = None   # static separable factor over x1
    g: Optional[np.ndarray] = None   # static separable factor over p2


@dataclass
class SplitHamiltonian:
    """Sum of terms that are each diagonal in one (basis1, basis2) pair.

    Tables hold the full term values on the grids (e.g. k1 = 4 E_C p1^2), so
    the propagator only ever exponentiates and multiplies.  Scheduled scalars
    are bound per run via :meth:`bound`.
    """

    mode1: ModeSpec
    mode2: ModeSpec
    v1: np.ndarray                      # (N1,) static potential, mode 1
    v2: np.ndarray                      # (N2,) static potential, mode 2
    k1: np.ndarray                      # (N1,) kinetic over p1
    k2: np.ndarray                      # (N2,) kinetic over p2
    w12: Optional[np.ndarray] = None    # (N1,N2) table scheduled by coupling(t)
    k12: Optional[np.ndarray] = None    # (N1,N2) static p1 x p2 table
    cross: Optional[CrossTerm] = None
    schedules: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, tab in (("v1", self.v1), ("v2", self.v2),
                          ("k1", self.k1), ("k2", self.k2)):
            tab = np.asarray(tab, dtype=float)
            if not np.all(np.isfinite(tab)):
                raise ValueError(f"{name} table contains non-finite entries")
            setattr(self, name, tab)

    # schedule accessors -- absent schedules mean "0" (or raise for coupling)
    def coupling(self, t: float) -> float:
        fn = self.schedules.get("coupling")
        if fn is None:
            raise ValueError("no coupling schedule bound to this Hamiltonian")
        return fn(t)

    def has_coupling(self) -> bool:
        return self.w12 is not None or (self.cross is not None and self.cross.cosine)

    def opt_schedule(self, name: str) -> Optional[Callable[[float], float]]:
        return self.schedules.get(name)

    def bound(self, **schedules) -> "SplitHamiltonian":
        """Copy with the given schedule callables attached."""
        merged = dict(self.schedules)
        merged.update(schedules)
        return replace(self, schedules=merged)

    def term_summary(self) -> str:
        """Human-readable dump of the assembled terms (for golden files)."""
        def stats(tab):
            return f"min={np.min(tab):.12g} max={np.max(tab):.12g}"

        lines = [
            f"mode1: {self.mode1.kind} n={self.mode1.points}"
            + (f" x_max={self.mode1.x_max:.12g}" if self.mode1.kind == "continuous" else ""),
            f"mode2: {self.mode2.kind} n={self.mode2.points}",
            f"V1(x1): {stats(self.v1)}",
            f"V2(x2): {stats(self.v2)}",
            f"K1(p1): {stats(self.k1)}",
            f"K2(p2): {stats(self.k2)}",
        ]
        if self.w12 is not None:
            lines.append(f"W12(x1,x2) [scheduled]: {stats(self.w12)}")
        if self.k12 is not None:
            lines.append(f"K12(p1,p2): {stats(self.k12)}")
        if self.cross is not None:
            c = self.cross
            if c.cosine:
                lines.append(f"cross(x1,p2) [scheduled]: -c(t)*{c.scale:.12g}"
                             "*cos(x1 - pi*p2 + phase)")
            if c.f is not None:
                lines.append(f"cross(x1,p2) static: f({stats(c.f)}) * g({stats(c.g)})")
        for key, val in sorted(self.info.items()):
            if isinstance(val, float):
                lines.append(f"{key}: {val:.12g}")
            else:
                lines.append(f"{key}: {val}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# impedance <-> energy conversions
# ---------------------------------------------------------------------------

def impedance_to_energies(z_over_rq: float, e_c: float,
                          oscillator_form: str = "half_EL_phi_sq") -> float:
    """Inductive energy matching an oscillator impedance.

    half_EL_phi_sq:  H = 4 E_C n^2 + (E_L/2) x^2  ->  E_L = 2 E_C / (pi Z/R_Q)^2
    EL_zeta_sq:      H = 4 E_C n^2 +  E_L    x^2  ->  E_L =   E_C / (pi Z/R_Q)^2

    The resulting ground state has grid-stabilizer expectations
    <S_X> = exp(-pi R_Q / 2Z) and <S_Z> = exp(-2 pi Z / R_Q).
    """
    if z_over_rq <= 0:
        raise ValueError("impedance ratio must be positive")
    if oscillator_form == "half_EL_phi_sq":
        return 2.0 * e_c / (math.pi * z_over_rq) ** 2
    if oscillator_form == "EL_zeta_sq":
        return e_c / (math.pi * z_over_rq) ** 2
    raise ValueError(f"unknown oscillator form {oscillator_form!r}")


def oscillator_ground_var(z_over_rq: float) -> float:
    """Position variance <x^2> of the impedance-Z oscillator ground state."""
    return math.pi * z_over_rq


# ---------------------------------------------------------------------------
# model parameter records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EffectiveParams:
    """One-dimensional reduction of the two-mode double-well qubit.

    e_c_alpha = pi^2 E_L / 4 always; e_j_alpha is fitted spectrally (2*t1)
    unless produced by the Born-Oppenheimer route; e_j_2alpha = 2*t2.
    """

    e_c_alpha: float
    e_j_alpha: float
    e_j_2alpha: float
    source: str = "fit"          # "fit" | "born_oppenheimer" | "manual"
    fit_error: float = 0.0       # achieved spectral error of the fit
    flagged: bool = False        # fit residual above threshold / at noise floor

    def __post_init__(self):
        if min(self.e_c_alpha, self.e_j_alpha, self.e_j_2alpha) < 0:
            raise ValueError("effective energies must be nonnegative")


@dataclass(frozen=True)
class ModelParams:
    """Energy ratios shared by the gate models (reference energy = 1).

    ec_ratio is E_C_phi/E_C for the ideal/T-gate/phi-mode families and
    E_C_phi/E_C_theta for the 0-pi families.
    """

    family: str = "ideal"        # ideal | zeropi | tgate | phi_mode
    ec_ratio: float = 100.0
    ej: float = 1.0              # qubit Josephson energy / reference E_C
    z: float = 8.0               # ancilla impedance Z/R_Q (Z_eff for tgate)
    z_ancilla: float = 10.0      # oscillator impedance for external-phi 0-pi gate
    delta_el: float = 0.0        # inductive asymmetry, delta-E_L / 2E_L
    delta_ej: float = 0.0        # Josephson asymmetry, delta-E_J / 2E_J

    def __post_init__(self):
        if self.ec_ratio <= 1:
            raise ValueError("charging-energy ratio must exceed 1")
        if self.ej < 0 or self.z <= 0:
            raise ValueError("energies and impedances must be positive")


def zeropi_energy_ladder(ec_ratio: float, z_zeta: float) -> dict:
    """Derived 0-pi energies with E_C_phi = 1.

    C = (R-1) C_J fixes E_C_zeta = 1/(R-1) and Z_phi/Z_zeta = sqrt(R-1);
    E_L then follows from the zeta-mode impedance.
    """
    e_c_phi = 1.0
    e_c_theta = e_c_phi / ec_ratio
    e_c_zeta = e_c_phi / (ec_ratio - 1.0)
    e_l = impedance_to_energies(z_zeta, e_c_zeta, "EL_zeta_sq")
    z_phi = z_zeta * math.sqrt(ec_ratio - 1.0)
    return {"e_c_phi": e_c_phi, "e_c_theta": e_c_theta, "e_c_zeta": e_c_zeta,
            "e_l": e_l, "z_phi": z_phi}


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _check_boundary_budget(mode: ModeSpec, variance: float):
    # 8.5 sigma of clearance keeps a Gaussian tail under ~1e-8 amplitude
    if mode.kind == "continuous" and mode.x_max < 8.5 * math.sqrt(variance):
        raise ValueError(
            f"x_max={mode.x_max:.3g} too small for envelope variance {variance:.3g}")


def build_ideal_qubit_oscillator(params: ModelParams,
                                 n1: int = 256, n2: int = 64,
                                 x_max_factor: float = 1.0,
                                 c_int_ratio: float = 0.0) -> SplitHamiltonian:
    """Pi-periodic protected qubit (theta) coupled to an oscillator (phi).

    H = 4 E_C_phi n_phi^2 + (E_L_phi/2) phi^2 + 4 E_C n_theta^2
        - E_J cos(2 theta) - E_Jint(t) cos(phi - theta)
    with an optional charge-charge term 4 E_Ctp n_theta n_phi from a coupler
    capacitance C_int = c_int_ratio * C_phi.
    """
    e_c_phi = 1.0
    e_c = e_c_phi / params.ec_ratio
    e_l = impedance_to_energies(params.z, e_c_phi, "half_EL_phi_sq")

    mode1 = default_continuous_mode(params.z, n1, x_max_factor, role="ancilla")
    mode2 = ModeSpec("periodic", n2, role="qubit")
    _check_boundary_budget(mode1, oscillator_ground_var(params.z))

    phi = mode1.positions()
    theta = mode2.positions()
    p1 = mode1.momenta()
    p2 = mode2.momenta()

    k1 = 4.0 * e_c_phi * p1 ** 2
    k2 = 4.0 * e_c * p2 ** 2
    v1 = 0.5 * e_l * phi ** 2
    v2 = -params.ej * np.cos(2.0 * theta)
    w12 = -np.cos(phi[:, None] - theta[None, :])

    ham = SplitHamiltonian(mode1, mode2, v1, v2, k1, k2, w12=w12)
    if c_int_ratio > 0:
        # renormalize so the dressed oscillator charging energy stays the unit
        dressed = dressed_charging_ratios(params.ec_ratio, c_int_ratio)
        scale = 1.0 / dressed["e_c_phi"]
        ham.k1 = 4.0 * p1 ** 2
        ham.k2 = 4.0 * (dressed["e_c_qubit"] * scale) * p2 ** 2
        ham.k12 = 4.0 * (dressed["e_c_cross"] * scale) * np.outer(p1, p2)
        e_c = dressed["e_c_qubit"] * scale

    omega = math.sqrt(8.0 * e_c_phi * e_l)
    ham.info = {
        "family": "ideal", "decoder": "theta_basis",
        "e_c_phi": e_c_phi, "e_c": e_c, "e_l": e_l, "e_j": params.ej,
        "omega_osc": omega,
        "tau_ideal": 1.0 / (math.pi * e_l),
        "plasma_mass_ec": e_c_phi + e_c,
        "suppression": 1.0,
        "ansatz_centers": ((0.0, 0.0), (0.0, math.pi)),
        "ansatz_var": (oscillator_ground_var(params.z),
                       math.sqrt(e_c / (2.0 * max(params.ej, 1e-3)))),
    }
    return ham


def build_effective_zeropi(params: ModelParams, ancilla: str,
                           effective: EffectiveParams,
                           n1: int = 256, n2: int = 64,
                           x_max_factor: float = 1.0) -> SplitHamiltonian:
    """Reduced 0-pi gate model: periodic mode alpha plus one ancilla oscillator.

    ancilla = "internal_zeta":  H1 = 4 E_C_zeta n^2 + E_L zeta^2, coupling scale 1.
    ancilla = "external_phi":   H1 = 4 E_C_phi n^2 + (E_L_phi/2) phi^2 and the
    coupling carries the zeta-mode vacuum suppression exp(-pi Z_zeta / 2 R_Q).

    The coupling itself is  -E_Jint(t) * scale * cos(x1 - pi n_alpha + phase(t));
    inductive asymmetry adds the static cross table  pi dEL x1 n_alpha.
    """
    ladder = zeropi_energy_ladder(params.ec_ratio, params.z)
    e_l = ladder["e_l"]

    if ancilla == "internal_zeta":
        e_c_1 = ladder["e_c_zeta"]
        z_1 = params.z
        suppression = 1.0
        omega = 4.0 * math.sqrt(e_l * e_c_1)
        tau_ideal = 1.0 / (2.0 * math.pi * e_l)
    elif ancilla == "external_phi":
        e_c_1 = ladder["e_c_phi"]
        z_1 = params.z_ancilla
        if z_1 is None or z_1 <= 0:
            raise ValueError("external_phi ancilla needs a positive Z_phi")
        e_l_phi = impedance_to_energies(z_1, e_c_1, "half_EL_phi_sq")
        suppression = math.exp(-math.pi * params.z / 2.0)
        omega = math.sqrt(8.0 * e_c_1 * e_l_phi)
        tau_ideal = 1.0 / (math.pi * e_l_phi)
    else:
        raise ValueError(f"unknown ancilla {ancilla!r}")

    mode1 = default_continuous_mode(z_1, n1, x_max_factor, role="ancilla")
    mode2 = ModeSpec("periodic", n2, role="qubit")
    _check_boundary_budget(mode1, oscillator_ground_var(z_1))

    x1 = mode1.positions()
    alpha = mode2.positions()
    p1 = mode1.momenta()
    n_alpha = mode2.momenta()

    k1 = 4.0 * e_c_1 * p1 ** 2
    k2 = 4.0 * effective.e_c_alpha * n_alpha ** 2
    if ancilla == "internal_zeta":
        v1 = e_l * x1 ** 2
    else:
        v1 = 0.5 * e_l_phi * x1 ** 2
    v2 = (-effective.e_j_alpha * np.cos(alpha)
          - effective.e_j_2alpha * np.cos(2.0 * alpha))

    cross = CrossTerm(cosine=True, scale=suppression)
    if params.delta_el != 0.0:
        d_el = params.delta_el * 2.0 * e_l
        cross.f = math.pi * d_el * x1
        cross.g = np.array(n_alpha, dtype=float)

    ham = SplitHamiltonian(mode1, mode2, v1, v2, k1, k2, cross=cross)
    ham.info = {
        "family": f"zeropi_{ancilla}", "decoder": "alpha_basis",
        "e_c_1": e_c_1, "e_l": e_l, "suppression": suppression,
        "e_c_alpha": effective.e_c_alpha, "e_j_alpha": effective.e_j_alpha,
        "e_j_2alpha": effective.e_j_2alpha,
        "omega_osc": omega, "tau_ideal": tau_ideal,
        "plasma_mass_ec": e_c_1,
        "ansatz_centers": ((0.0, 0.0),),
        "ansatz_var": (oscillator_ground_var(z_1),
                       math.sqrt(2.0 * effective.e_c_alpha
                                 / (effective.e_j_alpha + 4.0 * effective.e_j_2alpha
                                    + 1e-300))),
    }
    return ham


def build_tgate_model(params: ModelParams,
                      n1: int = 256, n2: int = 64,
                      x_max_factor: float = 1.0) -> SplitHamiltonian:
    """Ideal qubit coupled to a quartic (SNAIL-like) oscillator for a T gate.

    The oscillator potential V0 (phi^4/24pi^4 - phi^2/6pi^2) enacts a quarter
    phase step on grid states; V0 follows from the effective impedance via
    V0 = 24 E_C_phi / (Z_eff/R_Q)^4.
    """
    if params.z <= 0:
        raise ValueError("effective impedance must be positive")
    e_c_phi = 1.0
    e_c = e_c_phi / params.ec_ratio
    v0 = 24.0 * e_c_phi / params.z ** 4
    if v0 <= 0:
        raise ValueError("quartic coefficient must be positive (confinement)")

    mode1 = default_continuous_mode(params.z, n1, x_max_factor, role="ancilla")
    mode2 = ModeSpec("periodic", n2, role="qubit")

    phi = mode1.positions()
    theta = mode2.positions()
    p1 = mode1.momenta()
    p2 = mode2.momenta()

    k1 = 4.0 * e_c_phi * p1 ** 2
    k2 = 4.0 * e_c * p2 ** 2
    v1 = v0 * (phi ** 4 / (24.0 * math.pi ** 4) - phi ** 2 / (6.0 * math.pi ** 2))
    v2 = -params.ej * np.cos(2.0 * theta)
    w12 = -np.cos(phi[:, None] - theta[None, :])

    ham = SplitHamiltonian(mode1, mode2, v1, v2, k1, k2, w12=w12)
    e_l_eq = impedance_to_energies(params.z, e_c_phi, "half_EL_phi_sq")
    ham.info = {
        "family": "tgate", "decoder": "theta_basis",
        "e_c_phi": e_c_phi, "e_c": e_c, "v0": v0, "e_j": params.ej,
        "omega_osc": math.sqrt(8.0 * e_c_phi * e_l_eq),
        "tau_ideal": 2.0 * math.pi / v0,
        "plasma_mass_ec": e_c_phi + e_c,
        "suppression": 1.0,
        "ansatz_centers": ((0.0, 0.0), (0.0, math.pi)),
        "ansatz_var": (oscillator_ground_var(params.z),
                       math.sqrt(e_c / (2.0 * max(params.ej, 1e-3)))),
    }
    return ham


def build_phi_mode_gate(params: ModelParams,
                        n1: int = 256, n2: int = 64,
                        x_max_factor: float = 1.0) -> SplitHamiltonian:
    """Gate through the qubit's own flux mode: the static double-well coupling
    is replaced by a tunable one,  -E_Jint(t) cos(theta) cos(phi).

    Pinning E_Jint = 2 E_J recovers the static two-mode qubit Hamiltonian.
    """
    e_c_phi = 1.0
    e_c_theta = e_c_phi / params.ec_ratio
    e_l = impedance_to_energies(params.z, e_c_phi, "EL_zeta_sq")

    mode1 = default_continuous_mode(params.z, n1, x_max_factor, role="ancilla")
    mode2 = ModeSpec("periodic", n2, role="qubit")
    _check_boundary_budget(mode1, oscillator_ground_var(params.z))

    phi = mode1.positions()
    theta = mode2.positions()
    p1 = mode1.momenta()
    p2 = mode2.momenta()

    k1 = 4.0 * e_c_phi * p1 ** 2
    k2 = 4.0 * e_c_theta * p2 ** 2
    v1 = e_l * phi ** 2
    v2 = np.zeros_like(theta)
    w12 = -np.outer(np.cos(phi), np.cos(theta))

    ham = SplitHamiltonian(mode1, mode2, v1, v2, k1, k2, w12=w12)
    ham.info = {
        "family": "phi_mode", "decoder": "theta_basis",
        "e_c_phi": e_c_phi, "e_c_theta": e_c_theta, "e_l": e_l,
        "omega_osc": 4.0 * math.sqrt(e_l * e_c_phi),
        "tau_ideal": 1.0 / (2.0 * math.pi * e_l),
        "plasma_mass_ec": e_c_phi + e_c_theta,
        "suppression": 1.0,
        "ansatz_centers": ((0.0, None),),   # uniform in theta
        "ansatz_var": (oscillator_ground_var(params.z), None),
    }
    return ham


# ---------------------------------------------------------------------------
# coupler-capacitance arithmetic (shared with the circuit module)
# ---------------------------------------------------------------------------

def dressed_charging_ratios(r_qubit_phi: float, r_int: float) -> dict:
    """Dressed charging energies for a qubit-oscillator pair whose coupler
    carries capacitance C_int = r_int * C_phi; C_qubit = r_qubit_phi * C_phi.

    Returns energies in units of the bare oscillator E_C_phi.
    """
    r_tp = r_qubit_phi
    denom = r_tp + r_tp * r_int + r_int           # C~ / (C_phi^2), scaled
    e_c_phi_dressed = (r_tp + r_int) / denom      # * E_C_phi
    e_c_qubit_dressed = (1.0 + r_int) / denom
    e_c_cross = r_int / denom
    return {"e_c_phi": e_c_phi_dressed, "e_c_qubit": e_c_qubit_dressed,
            "e_c_cross": e_c_cross}
