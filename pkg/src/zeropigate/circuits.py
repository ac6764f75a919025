"""Circuit quantization: from a branch/node/loop description to Hamiltonian
coefficients in the irrotational gauge.

Conventions: hbar = 1, 2e = 1 (e^2 = 1/4), phi_0 = 1.  Element values are
given in simulation units, so a capacitance C contributes a charging energy
e^2/2C = 1/(8C) and an inductance L an inductive energy phi_0^2/L = 1/L.
External fluxes are dimensionless phases (flux / phi_0).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

E_SQ = 0.25          # e^2 with 2e = 1
RANK_TOL = 1e-12     # relative singular-value cutoff for the gauge solve


class CircuitError(ValueError):
    pass


# ---------------------------------------------------------------------------
# graph description
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    node_from: int
    node_to: int
    kind: str                 # "junction" | "capacitor" | "inductor"
    e_j: float = 0.0
    c: float = 0.0
    l_inv: float = 0.0

    def __post_init__(self):
        if self.kind not in ("junction", "capacitor", "inductor"):
            raise CircuitError(f"unknown branch kind {self.kind!r}")
        if min(self.e_j, self.c, self.l_inv) < 0:
            raise CircuitError("element values must be nonnegative")


@dataclass
class CircuitGraph:
    """Branches between nodes plus an independent set of loops.

    Loops are given as (branch index, orientation sign) lists; the signed sum
    of branch fluxes around each loop equals its external flux.
    """

    n_nodes: int
    branches: list
    loops: list                       # list of [(branch_idx, sign), ...]
    external_fluxes: list             # one per loop, radians

    def __post_init__(self):
        if len(self.branches) < self.n_nodes:
            raise CircuitError("need at least as many branches as nodes")
        if len(self.loops) != len(self.external_fluxes):
            raise CircuitError("one external flux per loop required")
        for loop in self.loops:
            for j, s in loop:
                if not 0 <= j < len(self.branches):
                    raise CircuitError(f"loop references unknown branch {j}")
                if s not in (-1, 1):
                    raise CircuitError("loop orientation signs must be +-1")

    # -- incidence matrices ---------------------------------------------
    def a_matrix(self) -> np.ndarray:
        """Branch-to-node incidence (k x n): branch flux = phi_from - phi_to."""
        a = np.zeros((len(self.branches), self.n_nodes))
        for j, br in enumerate(self.branches):
            a[j, br.node_from] += 1.0
            a[j, br.node_to] -= 1.0
        return a

    def g_matrix(self) -> np.ndarray:
        """Loop-to-branch matrix (l x k): signed membership of each branch."""
        g = np.zeros((len(self.loops), len(self.branches)))
        for i, loop in enumerate(self.loops):
            for j, s in loop:
                g[i, j] += s
        return g

    def c_matrix(self) -> np.ndarray:
        return np.diag([br.c for br in self.branches])

    def l_inv_matrix(self) -> np.ndarray:
        return np.diag([br.l_inv for br in self.branches])

    # -- JSON round trip --------------------------------------------------
    def to_json(self) -> str:
        doc = {
            "nodes": self.n_nodes,
            "branches": [{"from": b.node_from, "to": b.node_to, "kind": b.kind,
                          "ej": b.e_j, "c": b.c, "l_inv": b.l_inv}
                         for b in self.branches],
            "loops": [[[j, s] for j, s in loop] for loop in self.loops],
            "external_fluxes": list(self.external_fluxes),
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CircuitGraph":
        doc = json.loads(text)
        branches = [Branch(b["from"], b["to"], b["kind"], b.get("ej", 0.0),
                           b.get("c", 0.0), b.get("l_inv", 0.0))
                    for b in doc["branches"]]
        loops = [[(int(j), int(s)) for j, s in loop] for loop in doc["loops"]]
        return cls(doc["nodes"], branches, loops, list(doc["external_fluxes"]))


# ---------------------------------------------------------------------------
# irrotational gauge
# ---------------------------------------------------------------------------

def irrotational_gauge(graph: CircuitGraph) -> np.ndarray:
    """External-flux allocation matrix B with A^T C B = 0 and G B = I.

    Solved as the least-squares pseudoinverse of the stacked system; rank
    deficiency of G (a redundant loop) is reported explicitly.
    """
    a = graph.a_matrix()
    g = graph.g_matrix()
    c = graph.c_matrix()
    n_loops = len(graph.loops)

    if n_loops:
        g_rank = np.linalg.matrix_rank(g, tol=RANK_TOL * max(1.0, float(np.max(np.abs(g)))))
        if g_rank < n_loops:
            raise CircuitError(
                "loop constraints are linearly dependent (redundant loop); "
                "choose an independent loop set")

    stacked = np.vstack([a.T @ c, g])
    rhs = np.vstack([np.zeros((graph.n_nodes, n_loops)), np.eye(n_loops)])
    b, *_ = np.linalg.lstsq(stacked, rhs, rcond=RANK_TOL)

    resid_gauge = np.max(np.abs(a.T @ c @ b)) if b.size else 0.0
    resid_loop = np.max(np.abs(g @ b - np.eye(n_loops))) if n_loops else 0.0
    scale = max(1.0, float(np.max(np.abs(c))))
    if resid_gauge > 1e-9 * scale or resid_loop > 1e-9:
        raise CircuitError(
            f"no consistent flux allocation (residuals {resid_gauge:.2e}, "
            f"{resid_loop:.2e}); check loop orientations")
    return b


# ---------------------------------------------------------------------------
# quantized model
# ---------------------------------------------------------------------------

@dataclass
class JosephsonTerm:
    """One cosine of the potential: -energy * cos(vector . modes + offset)."""
    energy: float
    vector: np.ndarray
    offset: float

    def as_dict(self):
        return {"energy": self.energy, "vector": list(np.round(self.vector, 12)),
                "offset": self.offset}


@dataclass
class QuantizedModel:
    mode_names: list
    c_theta: np.ndarray               # transformed capacitance matrix
    l_inv_theta: np.ndarray           # transformed inverse-inductance matrix
    josephson_terms: list             # [JosephsonTerm]
    flux_couplings: np.ndarray        # linear inductive drive per mode
    gauge_b: np.ndarray
    dynamical: np.ndarray = field(default_factory=lambda: np.empty(0, bool))
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if self.dynamical.size == 0:
            diag = np.abs(np.diag(self.c_theta))
            row = np.max(np.abs(self.c_theta), axis=0)
            self.dynamical = (diag + row) > 1e-12 * max(1.0, np.max(diag, initial=0.0))

    def charging_matrix(self) -> np.ndarray:
        """4 E_C matrix on the dynamical block: kinetic = n^T (this/4*4...) n,
        i.e. T = 2 e^2 n^T C_theta^{-1} n restricted to dynamical modes."""
        idx = np.where(self.dynamical)[0]
        sub = self.c_theta[np.ix_(idx, idx)]
        inv = np.linalg.inv(sub)
        full = np.zeros_like(self.c_theta)
        full[np.ix_(idx, idx)] = 2.0 * E_SQ * inv
        return full

    def to_json(self) -> str:
        doc = {
            "mode_names": self.mode_names,
            "c_theta": np.round(self.c_theta, 12).tolist(),
            "l_inv_theta": np.round(self.l_inv_theta, 12).tolist(),
            "josephson_terms": [t.as_dict() for t in self.josephson_terms],
            "flux_couplings": np.round(self.flux_couplings, 12).tolist(),
            "dynamical": self.dynamical.tolist(),
            "warnings": self.warnings,
        }
        return json.dumps(doc, indent=1, sort_keys=True)


def quantize(graph: CircuitGraph, m_inv: np.ndarray,
             mode_names: Sequence[str]) -> QuantizedModel:
    """Transform the node-flux model to the modes theta = M^{-1} phi."""
    a = graph.a_matrix()
    c = graph.c_matrix()
    l_inv = graph.l_inv_matrix()
    b = irrotational_gauge(graph)
    m = np.linalg.inv(m_inv)

    c_phi = a.T @ c @ a
    c_theta = m.T @ c_phi @ m
    l_phi = a.T @ l_inv @ a
    l_theta = m.T @ l_phi @ m

    phi_ext = np.asarray(graph.external_fluxes, dtype=float)
    # linear inductive couplings: phi_ext^T (B^T Linv A M) theta
    flux_couplings = phi_ext @ (b.T @ l_inv @ a @ m) if phi_ext.size else \
        np.zeros(len(mode_names))

    am = a @ m
    b_off = b @ phi_ext if phi_ext.size else np.zeros(len(graph.branches))
    terms = []
    for j, br in enumerate(graph.branches):
        if br.kind == "junction" and br.e_j > 0:
            terms.append(JosephsonTerm(br.e_j, am[j].copy(), -float(b_off[j])))

    return QuantizedModel(list(mode_names), c_theta, l_theta, terms,
                          np.asarray(flux_couplings, dtype=float), b)


# ---------------------------------------------------------------------------
# named topologies
# ---------------------------------------------------------------------------

QUADRUPOLE_M_INV = 0.5 * np.array([
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [1, 1, -1, -1],
    [1, 1, 1, 1],
], dtype=float)
ZERO_PI_MODES = ["theta", "phi", "zeta", "sigma"]


def _zero_pi_branches(c1, c2, cj1, cj2, l1, l2, ej1, ej2, node_offset=0):
    """Branch list of the four-node double-well qubit cell; node pattern
    (J1: 0-1, J2: 2-3, C1: 0-3, C2: 1-2, L1: 0-2, L2: 1-3) + offset."""
    o = node_offset
    return [
        Branch(0 + o, 1 + o, "junction", e_j=ej1, c=cj1),
        Branch(2 + o, 3 + o, "junction", e_j=ej2, c=cj2),
        Branch(0 + o, 3 + o, "capacitor", c=c1),
        Branch(1 + o, 2 + o, "capacitor", c=c2),
        Branch(0 + o, 2 + o, "inductor", l_inv=1.0 / l1),
        Branch(1 + o, 3 + o, "inductor", l_inv=1.0 / l2),
    ]


def _qubit_loop(base=0):
    # J1 - J2 - L1(-) + L2: the signed branch-flux sum around the qubit loop
    return [(base + 0, 1), (base + 1, -1), (base + 4, -1), (base + 5, 1)]


def zero_pi_graph(c1, c2, cj1, cj2, l1, l2, ej1, ej2,
                  phi_ext_q: float = 0.0) -> CircuitGraph:
    return CircuitGraph(4, _zero_pi_branches(c1, c2, cj1, cj2, l1, l2, ej1, ej2),
                        [_qubit_loop()], [phi_ext_q])


def zero_pi_zeta_squid_graph(c1, c2, cj1, cj2, l1, l2, ej1, ej2, ejs,
                             phi_q: float = 0.0, phi_s: float = 0.0,
                             phi_qs: Optional[float] = None) -> CircuitGraph:
    """Double-well qubit shunted by a two-junction tunable element between the
    nodes whose flux difference is theta + zeta.  The derived qubit/shunt
    loop flux defaults to -phi_q/2 - phi_s/2 (the irrotational value for
    symmetric elements)."""
    if phi_qs is None:
        phi_qs = -0.5 * phi_q - 0.5 * phi_s
    branches = _zero_pi_branches(c1, c2, cj1, cj2, l1, l2, ej1, ej2)
    branches.append(Branch(0, 3, "junction", e_j=ejs))   # index 6
    branches.append(Branch(0, 3, "junction", e_j=ejs))   # index 7
    loops = [
        _qubit_loop(),
        [(6, -1), (7, 1)],                       # shunt loop
        [(0, -1), (6, 1), (5, -1)],              # qubit-shunt loop
    ]
    return CircuitGraph(4, branches, loops, [phi_q, phi_s, phi_qs])


def zero_pi_plus_oscillator_graph(c1, c2, cj1, cj2, l1, l2, ej1, ej2,
                                  ejs, c_osc, l_osc,
                                  phi_q: float = 0.0, phi_s: float = 0.0,
                                  phi_qs: Optional[float] = None) -> CircuitGraph:
    """Qubit cell Josephson-coupled to an external oscillator (node 4)."""
    if phi_qs is None:
        phi_qs = -0.5 * phi_q - 0.5 * phi_s
    branches = _zero_pi_branches(c1, c2, cj1, cj2, l1, l2, ej1, ej2)
    branches.append(Branch(0, 4, "junction", e_j=ejs))           # 6
    branches.append(Branch(0, 4, "junction", e_j=ejs))           # 7
    branches.append(Branch(3, 4, "capacitor", c=c_osc))          # 8
    branches.append(Branch(3, 4, "inductor", l_inv=1.0 / l_osc)) # 9
    loops = [
        _qubit_loop(),
        [(6, -1), (7, 1)],
        [(0, -1), (6, 1), (9, -1), (5, -1)],
    ]
    return CircuitGraph(5, branches, loops, [phi_q, phi_s, phi_qs])


OSC_M_INV = 0.5 * np.array([
    [1, -1, 1, -1, 0],
    [1, -1, -1, 1, 0],
    [1, 1, -1, -1, 0],
    [1, 1, 1, 1, 0],
    [0, 0, 0, -2, 2],
], dtype=float)
OSC_MODES = ZERO_PI_MODES + ["osc"]


def zero_pi_phi_squids_graph(c1, c2, cj1, cj2, l1, l2, ejs,
                             phi_q: float = 0.0, phi_s: float = 0.0) -> CircuitGraph:
    """Both qubit junctions replaced by symmetric two-junction tunable
    elements (threaded by the same flux phi_s), enabling a tunable
    theta-phi coupling."""
    branches = [
        Branch(0, 1, "junction", e_j=ejs, c=cj1 / 2),
        Branch(0, 1, "junction", e_j=ejs, c=cj1 / 2),
        Branch(2, 3, "junction", e_j=ejs, c=cj2 / 2),
        Branch(2, 3, "junction", e_j=ejs, c=cj2 / 2),
        Branch(0, 3, "capacitor", c=c1),
        Branch(1, 2, "capacitor", c=c2),
        Branch(0, 2, "inductor", l_inv=1.0 / l1),
        Branch(1, 3, "inductor", l_inv=1.0 / l2),
    ]
    loops = [
        [(0, 1), (2, -1), (6, -1), (7, 1)],      # qubit loop between the shunts
        [(0, -1), (1, 1)],                       # left shunt loop
        [(2, 1), (3, -1)],                       # right shunt loop
    ]
    return CircuitGraph(4, branches, loops, [phi_q, phi_s, phi_s])


SERIES_M_INV = 0.5 * np.array([
    [1, -1, 1, -1, 0, 0, 0],
    [1, -1, -1, 1, 0, 0, 0],
    [0, 0, 0, 1, -1, 1, -1],
    [0, 0, 0, 1, -1, -1, 1],
    [1, 1, -1, 0, 1, -1, -1],
    [1, 1, -1, -2, -1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1],
], dtype=float)
SERIES_MODES = ["theta_a", "phi_a", "theta_b", "phi_b",
                "zeta_plus", "zeta_minus", "sigma"]


def series_two_qubit_graph(ca, cb, cja, cjb, la, lb, eja, ejb, ejs,
                           phi_a: float = 0.0, phi_b: float = 0.0,
                           phi_s: float = 0.0,
                           phi_qs: Optional[float] = None) -> CircuitGraph:
    """Two qubit cells in series (sharing node 3) shunted by a tunable
    element from node 0 to node 6; the shunt couples theta_a+theta_b+zeta_+."""
    if phi_qs is None:
        phi_qs = -0.5 * (phi_a + phi_b + phi_s)
    branches = _zero_pi_branches(ca, ca, cja, cja, la, la, eja, eja)
    branches += _zero_pi_branches(cb, cb, cjb, cjb, lb, lb, ejb, ejb,
                                  node_offset=3)
    branches.append(Branch(0, 6, "junction", e_j=ejs))   # 12
    branches.append(Branch(0, 6, "junction", e_j=ejs))   # 13
    loops = [
        _qubit_loop(0),
        _qubit_loop(6),
        [(12, -1), (13, 1)],
        [(0, -1), (12, 1), (11, -1), (6, -1), (5, -1)],
    ]
    return CircuitGraph(7, branches, loops, [phi_a, phi_b, phi_s, phi_qs])


def quantize_named(topology: str, params: dict) -> QuantizedModel:
    """Quantize one of the named circuit families.

    params carries the element values; symmetric defaults are filled in for
    any *_2 value left unset (e.g. c2 defaults to c1).
    """
    p = dict(params)

    def sym(key):
        p.setdefault(key + "2", p[key + "1"])

    if topology == "zero_pi":
        for k in ("c", "cj", "l", "ej"):
            sym(k)
        g = zero_pi_graph(p["c1"], p["c2"], p["cj1"], p["cj2"], p["l1"], p["l2"],
                          p["ej1"], p["ej2"], p.get("phi_q", 0.0))
        model = quantize(g, QUADRUPOLE_M_INV, ZERO_PI_MODES)
    elif topology == "zero_pi_zeta_squid":
        for k in ("c", "cj", "l", "ej"):
            sym(k)
        g = zero_pi_zeta_squid_graph(p["c1"], p["c2"], p["cj1"], p["cj2"],
                                     p["l1"], p["l2"], p["ej1"], p["ej2"],
                                     p["ejs"], p.get("phi_q", 0.0),
                                     p.get("phi_s", 0.0), p.get("phi_qs"))
        model = quantize(g, QUADRUPOLE_M_INV, ZERO_PI_MODES)
    elif topology == "zero_pi_plus_oscillator":
        for k in ("c", "cj", "l", "ej"):
            sym(k)
        g = zero_pi_plus_oscillator_graph(p["c1"], p["c2"], p["cj1"], p["cj2"],
                                          p["l1"], p["l2"], p["ej1"], p["ej2"],
                                          p["ejs"], p["c_osc"], p["l_osc"],
                                          p.get("phi_q", 0.0), p.get("phi_s", 0.0),
                                          p.get("phi_qs"))
        model = quantize(g, OSC_M_INV, OSC_MODES)
    elif topology == "zero_pi_phi_squids":
        for k in ("c", "cj", "l"):
            sym(k)
        g = zero_pi_phi_squids_graph(p["c1"], p["c2"], p["cj1"], p["cj2"],
                                     p["l1"], p["l2"], p["ejs"],
                                     p.get("phi_q", 0.0), p.get("phi_s", 0.0))
        model = quantize(g, QUADRUPOLE_M_INV, ZERO_PI_MODES)
    elif topology == "series_two_qubit":
        g = series_two_qubit_graph(p["ca"], p["cb"], p["cja"], p["cjb"],
                                   p["la"], p["lb"], p["eja"], p["ejb"],
                                   p["ejs"], p.get("phi_a", 0.0),
                                   p.get("phi_b", 0.0), p.get("phi_s", 0.0),
                                   p.get("phi_qs"))
        model = quantize(g, SERIES_M_INV, SERIES_MODES)
        r_zeta = (p["ca"] - p["cb"]) / (p["ca"] + p["cb"])
        if abs(r_zeta) > 1e-12:
            model.warnings.append(
                f"off-resonance: capacitor asymmetry r_zeta={r_zeta:.3g} couples "
                "the symmetric and antisymmetric internal modes")
    else:
        raise CircuitError(f"unknown topology {topology!r}")
    return model


# ---------------------------------------------------------------------------
# multiloop tunable element
# ---------------------------------------------------------------------------

def _pair_phasor(e_j_a: float, e_j_b: float, delta: float) -> complex:
    """Combined phasor of two junctions with relative branch phase delta."""
    return e_j_a * np.exp(0.5j * delta) + e_j_b * np.exp(-0.5j * delta)


def squid_balance_fluxes(e_js: Sequence[float]) -> tuple:
    """Static fluxes (phi_a, phi_b) equalizing the two half-element amplitudes.

    For junction energies (E1, E2 | E3[, E4]) the stronger pair is detuned by
    phi = 2 atan sqrt((1 - r^2)/(r^2 - d^2)) with r the pair-energy ratio and
    d the stronger pair's internal asymmetry; solvable only when r >= |d|.
    """
    e = list(e_js)
    if len(e) == 3:
        e = e + [0.0]
    if len(e) != 4 or min(e) < 0 or max(e) <= 0:
        raise CircuitError("need 3 or 4 nonnegative junction energies")
    e_a, e_b = e[0] + e[1], e[2] + e[3]
    d_a = (e[0] - e[1]) / e_a if e_a else 0.0
    d_b = (e[2] - e[3]) / e_b if e_b else 0.0
    swap = e_b > e_a
    if swap:
        e_a, e_b, d_a, d_b = e_b, e_a, d_b, d_a
    r = e_b / e_a
    if r < abs(d_a):
        raise CircuitError(
            f"unbalanceable junction energies: pair ratio {r:.4g} below "
            f"asymmetry |{d_a:.4g}|")
    num = max(1.0 - r * r, 0.0)
    den = r * r - d_a * d_a
    phi_strong = 2.0 * math.atan(math.sqrt(num / den)) if den > 0 else math.pi
    return (0.0, phi_strong) if swap else (phi_strong, 0.0)


def multiloop_squid_eff_ej(e_js: Sequence[float], phi_a: float, phi_t: float,
                           phi_b: float = 0.0, delta_phi: float = 0.0) -> tuple:
    """Effective Josephson energy and residual asymmetry of a two/three-loop
    tunable element at the given fluxes, with optional flux noise delta_phi
    added to the static balancing flux phi_a.

    Returns (E_J_eff at phi_t, d_eff): the element's amplitude envelope is
    E_J_total * sqrt(cos^2 + d_eff^2 sin^2) of the tuning phase, so 1/d_eff is
    the achievable dynamic range.
    """
    e = list(e_js)
    if len(e) == 3:
        e = e + [0.0]
    if len(e) != 4:
        raise CircuitError("need 3 or 4 junction energies")
    pa = _pair_phasor(e[0], e[1], phi_a + delta_phi)
    pb = _pair_phasor(e[2], e[3], phi_b)
    amp_a, amp_b = abs(pa), abs(pb)
    alpha_a, alpha_b = np.angle(pa), np.angle(pb)
    d_eff = (amp_a - amp_b) / (amp_a + amp_b)
    # relative pair angle includes the static within-pair rotations
    half = 0.5 * (phi_t + 0.5 * (phi_a + delta_phi) + 0.5 * phi_b
                  + alpha_a - alpha_b)
    e_total = amp_a + amp_b
    e_eff = e_total * math.sqrt(math.cos(half) ** 2
                                + d_eff ** 2 * math.sin(half) ** 2)
    return float(e_eff), float(d_eff)


def multiloop_branch_phases(e_js: Sequence[float], phi_a: float, phi_t: float,
                            phi_b: float = 0.0) -> np.ndarray:
    """Irrotational-gauge branch phases u_j of the parallel junctions, so the
    total potential is -sum_j E_j cos(phi - u_j): the oracle route for the
    effective-energy formulas (|sum E_j e^{i u_j}| must equal E_J_eff)."""
    e = list(e_js)
    if len(e) == 3:
        e = e + [0.0]
    branches = [Branch(0, 1, "junction", e_j=ej, c=ej) for ej in e]
    loops = [[(0, 1), (1, -1)], [(1, 1), (2, -1)], [(2, 1), (3, -1)]]
    graph = CircuitGraph(2, branches, loops, [phi_a, phi_t, phi_b])
    b = irrotational_gauge(graph)
    return b @ np.array([phi_a, phi_t, phi_b])


# ---------------------------------------------------------------------------
# coupler-capacitance arithmetic
# ---------------------------------------------------------------------------

def dressed_charging(c_qubit: float, c_phi: float, c_int: float,
                     omega_p: Optional[float] = None) -> dict:
    """Dressed charging energies of a capacitively-shunted coupler between a
    qubit island (c_qubit) and an oscillator (c_phi), plus the peak Josephson
    energy a plasma-frequency budget allows (when omega_p is given)."""
    if min(c_qubit, c_phi) <= 0 or c_int < 0:
        raise CircuitError("capacitances must be positive (c_int >= 0)")
    c_tilde = c_qubit * c_phi + c_qubit * c_int + c_phi * c_int
    out = {
        "e_c_qubit": E_SQ * (c_phi + c_int) / (2.0 * c_tilde),
        "e_c_phi": E_SQ * (c_qubit + c_int) / (2.0 * c_tilde),
        "e_c_cross": E_SQ * c_int / (2.0 * c_tilde),
    }
    if omega_p is not None:
        if c_int <= 0:
            raise CircuitError("plasma budget needs a positive coupler capacitance")
        e_c_int = E_SQ / (2.0 * c_int)
        out["e_j_max"] = omega_p ** 2 / (8.0 * e_c_int)
        out["e_j_max_over_e_c_phi"] = out["e_j_max"] / out["e_c_phi"]
    return out
