"""De Giorgi level-set machinery: parameter calculus, truncation schedules,
level-set energies over stored runs, and the empirical energy recursion.

Levels are dyadic, C_k = M (1 - 2^{-k}), with time gates T_k = (t/2)(1 - 2^{-k});
the level-k energy combines the sup of the truncated L^p mass over the sampled
window with the time-integrated weighted dissipation of the truncation.  The
recursion constants kappa_k are the empirical counterparts of the
super-geometric bound E_k <~ E_{k-1}^{1+beta1} / (t M^{1+gamma}).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .functionals import weighted_grad_energy
from .grid import Grid, integrate
from .kernel import KernelTable, compute_A

__all__ = [
    "DeGiorgiParams",
    "LevelSchedule",
    "EnergySeries",
    "parameters",
    "default_energy_constant",
    "schedule",
    "truncate",
    "energies",
    "recursion_report",
    "fit_supergeometric",
]


@dataclass(frozen=True)
class DeGiorgiParams:
    d: int
    p: float
    m: float
    gamma: float
    beta1: float
    eps: float
    m_min: float
    valid: bool
    violation: str = ""


def parameters(d: int, p: float, m: float) -> DeGiorgiParams:
    """Level-set exponents gamma, beta1 and the decay correction eps.

    gamma = -1 + (2/d) p - 3 (d-2)(p-1)/m
    beta1 = 2/d - 3 (d-2)/m
    eps   = (1 - 2/d) / (1 + gamma)
    valid needs p > d/2 and m > (3d(d-2)/2) max{1, (p-1)/(p-d/2)}.
    """
    if d < 3:
        raise ValueError("d must be >= 3")
    gamma = -1.0 + (2.0 / d) * p - 3.0 * (d - 2) * (p - 1) / m
    beta1 = 2.0 / d - 3.0 * (d - 2) / m
    m_min = (3.0 * d * (d - 2) / 2.0) * max(1.0, (p - 1) / (p - d / 2.0)) \
        if p > d / 2.0 else float("inf")
    eps = (1.0 - 2.0 / d) / (1.0 + gamma) if gamma > -1 else float("nan")
    violation = ""
    if not p > d / 2.0:
        violation = f"requires p > d/2 = {d / 2.0}"
    elif not m > m_min:
        violation = f"requires m > {m_min}"
    return DeGiorgiParams(d=d, p=p, m=m, gamma=gamma, beta1=beta1, eps=eps,
                          m_min=m_min, valid=not violation, violation=violation)


def default_energy_constant(p: float) -> float:
    """C(p) = 4(p-1)/p: the constant the L^p testing computation produces."""
    return 4.0 * (p - 1) / p


@dataclass(frozen=True)
class LevelSchedule:
    M: float
    t: float
    K: int
    C: np.ndarray   # levels C_0..C_K
    T: np.ndarray   # time gates T_0..T_K


def schedule(M: float, t: float, K: int) -> LevelSchedule:
    """Dyadic levels C_k = M(1 - 2^{-k}) and gates T_k = (t/2)(1 - 2^{-k})."""
    if M <= 0 or t <= 0:
        raise ValueError("M and t must be positive")
    if K < 1:
        raise ValueError("K must be >= 1")
    k = np.arange(K + 1)
    fac = 1.0 - 0.5**k
    return LevelSchedule(M=M, t=t, K=K, C=M * fac, T=(t / 2.0) * fac)


def truncate(u: np.ndarray, c: float) -> np.ndarray:
    """Pointwise (u - c)_+ = max(u - c, 0)."""
    return np.maximum(u - c, 0.0)


@dataclass
class EnergySeries:
    schedule: LevelSchedule
    p: float
    Cp: float
    E: np.ndarray                 # E_0..E_K, <x>^(-d) weighted dissipation
    E_aweighted: np.ndarray | None = None   # same with A[u]-weighted dissipation
    levels_active: np.ndarray = field(default_factory=lambda: np.array([]))

    def to_csv(self, path, kappa=None) -> None:
        lines = ["k,C_k,T_k,E_k,kappa_k"]
        for k in range(len(self.E)):
            kap = "" if kappa is None or k == 0 or not np.isfinite(kappa[k]) \
                else format(kappa[k], ".17g")
            lines.append(",".join([
                str(k),
                format(self.schedule.C[k], ".17g"),
                format(self.schedule.T[k], ".17g"),
                format(self.E[k], ".17g"),
                kap,
            ]))
        with open(path, "w") as f:
            f.write("\n".join(lines) + "\n")


def _dissipation_aweighted(grid, v_half, A):
    from .grid import gradient
    g = gradient(grid, v_half)
    a11, a22, a33, a12, a13, a23 = A
    quad = (a11 * g[0] ** 2 + a22 * g[1] ** 2 + a33 * g[2] ** 2
            + 2 * (a12 * g[0] * g[1] + a13 * g[0] * g[2] + a23 * g[1] * g[2]))
    return float(np.sum(quad) * grid.cell_volume)


def energies(snapshots, sched: LevelSchedule, p: float, grid: Grid,
             Cp: float | None = None, table: KernelTable | None = None,
             min_samples: int = 16) -> EnergySeries:
    """Level energies from stored (time, field) snapshots.

    E_k (k >= 1) = sup over sampled tau in (T_{k+1}, t) of the truncated L^p
    mass, plus Cp times the rectangle-rule time integral over (T_{k+1}, t) of
    the <x>^(-d)-weighted Dirichlet energy of (u - C_k)_+^{p/2}.  E_0 uses the
    untruncated field over (t/4, t).  The discrete sup is a lower bound on
    the continuous one.

    If ``table`` is given, an A[u]-weighted dissipation variant is computed
    alongside (the energy appears in the source with both weights).
    """
    if Cp is None:
        Cp = default_energy_constant(p)
    t_end = sched.t
    times = np.array([s[0] for s in snapshots])
    in_win = (times > t_end / 4.0) & (times <= t_end + 1e-12)
    if int(np.sum(in_win)) < min_samples:
        raise ValueError(f"need >= {min_samples} snapshots in (t/4, t], "
                         f"got {int(np.sum(in_win))}")

    A_cache = {}

    def a_of(idx):
        if idx not in A_cache:
            A_cache[idx] = compute_A(snapshots[idx][1], table)
        return A_cache[idx]

    K = sched.K
    E = np.zeros(K + 1)
    E_aw = np.zeros(K + 1) if table is not None else None
    # windows: level 0 uses (t/4, t); level k >= 1 uses (T_{k+1}, t) with
    # T_{K+1} extrapolated dyadically
    gates = list(sched.T) + [(t_end / 2.0) * (1.0 - 0.5 ** (K + 1))]
    for k in range(K + 1):
        lo = t_end / 4.0 if k == 0 else gates[k + 1]
        level = 0.0 if k == 0 else sched.C[k]
        sup_mass = 0.0
        diss_int = 0.0
        diss_int_aw = 0.0
        prev_tau = lo
        for idx, (tau, field_u) in enumerate(snapshots):
            if tau <= lo or tau > t_end + 1e-12:
                continue
            v = truncate(field_u, level)
            sup_mass = max(sup_mass, integrate(grid, v**p))
            v_half = v ** (p / 2.0)
            w = tau - prev_tau
            diss_int += w * weighted_grad_energy(grid, v_half, -float(grid.d))
            if table is not None:
                diss_int_aw += w * _dissipation_aweighted(grid, v_half, a_of(idx))
            prev_tau = tau
        E[k] = sup_mass + Cp * diss_int
        if E_aw is not None:
            E_aw[k] = sup_mass + Cp * diss_int_aw
    active = np.flatnonzero(E > 0)
    return EnergySeries(schedule=sched, p=p, Cp=Cp, E=E, E_aweighted=E_aw,
                        levels_active=active)


def recursion_report(series: EnergySeries, params: DeGiorgiParams,
                     M: float, t: float) -> dict:
    """Per-level implied constants kappa_k = E_k t M^{1+gamma} / E_{k-1}^{1+beta1}.

    Levels with E_{k-1} = 0 are skipped.  Also reports the fitted
    super-geometric growth factor of log E_k (ideal value 1 + beta1).
    """
    if not params.valid:
        raise ValueError(f"invalid De Giorgi parameters: {params.violation}")
    E = series.E
    kappa = np.full(len(E), np.nan)
    for k in range(1, len(E)):
        if E[k - 1] > 0 and E[k] > 0:
            kappa[k] = E[k] * t * M ** (1.0 + params.gamma) \
                / E[k - 1] ** (1.0 + params.beta1)
    finite = kappa[np.isfinite(kappa)]
    return {
        "kappa": kappa,
        "max_kappa": float(np.max(finite)) if finite.size else float("nan"),
        "fit_growth": fit_supergeometric(E),
        "levels_used": int(finite.size),
    }


def fit_supergeometric(E: np.ndarray) -> float:
    """Growth factor b of a super-geometric series E_k ~ A r^{b^k}.

    The log-energy increments satisfy log|Delta log E_k| = k log b + const,
    so b comes out of a linear fit.  Returns nan when fewer than two usable
    increments exist.
    """
    E = np.asarray(E, dtype=float)
    pos = E > 0
    if np.sum(pos) < 3:
        return float("nan")
    ell = np.log(E[pos])
    dl = np.abs(np.diff(ell))
    ks = np.arange(len(dl), dtype=float)
    usable = dl > 0
    if np.sum(usable) < 2:
        return float("nan")
    slope = np.polyfit(ks[usable], np.log(dl[usable]), 1)[0]
    return float(np.exp(slope))
