"""Normalized energy witnesses and the robustness lower bound they certify.

The witness W = (H - E_sep I)/A with A = max(E_max - E_sep, E_sep - E_min)
satisfies W <= I because expectation values of H fill exactly
[E_min, E_max]; for any state with mean energy below E_sep this yields
R_g >= (E_sep - <H>)/A.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .hamiltonians import XXXParams, build_xxx
from .operators import HermitianOperator, eig, expectation, identity
from .sep_energy import (
    Partition,
    SepEnergyReport,
    closed_form_ansatz_xxx,
    esep_closed_form_xxx,
    esep_reference,
    esep_seesaw,
)
from .thermal import energy_curve, ground_state

DEGENERATE_NORMALIZER = 1e-12


@dataclass(frozen=True)
class WitnessSpec:
    """All the numbers that define the normalized energy witness.

    ``conservative_esep`` is set when the supplied separability energy lies
    below the ground energy, which makes the witness vacuous but still valid.
    """

    hamiltonian: HermitianOperator
    esep: float
    e_min: float
    e_max: float
    normalizer_a: float
    conservative_esep: bool = False

    def normalized_witness(self) -> HermitianOperator:
        """(H - esep I)/A; eigenvalues are bounded above by 1."""
        ident = identity(self.hamiltonian.shape)
        return (self.hamiltonian - self.esep * ident) * (1.0 / self.normalizer_a)

    def unnormalized_witness(self) -> HermitianOperator:
        return self.hamiltonian - self.esep * identity(self.hamiltonian.shape)

    @property
    def entanglement_gap(self) -> float:
        return self.esep - self.e_min


@dataclass(frozen=True)
class BoundReport:
    """The robustness lower bound at one mean energy (unclipped; may be negative)."""

    mean_energy: float
    esep: float
    bound: float
    detected: bool
    entanglement_gap: float


def make_witness(h: HermitianOperator, esep_report: SepEnergyReport) -> WitnessSpec:
    """Build the normalized witness for ``h`` from a separability-energy report."""
    dec = eig(h)
    esep = float(esep_report.esep)
    a = max(dec.e_max - esep, esep - dec.e_min)
    if a <= DEGENERATE_NORMALIZER:
        raise ValueError("constant Hamiltonian: the energy witness does not exist")
    return WitnessSpec(
        hamiltonian=h,
        esep=esep,
        e_min=dec.e_min,
        e_max=dec.e_max,
        normalizer_a=a,
        conservative_esep=esep < dec.e_min - 1e-9,
    )


def robustness_lower_bound(w: WitnessSpec, mean_energy: float) -> BoundReport:
    """Evaluate (esep - <H>)/A for a measured or computed mean energy."""
    m = float(mean_energy)
    if m < w.e_min - 1e-6 or m > w.e_max + 1e-6:
        raise ValueError(
            f"mean energy {m} lies outside the spectral range [{w.e_min}, {w.e_max}]"
        )
    bound = (w.esep - m) / w.normalizer_a
    return BoundReport(
        mean_energy=m,
        esep=w.esep,
        bound=bound,
        detected=bound > 0.0,
        entanglement_gap=w.entanglement_gap,
    )


@dataclass(frozen=True)
class EsepPolicy:
    """How to obtain E_sep for each Hamiltonian in a sweep.

    ``kind`` is one of ``exact`` (seesaw), ``closed-form`` (two-site
    Heisenberg analytic value) or ``fixed`` (a user-supplied constant,
    carried in ``value``).
    """

    kind: str
    value: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("exact", "closed-form", "fixed"):
            raise ValueError(f"unknown esep policy {self.kind!r}")
        if self.kind == "fixed" and self.value is None:
            raise ValueError("fixed policy needs a value")

    @staticmethod
    def parse(text: str) -> "EsepPolicy":
        t = text.strip()
        if t.startswith("fixed:"):
            return EsepPolicy("fixed", float(t.split(":", 1)[1]))
        return EsepPolicy(t)

    def describe(self) -> str:
        return f"fixed:{self.value}" if self.kind == "fixed" else self.kind


def resolve_esep(
    policy: EsepPolicy,
    h: HermitianOperator,
    params: Optional[XXXParams] = None,
    partition: Optional[Partition] = None,
    restarts: int = 32,
    seed: int = 0,
) -> SepEnergyReport:
    """Produce a SepEnergyReport for ``h`` according to the policy."""
    if policy.kind == "fixed":
        return esep_reference(policy.value)
    if policy.kind == "closed-form":
        if params is None:
            raise ValueError("closed-form policy needs Heisenberg parameters")
        return SepEnergyReport(
            esep=esep_closed_form_xxx(params),
            minimizer=closed_form_ansatz_xxx(params),
            restarts_used=0,
            converged=True,
            source="closed-form",
        )
    part = partition if partition is not None else Partition.singletons(h.shape.n_sites)
    return esep_seesaw(h, part, restarts=restarts, seed=seed)


@dataclass(frozen=True)
class SweepCell:
    """One (B, T) cell of a bound sweep; ``bound_raw`` is unclipped."""

    b: float
    t: float
    mean_energy: float
    esep: float
    normalizer_a: float
    bound_raw: float
    detected: bool
    entanglement_gap: float


def sweep_single_hamiltonian(
    h: HermitianOperator,
    esep_report: SepEnergyReport,
    t_grid: Sequence[float],
    b_value: float = 0.0,
) -> list[SweepCell]:
    """Bound reports along a temperature grid for one fixed Hamiltonian.

    A temperature of exactly 0 is served by the ground state.
    """
    w = make_witness(h, esep_report)
    cells = []
    positive = [t for t in t_grid if t > 0.0]
    means: dict[float, float] = {}
    if positive:
        for t, pt in zip(positive, energy_curve(h, positive)):
            means[t] = pt.mean_energy
    for t in t_grid:
        if t < 0.0:
            raise ValueError("temperatures must be >= 0")
        mean = means[t] if t > 0.0 else expectation(h, ground_state(h))
        rep = robustness_lower_bound(w, mean)
        cells.append(
            SweepCell(
                b=float(b_value),
                t=float(t),
                mean_energy=rep.mean_energy,
                esep=rep.esep,
                normalizer_a=w.normalizer_a,
                bound_raw=rep.bound,
                detected=rep.detected,
                entanglement_gap=rep.entanglement_gap,
            )
        )
    return cells


def bound_sweep(
    params: XXXParams,
    policy: EsepPolicy,
    t_grid: Sequence[float],
    b_grid: Sequence[float],
    restarts: int = 32,
    seed: int = 0,
) -> list[SweepCell]:
    """Robustness lower bounds on a (B, T) grid of thermal Heisenberg states.

    For each field value the Hamiltonian is rebuilt, E_sep resolved per the
    policy, and every temperature evaluated; rows are ordered B-major then T.
    """
    t_list = [float(t) for t in t_grid]
    b_list = [float(b) for b in b_grid]
    if not t_list or not b_list:
        raise ValueError("grids must be nonempty")
    if any(y < x for x, y in zip(t_list, t_list[1:])) or any(
        y < x for x, y in zip(b_list, b_list[1:])
    ):
        raise ValueError("grids must be ascending")
    cells = []
    for b in b_list:
        p = XXXParams(params.coupling_j, b, params.n_sites, params.boundary)
        h = build_xxx(p)
        report = resolve_esep(policy, h, params=p, restarts=restarts, seed=seed)
        cells.extend(sweep_single_hamiltonian(h, report, t_list, b_value=b))
    return cells
