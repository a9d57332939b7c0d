"""Fiber attractor approximation by pullback integration, Hausdorff
semi-distance between point clouds, and the truncation convergence study."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist
from scipy.stats import qmc

from .dynamics import (
    LatticeParams,
    Nonlinearity,
    integrate_final,
    make_finite_rhs,
    make_reference_rhs,
    max_stable_step,
)
from .errors import (
    CapacityError,
    DivergenceError,
    EmptyCloudError,
    ParameterError,
    StrictModeRequiredError,
)
from .estimates import (
    asymptotic_radius_sq,
    burn_in_time,
    calibrate_tail_index,
    gronwall_bound,
    tail_mass,
)
from .forcing import QuasiPeriodicForcing
from .operators import project_forcing, wrap_forcing
from .state import pad_to_width

POINT_CAP = 512  # keeps the brute-force cloud comparisons trivially cheap
RADIUS_SLACK = 1.05


@dataclass(frozen=True)
class AttractorCloud:
    """Finite point-cloud sample of one fiber attractor.

    ``states`` rows live over logical sites ``-half_width .. half_width``;
    all rows were produced by pullback integrations ending on the stated
    fiber (base forcing shifted by ``fiber_shift``).
    """

    label: str
    order: int | None
    fiber_shift: float
    half_width: int
    states: np.ndarray
    burn_in: float
    start_offsets: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        states = np.asarray(self.states, dtype=float)
        if states.ndim != 2 or states.shape[0] == 0:
            raise EmptyCloudError("attractor cloud must hold at least one state row")
        if states.shape[1] != 2 * self.half_width + 1:
            raise ParameterError("cloud width does not match its half_width")
        if not np.all(np.isfinite(states)):
            raise ValueError("cloud contains non-finite states")
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return self.states.shape[0]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    def diameter(self) -> float:
        return float(cdist(self.states, self.states).max())

    def as_width(self, half_width: int) -> np.ndarray:
        return pad_to_width(self.states, self.half_width, half_width)


def _low_discrepancy_ball(count: int, dim: int, radius: float, seed: int) -> np.ndarray:
    """Deterministic low-discrepancy points inside the ball of given radius
    (cube inscribed in the ball, so norms never exceed ``radius``)."""
    if count < 1:
        raise ParameterError("need at least one initial condition")
    cube = qmc.Halton(d=dim, scramble=True, seed=seed).random(count)
    return (2.0 * cube - 1.0) * (radius / math.sqrt(dim))


def _dominant_period(f: QuasiPeriodicForcing) -> float:
    amps, freqs, _ = f.mode_table(f.effective_support(1e-12))
    if amps.size == 0 or not np.any(amps != 0.0):
        return 1.0
    w = abs(float(freqs[np.argmax(np.abs(amps))]))
    return 2.0 * math.pi / w if w > 0.0 else 1.0


def sample_attractor(
    f: QuasiPeriodicForcing,
    params: LatticeParams,
    nonlin: Nonlinearity,
    *,
    eps: float,
    ic_count: int,
    sample_count: int,
    seed: int,
    kind: str = "finite",
    boundary: str = "wrap",
    n_work: int | None = None,
    fiber_shift: float = 0.0,
    burn_in: float | None = None,
    window: float | None = None,
    step: float | None = None,
    ic_radius: float | None = None,
    boundary_floor: float = 1e-8,
    threads: int = 1,
) -> AttractorCloud:
    """Pullback sample of the fiber attractor at ``shift(fiber_shift, f)``.

    Each of ``sample_count`` start offsets launches the full set of
    ``ic_count`` initial conditions from the absorbing ball at time
    ``-(burn_in + offset)`` and integrates them to time 0, so every collected
    state sits on the requested fiber.  ``kind`` selects the wrapped finite
    system of order ``params.n`` (forcing via ``boundary``: ``wrap`` or
    ``project``) or the padded ``reference`` system of half-width ``n_work``.
    """
    if ic_count * sample_count > POINT_CAP:
        raise ParameterError(
            f"requested {ic_count * sample_count} points exceeds cap {POINT_CAP}"
        )
    forcing_bound = f.uniform_bound()
    radius = math.sqrt(asymptotic_radius_sq(params.lam, nonlin.alpha, forcing_bound))
    if ic_radius is None:
        ic_radius = radius
    ball_sq = max(ic_radius, radius) ** 2
    if burn_in is None:
        if nonlin.mode != "strict":
            raise StrictModeRequiredError(
                "default burn-in needs a strict margin; pass burn_in explicitly"
            )
        burn_in = burn_in_time(nonlin.alpha, ball_sq, eps) if ball_sq > 0.0 else 0.0
    if window is None:
        window = _dominant_period(f)

    fiber = f.shift(fiber_shift)
    if kind == "finite":
        if boundary == "wrap":
            g = wrap_forcing(fiber, params.n)
        elif boundary == "project":
            g = project_forcing(fiber, params.n)
        else:
            raise ParameterError(f"boundary must be 'wrap' or 'project', got {boundary!r}")
        rhs = make_finite_rhs(params, nonlin, g)
        half_width = params.n
        ic_half = params.n
        label = f"n={params.n}"
    elif kind == "reference":
        if n_work is None:
            raise ParameterError("reference sampling needs n_work")
        if n_work < params.n:
            raise CapacityError(f"n_work={n_work} below truncation order {params.n}")
        rhs = make_reference_rhs(params, nonlin, fiber, n_work, boundary_floor)
        half_width = n_work
        # keep initial mass away from the monitored edges
        ic_half = max(1, n_work // 2)
        label = f"reference(n_work={n_work})"
    else:
        raise ParameterError(f"kind must be 'finite' or 'reference', got {kind!r}")

    rho = 1.5 * max(ic_radius, radius) + 0.5
    if step is None:
        step = max_stable_step(params, nonlin, rho)

    ics = _low_discrepancy_ball(ic_count, 2 * ic_half + 1, ic_radius, seed)
    ics = pad_to_width(ics, ic_half, half_width)
    offsets = window * np.arange(sample_count) / sample_count

    def _run(offset: float) -> np.ndarray:
        t0 = -(burn_in + offset)
        try:
            return integrate_final(rhs, ics, t0, 0.0, step)
        except DivergenceError as exc:
            raise DivergenceError(f"{exc} [start offset {offset:.6g}]") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            batches = list(pool.map(_run, offsets))
    else:
        batches = [_run(off) for off in offsets]
    states = np.vstack(batches)

    bound = RADIUS_SLACK * gronwall_bound(
        params.lam, nonlin.alpha, forcing_bound, ic_radius, burn_in
    )
    worst = float(np.linalg.norm(states, axis=1).max())
    if worst > bound and worst > 1e-12:
        raise ValueError(
            f"cloud point norm {worst:.6g} exceeds absorbing bound {bound:.6g}; "
            "the run has not settled (step too large or burn-in too short)"
        )
    return AttractorCloud(
        label=label,
        order=params.n if kind == "finite" else None,
        fiber_shift=fiber_shift,
        half_width=half_width,
        states=states,
        burn_in=burn_in,
        start_offsets=offsets,
        seed=seed,
    )


def hausdorff_semidistance(a, b) -> float:
    """One-sided Hausdorff distance ``max_{x in a} min_{y in b} ||x - y||``.

    Clouds are re-embedded into a common width first; plain point matrices
    of equal width are accepted directly.  Brute force over all pairs.
    """
    if isinstance(a, AttractorCloud) and isinstance(b, AttractorCloud):
        width = max(a.half_width, b.half_width)
        pa, pb = a.as_width(width), b.as_width(width)
    else:
        pa = np.atleast_2d(np.asarray(a, dtype=float))
        pb = np.atleast_2d(np.asarray(b, dtype=float))
        if pa.shape[1] != pb.shape[1]:
            raise ParameterError("point sets must share one width")
    if pa.shape[0] == 0 or pb.shape[0] == 0:
        raise EmptyCloudError("semi-distance needs nonempty point sets")
    return float(cdist(pa, pb).min(axis=1).max())


def invariance_defect(
    cloud: AttractorCloud,
    shifted_cloud: AttractorCloud,
    system_forcing: QuasiPeriodicForcing,
    params: LatticeParams,
    nonlin: Nonlinearity,
    tau: float,
    step: float,
) -> float:
    """How far the time-``tau`` image of a sampled fiber lands from the
    sampled fiber at the shifted driver; small for a well-resolved cloud."""
    rhs = make_finite_rhs(params, nonlin, system_forcing)
    images = integrate_final(rhs, cloud.states, 0.0, tau, step)
    return hausdorff_semidistance(images, shifted_cloud.as_width(cloud.half_width))


@dataclass(frozen=True)
class ConvergenceRow:
    order: int
    beta_to_ref: float
    beta_from_ref: float
    runtime_s: float
    cloud_size: int
    ref_size: int


@dataclass(frozen=True)
class ConvergenceReport:
    """Distances from finite-order attractor clouds to the reference cloud."""

    rows: tuple[ConvergenceRow, ...]
    reference_label: str
    threshold: float | None

    @property
    def betas(self) -> list[float]:
        return [row.beta_to_ref for row in self.rows]

    @property
    def strictly_decreasing(self) -> bool:
        betas = self.betas
        return all(b1 > b2 for b1, b2 in zip(betas, betas[1:]))

    @property
    def nonincreasing_within_noise(self) -> bool:
        betas = self.betas
        return all(b2 <= 1.1 * b1 for b1, b2 in zip(betas, betas[1:]))

    @property
    def final_beta(self) -> float:
        return self.rows[-1].beta_to_ref

    @property
    def passed(self) -> bool:
        if self.threshold is None:
            return True
        return self.final_beta < self.threshold


def convergence_study(
    f: QuasiPeriodicForcing,
    nu: float,
    lam: float,
    nonlin: Nonlinearity,
    n_list: tuple[int, ...],
    n_ref: int,
    *,
    eps: float,
    ic_count: int,
    sample_count: int,
    seed: int,
    boundary: str = "wrap",
    threshold: float | None = None,
    burn_in: float | None = None,
    window: float | None = None,
    step: float | None = None,
    boundary_floor: float = 1e-8,
    threads: int = 1,
) -> ConvergenceReport:
    """Sample each finite-order attractor and the padded reference proxy,
    then measure the one-sided distances between them.

    The reference width must dominate every requested order; the sampling
    configuration (seed, burn-in, offsets, step) is shared across systems so
    the clouds are directly comparable.
    """
    if not n_list:
        raise ParameterError("n_list must be nonempty")
    if n_ref < max(n_list):
        raise ParameterError(f"n_ref = {n_ref} must be >= max(n_list) = {max(n_list)}")
    common = dict(
        eps=eps,
        ic_count=ic_count,
        sample_count=sample_count,
        seed=seed,
        burn_in=burn_in,
        window=window,
        step=step,
        threads=threads,
    )
    ref_params = LatticeParams(nu=nu, lam=lam, n=n_ref)
    ref_cloud = sample_attractor(
        f, ref_params, nonlin,
        kind="reference", n_work=n_ref, boundary_floor=boundary_floor,
        **common,
    )
    rows = []
    for n in n_list:
        started = time.perf_counter()
        cloud = sample_attractor(
            f, LatticeParams(nu=nu, lam=lam, n=n), nonlin,
            kind="finite", boundary=boundary,
            **common,
        )
        rows.append(
            ConvergenceRow(
                order=n,
                beta_to_ref=hausdorff_semidistance(cloud, ref_cloud),
                beta_from_ref=hausdorff_semidistance(ref_cloud, cloud),
                runtime_s=time.perf_counter() - started,
                cloud_size=len(cloud),
                ref_size=len(ref_cloud),
            )
        )
    return ConvergenceReport(
        rows=tuple(rows),
        reference_label=ref_cloud.label,
        threshold=threshold,
    )


@dataclass(frozen=True)
class TailCertificateRow:
    eps: float
    k: int
    worst_tail: float
    margin: float


@dataclass(frozen=True)
class TailCertificateReport:
    """One calibrated cutoff index per tolerance, checked against every
    point of every supplied cloud (and therefore against their union)."""

    rows: tuple[TailCertificateRow, ...]
    ball_norm_sq: float
    points_checked: int

    @property
    def ok(self) -> bool:
        return all(row.margin >= 0.0 for row in self.rows)


def tail_certificate(
    clouds,
    eps_list,
    f: QuasiPeriodicForcing,
    nu: float,
    lam: float,
    alpha: float,
) -> TailCertificateReport:
    """Calibrate ``k(eps)`` from the forcing decay certificate and verify
    ``tail_mass(w, k(eps)) <= eps`` for every sampled point.

    The same ``k(eps)`` is used for every cloud regardless of its truncation
    order; the report's margin is the worst slack observed across the union.
    """
    if isinstance(clouds, AttractorCloud):
        clouds = [clouds]
    clouds = list(clouds)
    if not clouds:
        raise EmptyCloudError("tail certificate needs at least one cloud")
    ball_sq = asymptotic_radius_sq(lam, alpha, f.uniform_bound()) * RADIUS_SLACK ** 2
    rows = []
    total = sum(len(c) for c in clouds)
    for eps in eps_list:
        k = calibrate_tail_index(nu, alpha, ball_sq, f.tail_sup_bound, eps)
        worst = 0.0
        for cloud in clouds:
            for point in cloud.states:
                worst = max(worst, tail_mass(point, k))
        rows.append(
            TailCertificateRow(eps=eps, k=k, worst_tail=worst, margin=eps - worst)
        )
    return TailCertificateReport(
        rows=tuple(rows), ball_norm_sq=ball_sq, points_checked=total
    )
