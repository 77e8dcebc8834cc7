"""Randomized rank estimation over the blackboard.

Each repetition draws g ~ N(0, I_n) from the public coin, forms y = f(A) g
and records ||y||^2; the estimate is the mean over T repetitions. For the
composite filter f = q2 o q1, q1(A) is applied 2p + 1 times through the
distributed Clenshaw matvec and combined either by Horner in M = q1(A) or by
accumulating the powers M^k g. The baseline is a single Chebyshev pass.
"""

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Union

import numpy as np

from ..blackboard import Blackboard, Machine, QuantizationSpec, default_tau
from ..config import DistRankSettings
from ..exceptions import InvalidParameterError
from ..polyfilter import (
    ChebyshevExpansion,
    CompositeFilter,
    Thresholds,
    build_composite_filter,
    fit_highpass_baseline,
    unit_grid,
)
from ..utils.bit_counter import BitCounter, bits_for_count, next_power_of_two
from .base import BaseProtocol
from .cheb_matvec import clenshaw_gain, clenshaw_matvec, messages_per_application
from .coordinator import COORDINATOR, Coordinator
from .reports import EstimateReport, resolve_delta, round_estimate

ProbeScheme = Literal["horner", "powers"]
RANGE_SAFETY = 1.001
GAUSSIAN_NORM_SLACK = 8.0


@dataclass(frozen=True)
class FilterKind:
    """composite (uses p) or baseline (uses degree)"""

    kind: Literal["composite", "baseline"] = "composite"
    degree: Optional[int] = None

    @classmethod
    def composite(cls) -> "FilterKind":
        return cls("composite")

    @classmethod
    def baseline(cls, degree: Optional[int]) -> "FilterKind":
        return cls("baseline", degree)


ProbeFilter = Union[CompositeFilter, ChebyshevExpansion]


def sup_abs_on_unit(q: ChebyshevExpansion, grid_points: int = 10_001) -> float:
    """max |q| on [0, 1]: grid maximum widened by the Markov bound on q' between grid points"""
    grid = unit_grid(grid_points)
    peak = float(np.max(np.abs(q(grid))))
    spacing = 2.0 / (grid_points - 1)
    return peak * (1.0 + q.degree ** 2 * spacing)


def probe_input_gain(filt: ProbeFilter, scheme: ProbeScheme) -> float:
    """Bound on ||input to any Clenshaw pass|| / ||g||"""
    if isinstance(filt, ChebyshevExpansion):
        return 1.0
    mu = sup_abs_on_unit(filt.q1)
    c = np.abs(filt.q2_coeffs)
    top = len(c) - 1
    if scheme == "powers":
        return max(mu ** k for k in range(top))
    h = c[top]
    worst = h
    for i in range(top - 1, 0, -1):
        h = mu * h + c[i]
        worst = max(worst, h)
    return float(worst)


def declared_range(filt: ProbeFilter, scheme: ProbeScheme, n: int) -> float:
    """Power-of-two R bounding every posted entry when ||g||_2 <= sqrt(n) + 8"""
    q = filt if isinstance(filt, ChebyshevExpansion) else filt.q1
    bound = clenshaw_gain(q) * probe_input_gain(filt, scheme) * (math.sqrt(n) + GAUSSIAN_NORM_SLACK)
    return next_power_of_two(bound * RANGE_SAFETY)


def chebyshev_part(filt: ProbeFilter) -> ChebyshevExpansion:
    return filt if isinstance(filt, ChebyshevExpansion) else filt.q1


def applications(filt: ProbeFilter) -> int:
    return 1 if isinstance(filt, ChebyshevExpansion) else filt.q1_applications


def predict_randomized_bits(
    n: int,
    m: int,
    degree: int,
    applications: int,
    T: int,
    quantization: QuantizationSpec,
) -> int:
    """Closed-form ledger total; needs a declared range in fixed mode"""
    counter = BitCounter()
    if quantization.is_fixed:
        if quantization.range_bound is None:
            raise InvalidParameterError("closed-form bits need a declared range bound")
        per_message = counter.fixed_point_bits(n, quantization.range_bound, quantization.tau)
    else:
        per_message = counter.exact_bits(n)
    return T * applications * (degree + 1) * (m + 1) * per_message + bits_for_count(n)


async def apply_probe_filter(coordinator: Coordinator, filt: ProbeFilter, g: np.ndarray, scheme: ProbeScheme = "horner") -> np.ndarray:
    """y = f(A) g"""
    if isinstance(filt, ChebyshevExpansion):
        return await clenshaw_matvec(coordinator, filt, g)

    c = filt.q2_coeffs
    top = len(c) - 1
    if scheme == "horner":
        y = c[top] * g
        for i in range(top - 1, -1, -1):
            y = await clenshaw_matvec(coordinator, filt.q1, y) + c[i] * g
        return y
    if scheme == "powers":
        w = g
        y = c[0] * g
        for k in range(1, top + 1):
            w = await clenshaw_matvec(coordinator, filt.q1, w)
            y = y + c[k] * w
        return y
    raise InvalidParameterError(f"unknown probe scheme {scheme!r}")


def degree_for_p(n: int) -> int:
    """p = ceil(log2(2n))"""
    return math.ceil(math.log2(2 * n))


class RandomizedRankProtocol(BaseProtocol):
    """Gaussian-sketch estimate of the generalized rank with a polynomial filter"""

    def __init__(self, machines: Sequence[Machine], settings: Optional[DistRankSettings] = None):
        super().__init__("randomized", machines, settings)

    def build_filter(
        self,
        th: Thresholds,
        p: int,
        filter_kind: FilterKind,
        q1_degree: Optional[int] = None,
    ) -> ProbeFilter:
        if filter_kind.kind == "baseline":
            if not filter_kind.degree:
                raise InvalidParameterError("baseline filter needs a degree")
            return fit_highpass_baseline(th, filter_kind.degree, self.settings.sup_grid_points)
        return build_composite_filter(
            th,
            p,
            q1_degree=q1_degree if q1_degree is not None else self.settings.q1_degree,
            target_err=self.settings.q1_target_error,
            max_degree=self.settings.q1_max_degree,
            grid_points=self.settings.sup_grid_points,
        )

    def resolve_quantization(
        self,
        filt: ProbeFilter,
        p: int,
        quantize: str,
        tau: Optional[float],
        range_bound: Optional[float],
        dynamic_range: bool,
        scheme: ProbeScheme,
    ) -> QuantizationSpec:
        if quantize == "exact":
            return QuantizationSpec.exact()
        booster_p = 0 if isinstance(filt, ChebyshevExpansion) else p
        tau = tau or default_tau(self.m, chebyshev_part(filt).degree, self.n, booster_p)
        if dynamic_range:
            return QuantizationSpec.fixed(tau)
        return QuantizationSpec.fixed(tau, range_bound or declared_range(filt, scheme, self.n))

    async def execute(
        self,
        th: Thresholds,
        p: int,
        T: int,
        seed: int,
        filter_kind: FilterKind = FilterKind(),
        q1_degree: Optional[int] = None,
        quantize: str = "exact",
        tau: Optional[float] = None,
        range_bound: Optional[float] = None,
        dynamic_range: bool = False,
        scheme: Optional[ProbeScheme] = None,
        oracle_rank: Optional[int] = None,
        validate: bool = True,
        trace: bool = False,
        filt: Optional[ProbeFilter] = None,
        board: Optional[Blackboard] = None,
    ) -> EstimateReport:
        """One run of T repetitions. A caller-supplied board keeps its own quantization spec."""
        if T < 1:
            raise InvalidParameterError("T must be >= 1")
        scheme = scheme or self.settings.probe_scheme
        log = self.logger.bind(seed=seed, p=p, T=T, filter=filter_kind.kind)
        log.info("protocol_started")

        if validate:
            self.certify()

        filt = filt if filt is not None else self.build_filter(th, p, filter_kind, q1_degree)
        if board is None:
            spec = self.resolve_quantization(filt, p, quantize, tau, range_bound, dynamic_range, scheme)
            board = Blackboard(self.m, spec, trace=trace)
        spec = board.quantization
        self.board = board
        coin = board.public_coin(seed)
        coordinator = Coordinator(self.machines, board, self.settings.max_concurrency)

        y_sq_norms = []
        bits_per_repetition = []
        for t in range(T):
            mark = board.ledger.mark()
            g = coin.gaussian(self.n)
            y = await apply_probe_filter(coordinator, filt, g, scheme)
            y_sq_norms.append(float(y @ y))
            bits_per_repetition.append(board.ledger.bits_since(mark))
            log.debug("repetition_done", t=t, y_sq_norm=y_sq_norms[-1])

        rhat = float(np.mean(y_sq_norms))
        rhat_rounded = round_estimate(rhat, self.n)

        board.advance()
        answer_bits = bits_for_count(self.n)
        board.post_encoded(COORDINATOR, np.array([rhat_rounded], dtype=np.float64), answer_bits, label="answer")

        summary = filt.summary() if isinstance(filt, CompositeFilter) else {
            "kind": "baseline",
            "c1": th.c1,
            "c2": th.c2,
            "degree": filt.degree,
            "total_degree": filt.degree,
            "achieved_sup_error": filt.achieved_sup_error,
        }
        bits_per_entry = (
            BitCounter().bits_per_entry(spec.range_bound, spec.tau)
            if spec.is_fixed and spec.range_bound is not None else None
        )
        report = EstimateReport(
            rhat=rhat,
            rhat_rounded=rhat_rounded,
            T=T,
            y_sq_norms=y_sq_norms,
            bits_used=board.total_bits,
            bits_per_repetition=bits_per_repetition,
            answer_bits=answer_bits,
            rounds=board.broadcast_rounds,
            seed=seed,
            n=self.n,
            m=self.m,
            delta=resolve_delta(th.delta, oracle_rank, rhat_rounded),
            scheme=scheme,
            quantization={"mode": spec.mode, "tau": spec.tau, "range_bound": spec.range_bound},
            bits_per_entry=bits_per_entry,
            filter_summary=summary,
        )
        log.info("protocol_finished", rhat=rhat, bits=report.bits_used, rounds=report.rounds)
        return report


async def randomized_rank_estimate(
    machines: Sequence[Machine],
    board: Optional[Blackboard],
    th: Thresholds,
    p: int,
    T: int,
    seed: int,
    filter_kind: FilterKind = FilterKind(),
    settings: Optional[DistRankSettings] = None,
    **kwargs,
) -> EstimateReport:
    """Algorithm-level entry point; keyword arguments pass through to execute"""
    protocol = RandomizedRankProtocol(machines, settings)
    return await protocol.execute(th, p, T, seed, filter_kind=filter_kind, board=board, **kwargs)
