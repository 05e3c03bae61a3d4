"""Hard labeling: collapse a per-scale index curve into one binary decision.

Scales are grouped into disjoint regions; a region is non-stationary when a
strict majority of its scales exceed the hardened threshold alpha * gamma, and
the global label is the strict majority vote over regions.  The hardened
threshold deliberately over-rejects borderline scales so the label reflects
unambiguous structure rather than numerical outliers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError
from .ins import InsCurve, InsPoint

DEFAULT_ALPHA = 10.0
DEFAULT_REGIONS = (
    (0.006, 0.012, 0.025),  # short-term dynamics
    (0.05, 0.1, 0.2),       # mid-term
    (0.3, 0.4, 0.5),        # long-term
)


@dataclass(frozen=True)
class RegionPartition:
    """Disjoint groups of scales, each the same size, covering the scale sweep."""

    regions: tuple[tuple[float, ...], ...] = DEFAULT_REGIONS

    def __post_init__(self):
        if not self.regions or any(not r for r in self.regions):
            raise PreconditionError("partition must contain non-empty regions")
        sizes = {len(r) for r in self.regions}
        if len(sizes) != 1:
            raise PreconditionError("all regions must have the same size")
        flat = [s for r in self.regions for s in r]
        if len(set(flat)) != len(flat):
            raise PreconditionError("regions must be pairwise disjoint")
        if any(not 0.0 < s <= 0.5 for s in flat):
            raise PreconditionError("all scales must lie in (0, 0.5]")

    @property
    def k(self) -> int:
        return len(self.regions)

    @property
    def n(self) -> int:
        return len(self.regions[0])

    def all_scales(self) -> list[float]:
        return sorted(s for r in self.regions for s in r)


@dataclass(frozen=True)
class HlcConfig:
    alpha: float = DEFAULT_ALPHA
    partition: RegionPartition = field(default_factory=RegionPartition)

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise PreconditionError(f"alpha must exceed 1, got {self.alpha}")


@dataclass
class HlcResult:
    """Global binary label (1 = non-stationary) with per-region diagnostics."""

    label: int
    region_flags: list[int]
    ns_scales: list[list[float]]       # per region, scales that crossed alpha*gamma
    thresholds_used: dict[float, float]  # scale -> alpha*gamma(scale)


def region_flag(points: list[InsPoint], alpha: float) -> tuple[int, list[float]]:
    """Binary non-stationarity flag for one region of scales.

    A scale counts as non-stationary when its index strictly exceeds
    alpha * gamma(scale); the region is flagged when those scales form a
    strict majority.  Ties (possible only for even region sizes) resolve to
    stationary, matching the strict inequality.
    """
    if not points:
        raise PreconditionError("region must contain at least one scale")
    ns_scales = [p.scale for p in points if p.ins > alpha * p.gamma]
    n_ns = len(ns_scales)
    flag = 1 if n_ns > len(points) - n_ns else 0
    return flag, ns_scales


def hlc_label(curve: InsCurve, cfg: HlcConfig = HlcConfig()) -> HlcResult:
    """Aggregate a full index curve into the global hard label.

    The curve must contain exactly the partition's scales.  The global label
    is 1 iff strictly more than half the regions are flagged; ties for even
    region counts resolve to 0.
    """
    by_scale = {p.scale: p for p in curve.points}
    wanted = cfg.partition.all_scales()
    if sorted(by_scale) != wanted:
        raise PreconditionError(
            f"curve scales {sorted(by_scale)} do not match partition scales {wanted}"
        )

    flags: list[int] = []
    ns_per_region: list[list[float]] = []
    thresholds: dict[float, float] = {}
    for region in cfg.partition.regions:
        points = [by_scale[s] for s in region]
        flag, ns = region_flag(points, cfg.alpha)
        flags.append(flag)
        ns_per_region.append(ns)
        for p in points:
            thresholds[p.scale] = cfg.alpha * p.gamma

    label = 1 if sum(flags) > cfg.partition.k / 2.0 else 0
    return HlcResult(label=label, region_flags=flags, ns_scales=ns_per_region, thresholds_used=thresholds)
