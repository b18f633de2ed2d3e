"""Retractions of an extension of centralizers onto its subtower.

For G' = G *_<u> (<u> x Z^n) the map fixing G and sending
t_i -> u^(p * (2R+1)^(i-1)) is a retraction G' -> G.  On the abelian part
it acts as u^e t^v -> u^(e + p * theta(v)) with theta the base-(2R+1)
map, so for p large enough it is injective on any fixed finite ball of
G'.  This module computes the least such p exactly, the resulting
generator-image complexity, and complexity curves in R.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .eocgroup import AbelianSyllable, BaseSyllable, EocElement, EocGroup
from .freewords import Word
from .zdiscrim import lower_bound_value, theta

DEFAULT_BALL_CAP = 500_000


@dataclass(frozen=True)
class ThetaSpec:
    """Retraction of the top stage of `group`, with box radius R and stretch p."""

    group: EocGroup
    R: int
    p: int

    def __post_init__(self):
        if not self.group.stages:
            raise ValueError("group has no stage to retract")
        if self.R < 0:
            raise ValueError("R must be nonnegative")
        if self.p < 1:
            raise ValueError("p must be >= 1")

    @property
    def stage(self) -> int:
        return len(self.group.stages) - 1

    @property
    def target(self) -> EocGroup:
        return subtower(self.group)

    def exponent(self, i: int) -> int:
        """Exponent of u in the image of t_i (1-based)."""
        base = 2 * self.R + 1
        return self.p * base ** (i - 1)


def subtower(group: EocGroup) -> EocGroup:
    """The group with the top extension stage removed."""
    if not group.stages:
        raise ValueError("group has no stage to remove")
    return EocGroup(group.alphabet, [(s.u, s.rank) for s in group.stages[:-1]])


def t_image(spec: ThetaSpec, i: int) -> Word:
    """Image u^(p * (2R+1)^(i-1)) of the i-th top-stage generator, as a base word."""
    stage = spec.group.stages[spec.stage]
    if not 1 <= i <= stage.rank:
        raise ValueError(f"t-index {i} out of range 1..{stage.rank}")
    return stage.u ** spec.exponent(i)


def apply_theta(spec: ThetaSpec, w: EocElement, target: Optional[EocGroup] = None) -> EocElement:
    """Push an element through the retraction, landing in the subtower group."""
    if w.group is not spec.group:
        raise ValueError("element does not belong to the retracted group")
    if target is None:
        target = spec.target
    stage = spec.stage
    u = spec.group.stages[stage].u
    th = theta(spec.group.stages[stage].rank, spec.R)
    syllables = []
    for syl in w.syllables:
        if isinstance(syl, BaseSyllable):
            syllables.append(BaseSyllable(syl.word))
        elif syl.stage == stage:
            e = syl.u_exp + spec.p * th(syl.t_exps)
            syllables.append(BaseSyllable(u**e))
        else:
            syllables.append(AbelianSyllable(syl.stage, syl.u_exp, syl.t_exps))
    return target._from_syllables(tuple(syllables))


def hom_complexity(spec: ThetaSpec) -> int:
    """Max image word length over the generators of the retracted group.

    Base and lower-stage generators are fixed (length 1); the top-stage
    t_i map to u-powers whose base-word length is maximal at i = n.
    """
    stage = spec.group.stages[spec.stage]
    longest = len(t_image(spec, stage.rank))
    return max(1, longest)


def _images_injective(
    spec: ThetaSpec, ball: Sequence[EocElement], target: EocGroup
) -> bool:
    seen = set()
    for w in ball:
        img = apply_theta(spec, w, target)
        if img in seen:
            return False
        seen.add(img)
    return True


def _p_ceiling(group: EocGroup, R: int) -> int:
    """A computable cap for the injectivity ascent.

    Cancellation at a block junction inside a ball-of-radius-R product
    consumes fewer than |u| + R letters per side, so once p outgrows the
    junction budget distinct theta-values stay separated; the constant is
    deliberately slack.
    """
    ulen = max(len(s.u) for s in group.stages)
    return 4 * R + 4 * ulen + 10


def minimal_discriminating_p(
    group: EocGroup, R: int, cap: int = DEFAULT_BALL_CAP
) -> int:
    """Least p making the top-stage retraction injective on the radius-R ball.

    Injectivity on the ball is exactly discrimination of the ball after
    translating: a collision pair (w, w') gives the nontrivial w * w'^-1
    with trivial image, and conversely.
    """
    ball = group.ball(R, cap=cap)
    target = subtower(group)
    ceiling = _p_ceiling(group, R)
    for p in range(1, ceiling + 1):
        if _images_injective(ThetaSpec(group, R, p), ball, target):
            return p
    raise AssertionError(
        f"no injective p up to ceiling {ceiling}: ascent analysis is wrong"
    )


@dataclass(frozen=True)
class ComplexityRecord:
    """One point of a complexity curve: minimal p at radius R and derived data.

    ``complexity`` is the exact max generator-image length; ``upper_model``
    is the closed form |u| * p_min * (2R+1)^(n-1), which coincides with it
    whenever u is cyclically reduced.
    """

    R: int
    p_min: int
    complexity: int
    upper_model: int
    lower_bound: Fraction
    ball_size: int
    wall_ms: float


def complexity_record(
    group: EocGroup, R: int, cap: int = DEFAULT_BALL_CAP
) -> ComplexityRecord:
    start = time.perf_counter()
    p = minimal_discriminating_p(group, R, cap=cap)
    spec = ThetaSpec(group, R, p)
    stage = group.stages[-1]
    n = stage.rank
    # the free abelian subgroup <u, t_1..t_n> has rank n+1, which drives
    # the polynomial lower bound for discriminating the ball
    lb = lower_bound_value(n + 1, R)
    ball_size = len(group.ball(R, cap=cap))
    wall_ms = (time.perf_counter() - start) * 1000.0
    return ComplexityRecord(
        R=R,
        p_min=p,
        complexity=hom_complexity(spec),
        upper_model=max(1, len(stage.u) * p * (2 * R + 1) ** (n - 1)),
        lower_bound=lb,
        ball_size=ball_size,
        wall_ms=wall_ms,
    )


@dataclass
class CurveResult:
    """A complexity curve plus an unasserted empirical growth exponent."""

    records: list[ComplexityRecord]
    loglog_slope: Optional[float] = None


def complexity_curve(
    group: EocGroup, radii: Sequence[int], cap: int = DEFAULT_BALL_CAP
) -> CurveResult:
    records = [complexity_record(group, R, cap=cap) for R in radii]
    slope = None
    positive = [(r.R, r.complexity) for r in records if r.R >= 1]
    if len(positive) >= 2:
        xs = np.log([float(R) for R, _ in positive])
        ys = np.log([float(c) for _, c in positive])
        slope = float(np.polyfit(xs, ys, 1)[0])
    return CurveResult(records=records, loglog_slope=slope)


@dataclass
class ChainResult:
    """A uniform-p composite retraction down a multi-stage tower."""

    p: int
    R: int
    complexity: int
    stage_complexities: list[int]
    # per-generator (token text, composite image length, product of stage bounds)
    submultiplicative: list[tuple[str, int, int]] = field(default_factory=list)


def _apply_chain(group: EocGroup, R: int, p: int, w: EocElement) -> Word:
    """Compose the top-stage retractions all the way down to the free base."""
    g = group
    while g.stages:
        spec = ThetaSpec(g, R, p)
        target = spec.target
        w = apply_theta(spec, w, target)
        g = target
    assert len(w.syllables) <= 1
    if not w.syllables:
        return group.alphabet.identity()
    syl = w.syllables[0]
    assert isinstance(syl, BaseSyllable)
    return syl.word


def compose_chain(
    group: EocGroup, R: int, cap: int = DEFAULT_BALL_CAP
) -> ChainResult:
    """Least uniform p whose composite retraction is injective on the radius-R ball.

    Also records, per generator, the composite image length against the
    product of the per-stage complexity bounds: composition can only
    multiply complexities, never exceed their product.
    """
    if not group.stages:
        raise ValueError("group has no stages to retract")
    ball = group.ball(R, cap=cap)
    ceiling = _p_ceiling(group, R)
    chosen = None
    for p in range(1, ceiling + 1):
        seen = set()
        ok = True
        for w in ball:
            img = _apply_chain(group, R, p, w)
            if img in seen:
                ok = False
                break
            seen.add(img)
        if ok:
            chosen = p
            break
    if chosen is None:
        raise AssertionError(
            f"no injective uniform p up to ceiling {ceiling}: ascent analysis is wrong"
        )
    stage_complexities = []
    g = group
    while g.stages:
        stage_complexities.append(hom_complexity(ThetaSpec(g, R, chosen)))
        g = subtower(g)
    bound_product = 1
    for c in stage_complexities:
        bound_product *= c
    sub = []
    composite_max = 1
    for tok in group.generator_tokens():
        w = group.element([tok])
        img = _apply_chain(group, R, chosen, w)
        sub.append((w.tokens() or "<id>", len(img), bound_product))
        composite_max = max(composite_max, len(img))
    return ChainResult(
        p=chosen,
        R=R,
        complexity=composite_max,
        stage_complexities=stage_complexities,
        submultiplicative=sub,
    )
