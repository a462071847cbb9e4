"""
Equivalence

Totalization of partial numberings, adapters between numbered bases with
their sampled conditions, translations built from adapters, and the Lacombe
(cover) and Nogina (pointed selection) checks for the two bases of ℝ.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from tqdm import tqdm

import config
from models.basis import (
    Membership,
    Numbering,
    NumberedSubbasis,
    StrongInclusion,
    conjoin,
    decidable_numbering,
    extend_to_sequences,
)
from models.metric import (
    MetricWorld,
    ball_code,
    ball_parts,
    dyadic,
    precision_for,
    rational_numbering_code,
    shrinking_balls,
)
from models.representation import Translator
from models.schemas import CheckReport
from models.worlds import RationalRealWorld, RegistryRealWorld, World
from utils.errors import SubbasisError, WorldError
from utils.kernel import Code, FinSetCode, Name, SemiResult, finset_members, pair

CodeSequence = Tuple[int, ...]


# --- Totalization ------------------------------------------------------------------

@dataclass(frozen=True)
class TotalizedNumbering:
    """β̃: β on dom(β), the empty set on every other natural."""
    base: Numbering

    @property
    def numbering(self) -> Numbering:
        return decidable_numbering(f"total({self.base.label})", lambda code: code >= 0)

    def denotes_empty(self, code: int, fuel: int = config.CHECK_FUEL) -> Optional[bool]:
        status = self.base.in_domain(code, fuel)
        return None if status is None else not status


def _confirmed(numbering: Numbering, code: Code) -> bool:
    if numbering.oracle is not None:
        return numbering.oracle(code)
    return numbering.in_domain(code, config.CHECK_FUEL) is True


def totalize(si: StrongInclusion, base: Numbering) -> Tuple[TotalizedNumbering, StrongInclusion]:
    """
    n ⊆̊′ m ⟺ (n, m ∈ dom(β) and n ⊆̊ m) or n = m.

    The semi-decision is only kept when dom(β) is decidable.
    """
    total = TotalizedNumbering(base)

    def holds(n: Code, m: Code) -> bool:
        return n == m or (_confirmed(base, n) and _confirmed(base, m) and si.holds(n, m))

    semi = None
    if base.decidable and si.semi is not None:
        def semi(n: Code, m: Code, fuel: int) -> SemiResult:
            if n == m:
                return SemiResult.ACCEPT if fuel >= 1 else SemiResult.NOT_YET
            if base.malformed(n) or base.malformed(m):
                return SemiResult.NOT_YET
            return si.semi(n, m, fuel)

    return total, StrongInclusion(label=f"total({si.label})", holds=holds, semi=semi, reflexive=si.reflexive)


def totalized_subbasis(sb: NumberedSubbasis) -> NumberedSubbasis:
    total = TotalizedNumbering(sb.numbering)

    def member_test(point: int, code: Code, fuel: int) -> Membership:
        status = sb.numbering.in_domain(code, fuel)
        if status is False:
            return Membership.OUT
        if status is None:
            return Membership.UNKNOWN
        return sb.member(point, code, fuel)

    return NumberedSubbasis(
        numbering=total.numbering,
        member_test=member_test,
        label=f"total({sb.label})",
        point_label=sb.point_label,
    )


def naive_totalized_semi(si: StrongInclusion) -> Callable[[Code, Code, int], SemiResult]:
    """Code equality, else the base semi-decision, without confirming dom(β). Unsound."""

    def semi(n: Code, m: Code, fuel: int) -> SemiResult:
        if n == m:
            return SemiResult.ACCEPT
        return si.semi(n, m, fuel)

    return semi


# --- Adapters ----------------------------------------------------------------------

@dataclass(frozen=True)
class Adapter:
    """
    f : dom(β₂)* → dom(β₁)*. witness(point, d), when present, returns the
    sequence (b₁..bₙ) of the uniform condition for a point literal and a β₁-code d.
    """
    label: str
    map: Callable[[CodeSequence], CodeSequence]
    witness: Optional[Callable[[str, int], CodeSequence]] = None

    def __call__(self, sequence: Sequence[int]) -> CodeSequence:
        sequence = tuple(sequence)
        if not sequence:
            return ()
        return tuple(self.map(sequence))


def identity_adapter() -> Adapter:
    return Adapter("identity", lambda sequence: sequence)


def translation_from_adapter(adapter: Adapter) -> Translator:
    """Output position n is the Δ-code of f applied to every code listed in positions 0..n."""

    def transform(q: Name) -> Name:
        def entry(n: int) -> FinSetCode:
            sequence = tuple(code for i in range(n + 1) for code in sorted(finset_members(q.at(i))))
            return FinSetCode(adapter(sequence))

        return Name(entry, f"{adapter.label}({q.label})")

    return Translator(f"adapter:{adapter.label}", transform, lambda k: k + 1)


def _gap(world: MetricWorld, point: int, center: int, radius: Fraction) -> Fraction:
    """A positive lower bound of radius - d(point, center)."""
    for k in range(config.ORACLE_PRECISION + 1):
        gap = radius - world.distance_approx(point, center, k) - dyadic(k)
        if gap > 0:
            return gap
    raise WorldError(f"{world.point_label(point)} is not confirmed inside the ball around {world.point_label(center)}")


def rational_vs_creal_adapters(
    rational: RationalRealWorld,
    registry: RegistryRealWorld,
) -> Tuple[Adapter, Adapter]:
    """
    (rational→creal, creal→rational).

    rational→creal embeds each rational ball. creal→rational replaces each
    B(c, r) by B(a, r + 2^(1-k)) with a within 2^-k of c, at precision
    k = max(sequence length, k₀) where 2^-k₀ ≤ r/4.
    """

    def embed(code: int) -> int:
        center, radius = ball_parts(code)
        return ball_code(pair(0, center), radius)

    def to_creal_witness(point: str, d: int) -> CodeSequence:
        x = registry.parse_point(point)
        center, radius = ball_parts(d)
        gap = _gap(registry, x, center, radius)
        near = registry.rational_near(x, precision_for(gap / 4))
        return (ball_code(rational_numbering_code(near), gap / 2),)

    def to_rational(sequence: CodeSequence) -> CodeSequence:
        image = []
        for code in sequence:
            center, radius = ball_parts(code)
            k = max(len(sequence), precision_for(radius / 4))
            approximant = registry.approximant(center, k)
            image.append(ball_code(rational_numbering_code(approximant), radius + 2 * dyadic(k)))
        return tuple(image)

    def to_rational_witness(point: str, d: int) -> CodeSequence:
        x = registry.parse_point(point)
        center, radius = ball_parts(d)
        gap = _gap(registry, x, pair(0, center), radius)
        return (ball_code(x, gap / 2),)

    rational_to_creal = Adapter(
        "rational-to-creal",
        lambda sequence: tuple(embed(code) for code in sequence),
        to_creal_witness,
    )
    creal_to_rational = Adapter("creal-to-rational", to_rational, to_rational_witness)
    return rational_to_creal, creal_to_rational


def _point_in(world: World, literal: str) -> Optional[int]:
    try:
        return world.parse_point(literal)
    except SubbasisError:
        return None


def _refinements(world: MetricWorld, witness: CodeSequence) -> List[CodeSequence]:
    options = [shrinking_balls(world, code) for code in witness]
    return [tuple(balls[t] for balls in options) for t in range(min(len(balls) for balls in options))]


def check_adapter(
    adapter: Adapter,
    source: World,
    target: World,
    si1: StrongInclusion,
    si2: StrongInclusion,
    points: Sequence[str],
    sample: int = config.ADAPTER_SAMPLE,
    seed: int = config.SAMPLE_SEED,
    fuel: int = config.CHECK_FUEL,
    progress: bool = False,
) -> CheckReport:
    """
    Sample the conditions making (β₁, ⊆̊₁) uniformly representation coarser
    than (β₂, ⊆̊₂) through the adapter.

    Args:
        adapter: maps β₂-code sequences (source world) to β₁-code sequences (target world).
        source: the world numbered by β₂.
        target: the world numbered by β₁.
        si1: strong inclusion of the target basis.
        si2: strong inclusion of the source basis.
        points: point literals understood by both worlds.
        sample: number of sequences for the overset condition and of (x, d)
            pairs for the uniform condition.

    Returns:
        CheckReport with overset, witness and refinement violations.
    """
    report = CheckReport(subject=f"adapter {adapter.label}")
    rng = random.Random(seed)
    sb1, sb2 = target.subbasis(), source.subbasis()
    holds1, holds2 = extend_to_sequences(si1).holds, extend_to_sequences(si2).holds
    points = list(points)

    source_codes = source.sample_codes(rng, sample)
    for _ in tqdm(range(sample), desc="overset", disable=not progress):
        sequence = tuple(rng.sample(source_codes, rng.randint(1, 3)))
        try:
            image = adapter(sequence)
        except SubbasisError as e:
            logging.warning(f"{adapter.label} is undefined on {sequence}: {e}")
            report.add("undefined", FinSetCode(sequence), 0)
            continue
        report.checked += 1
        literals = rng.sample(points, min(len(points), 10))
        literals += [source.point_label(ball_parts(code)[0]) for code in sequence]
        for literal in literals:
            x2, x1 = _point_in(source, literal), _point_in(target, literal)
            if x1 is None or x2 is None:
                continue
            inside = conjoin(sb2.member(x2, code, fuel) for code in sequence)
            if inside is Membership.UNKNOWN:
                report.skipped += 1
            if inside is not Membership.IN:
                continue
            for d in image:
                membership = sb1.member(x1, d, fuel)
                if membership is Membership.OUT:
                    report.add("overset", FinSetCode(sequence), d, point=literal)
                elif membership is Membership.UNKNOWN:
                    report.skipped += 1

    if adapter.witness is None:
        logging.warning(f"{adapter.label} has no witness function, uniform condition not checked")
        return report

    target_codes = target.sample_codes(rng, sample)
    pairs = 0
    for _ in tqdm(range(20 * sample), desc="uniform", disable=not progress):
        if pairs >= sample:
            break
        literal = rng.choice(points)
        x1, x2 = _point_in(target, literal), _point_in(source, literal)
        if x1 is None or x2 is None:
            continue
        containing = [d for d in target_codes if sb1.member(x1, d, fuel) is Membership.IN]
        if not containing:
            continue
        d = rng.choice(containing)
        pairs += 1
        witness = adapter.witness(literal, d)
        if conjoin(sb2.member(x2, code, fuel) for code in witness) is not Membership.IN:
            report.add("witness", FinSetCode(witness), d, point=literal)
            continue
        report.checked += 1
        for refinement in _refinements(source, witness):
            if not holds2(refinement, witness):
                continue
            if not holds1(adapter(refinement), (d,)):
                report.add("refinement", FinSetCode(refinement), d, point=literal)
    if pairs < sample:
        logging.warning(f"Only {pairs} of {sample} (point, code) pairs found for {adapter.label}")
    return report


def check_adapter_along_names(
    adapter: Adapter,
    source: World,
    target: World,
    si1: StrongInclusion,
    names: Sequence[Tuple[str, Name]],
    depth: int = config.EVENTUAL_DEPTH,
    sample: int = 60,
    per_point: int = 3,
    seed: int = config.SAMPLE_SEED,
    fuel: int = config.CHECK_FUEL,
    progress: bool = False,
) -> CheckReport:
    """
    Sample the non-uniform condition along given SI names of points.

    For each (literal, name) the codes listed in the first n positions are
    collected and mapped through the adapter, for n up to depth. Every sampled
    β₁-ball d around the point with a gap of at least 2^-(depth/2) must end up
    strongly including some image code; a pair whose images miss d from some
    position onward is an "eventual" violation.

    Args:
        adapter: maps β₂-code sequences (source world) to β₁-code sequences (target world).
        source: the world the names are SI names in.
        target: the world numbered by β₁.
        si1: strong inclusion of the target basis.
        names: (point literal, SI name of the point in the source world).
        depth: name positions read per point.
        sample: β₁-codes drawn as candidate balls d.
        per_point: balls d checked per point.
    """
    report = CheckReport(subject=f"adapter {adapter.label} along {len(names)} names")
    rng = random.Random(seed)
    sb1 = target.subbasis()
    holds1 = extend_to_sequences(si1).holds
    target_codes = target.sample_codes(rng, sample)
    margin = dyadic(depth // 2)

    for literal, name in tqdm(names, desc="names", disable=not progress):
        x1 = _point_in(target, literal)
        if x1 is None:
            report.skipped += 1
            continue
        around = []
        for d in target_codes:
            if sb1.member(x1, d, fuel) is not Membership.IN:
                continue
            center, radius = ball_parts(d)
            try:
                if _gap(target, x1, center, radius) >= margin:
                    around.append(d)
            except WorldError:
                report.skipped += 1
        if not around:
            logging.debug(f"No ball with margin {margin} around {literal} in the sample")
            continue

        listed: List[int] = []
        images: List[CodeSequence] = []
        for n in range(depth):
            listed.extend(sorted(finset_members(name.at(n))))
            images.append(adapter(tuple(listed)))

        for d in rng.sample(around, min(per_point, len(around))):
            report.checked += 1
            misses = [not holds1(image, (d,)) for image in images]
            if not misses[-1]:
                continue
            start = len(misses)
            while start > 0 and misses[start - 1]:
                start -= 1
            logging.info(f"{adapter.label}: images along {name.label} miss code {d} from position {start} on")
            report.add("eventual", FinSetCode(listed), d, point=literal)
    return report


# --- Lacombe covers ------------------------------------------------------------------

def embedding_cover(registry: RegistryRealWorld) -> Callable[[int], Name]:
    """A rational ball is covered by itself seen as a computable-endpoint ball."""

    def cover(code: int) -> Name:
        center, radius = ball_parts(code)
        return Name.constant(ball_code(pair(0, center), radius), f"cover({code})")

    return cover


def rational_cover(registry: RegistryRealWorld) -> Callable[[int], Name]:
    """B(c, r) = ⋃ B(a_k, r - 2^-k) over approximants a_k of c, for every k with 2^-k < r."""

    def cover(code: int) -> Name:
        center, radius = ball_parts(code)
        start = precision_for(radius) + 1

        def entry(i: int) -> int:
            k = start + i
            return ball_code(rational_numbering_code(registry.approximant(center, k)), radius - dyadic(k))

        return Name(entry, f"cover({registry.point_label(center)})")

    return cover


def lacombe_adapter_check(
    cover_program: Callable[[int], Name],
    covered: World,
    covering: World,
    codes: Sequence[int],
    points: Sequence[str],
    depth: int = config.COVER_DEPTH,
    fuel: int = config.CHECK_FUEL,
) -> CheckReport:
    """
    For each sampled β₁-code B, every sampled point of B lies in one of the
    first `depth` cover entries, and no sampled point outside B lies in any.
    """
    report = CheckReport(subject="lacombe cover")
    sb1, sb2 = covered.subbasis(), covering.subbasis()
    for code in codes:
        cover = cover_program(code).prefix(depth)
        report.checked += 1
        for literal in points:
            x1, x2 = _point_in(covered, literal), _point_in(covering, literal)
            if x1 is None or x2 is None:
                continue
            outer = sb1.member(x1, code, fuel)
            inner = [sb2.member(x2, entry, fuel) for entry in cover]
            if outer is Membership.UNKNOWN:
                report.skipped += 1
            elif outer is Membership.OUT and Membership.IN in inner:
                report.add("cover-overset", code, cover[inner.index(Membership.IN)], point=literal)
            elif outer is Membership.IN and Membership.IN not in inner:
                if Membership.UNKNOWN in inner:
                    report.skipped += 1
                else:
                    report.add("cover-miss", code, code, point=literal)
    return report


# --- Nogina selectors ------------------------------------------------------------------

Selector = Callable[[int, List[int]], Optional[int]]


def cauchy_selector(world: RationalRealWorld) -> Selector:
    """Pick B(p(k), 2^(1-k)) for the first k with |p(k) - c| + 2^(1-k) ≤ r."""

    def select(code: int, prefix: List[int]) -> Optional[int]:
        center, radius = ball_parts(code)
        for k, approximation in enumerate(prefix):
            if world.exact_distance(approximation, center) + 2 * dyadic(k) <= radius:
                return ball_code(approximation, 2 * dyadic(k))
        return None

    return select


def identity_selector() -> Selector:
    return lambda code, prefix: code


def nogina_adapter_check(
    selector: Selector,
    source: World,
    target: World,
    codes: Sequence[int],
    points: Sequence[str],
    prefix_length: int = config.COVER_DEPTH,
    fuel: int = config.CHECK_FUEL,
) -> CheckReport:
    """For sampled x ∈ B₁, the selected B₂ contains x and no sampled point of B₂ lies outside B₁."""
    report = CheckReport(subject="nogina selector")
    sb1, sb2 = source.subbasis(), target.subbasis()
    for code in codes:
        for literal in points:
            x1, x2 = _point_in(source, literal), _point_in(target, literal)
            if x1 is None or x2 is None or sb1.member(x1, code, fuel) is not Membership.IN:
                continue
            selected = selector(code, source.cauchy_name(x1).prefix(prefix_length))
            if selected is None:
                report.skipped += 1
                continue
            report.checked += 1
            if sb2.member(x2, selected, fuel) is Membership.OUT:
                report.add("selector-miss", code, selected, point=literal)
            for other in points[:20]:
                y1, y2 = _point_in(source, other), _point_in(target, other)
                if y1 is None or y2 is None:
                    continue
                if sb2.member(y2, selected, fuel) is Membership.IN and sb1.member(y1, code, fuel) is Membership.OUT:
                    report.add("selector-overset", code, selected, point=other)
                    break
    return report
