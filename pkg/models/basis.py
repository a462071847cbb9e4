"""
Basis

Partial numberings, numbered subbases, the induced basis of finite
intersections, strong inclusion relations with their extensions to induced
codes and to finite code sequences, sampled axiom checks and validation of
name prefixes.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

import config
from models.schemas import CheckReport
from utils.kernel import Code, FinSetCode, Fuel, SemiResult, finset_members, semi_decide


class Membership(str, Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"


class Verdict(str, Enum):
    CONSISTENT = "consistent-so-far"
    VIOLATION = "violation"
    UNKNOWN = "unknown"


def conjoin(results: Iterable[Membership]) -> Membership:
    """Membership in an intersection: OUT dominates UNKNOWN, which dominates IN."""
    seen = set(results)
    if Membership.OUT in seen:
        return Membership.OUT
    if Membership.UNKNOWN in seen:
        return Membership.UNKNOWN
    return Membership.IN


@dataclass(frozen=True)
class Numbering:
    """
    A partial numbering ν :⊆ ℕ → X.

    domain_check semi-decides n ∈ dom(ν) under a fuel budget; malformed(n)
    flags codes that are decidably outside the domain; oracle(n) is an exact
    test oracle and is never used by realizers.
    """
    label: str
    domain_check: Callable[[int, int], SemiResult]
    malformed: Callable[[int], bool] = lambda code: False
    oracle: Optional[Callable[[int], bool]] = None
    decidable: bool = False

    def in_domain(self, code: int, fuel: int = config.CHECK_FUEL) -> Optional[bool]:
        """True when confirmed, False when decidably outside, None while unresolved."""
        if self.malformed(code):
            return False
        if self.domain_check(code, fuel) is SemiResult.ACCEPT:
            return True
        return None


def decidable_numbering(label: str, predicate: Callable[[int], bool]) -> Numbering:
    """A numbering whose domain is decided by a total predicate (one step per check)."""

    def domain_check(code: int, fuel: int) -> SemiResult:
        return SemiResult.ACCEPT if fuel >= 1 and predicate(code) else SemiResult.NOT_YET

    return Numbering(
        label=label,
        domain_check=domain_check,
        malformed=lambda code: not predicate(code),
        oracle=predicate,
        decidable=True,
    )


@dataclass(frozen=True)
class NumberedSubbasis:
    """
    A numbered subbasis (𝔅, β) with an extensional membership hook.

    member_test(point, code, fuel) answers for a point given by its ν-code; it
    must be consistent across calls and reentrant.
    """
    numbering: Numbering
    member_test: Callable[[int, int, int], Membership]
    label: str = ""
    induced_from: Optional["NumberedSubbasis"] = None
    point_label: Callable[[int], str] = str

    def member(self, point: int, code: Code, fuel: int = config.CHECK_FUEL) -> Membership:
        return self.member_test(point, code, fuel)


# --- Induced basis ---------------------------------------------------------------

def induced_code(subcodes: Iterable[int]) -> FinSetCode:
    """Δ-code of a finite list of subbasis codes; [] denotes the whole space."""
    return FinSetCode(subcodes)


def induced_members(code: Code) -> List[int]:
    return sorted(finset_members(code))


def induced_membership(sb: NumberedSubbasis, point: int, code: Code, fuel: int = config.CHECK_FUEL) -> Membership:
    return conjoin(sb.member(point, member, fuel) for member in induced_members(code))


def induced_subbasis(sb: NumberedSubbasis) -> NumberedSubbasis:
    """The basis β̂ of finite intersections, numbered by Δ-codes."""
    base = sb.numbering

    def domain_check(code: Code, fuel: int) -> SemiResult:
        for member in induced_members(code):
            if base.domain_check(member, fuel) is SemiResult.NOT_YET:
                return SemiResult.NOT_YET
        return SemiResult.ACCEPT

    oracle = None
    if base.oracle is not None:
        oracle = lambda code: all(base.oracle(member) for member in induced_members(code))

    numbering = Numbering(
        label=f"induced({base.label})",
        domain_check=domain_check,
        malformed=lambda code: any(base.malformed(member) for member in induced_members(code)),
        oracle=oracle,
        decidable=base.decidable,
    )
    return NumberedSubbasis(
        numbering=numbering,
        member_test=lambda point, code, fuel: induced_membership(sb, point, code, fuel),
        label=f"induced({sb.label})",
        induced_from=sb,
        point_label=sb.point_label,
    )


# --- Strong inclusions ---------------------------------------------------------

@dataclass(frozen=True)
class StrongInclusion:
    """
    A transitive relation on codes refining set inclusion.

    holds is a total test oracle; semi is present iff the relation is
    semi-decidable, and is only required to be correct on dom(β).
    """
    label: str
    holds: Callable[[Code, Code], bool]
    semi: Optional[Callable[[Code, Code, int], SemiResult]] = None
    reflexive: bool = False

    @property
    def semi_decidable(self) -> bool:
        return self.semi is not None


def equality_inclusion(label: str = "equality") -> StrongInclusion:
    """Code equality: the strong inclusion behind the maximal representation."""

    def semi(a: Code, b: Code, fuel: int) -> SemiResult:
        return SemiResult.ACCEPT if fuel >= 1 and a == b else SemiResult.NOT_YET

    return StrongInclusion(label=label, holds=lambda a, b: a == b, semi=semi, reflexive=True)


def _budgets():
    budget = 1
    while True:
        yield budget
        budget *= 2


def _polls_all(si: StrongInclusion, left: Sequence[int], right: Sequence[int], meter: Fuel) -> bool:
    """Search until every k on the right has a semi-confirmed p on the left."""
    pending = list(right)
    if not pending:
        return True
    if not left:
        return False
    for budget in _budgets():
        still_pending = []
        for k in pending:
            confirmed = False
            for p in left:
                meter.charge(budget)
                if si.semi(p, k, budget) is SemiResult.ACCEPT:
                    confirmed = True
                    break
            if not confirmed:
                still_pending.append(k)
        pending = still_pending
        if not pending:
            return True


def extend_strong_inclusion(si: StrongInclusion) -> StrongInclusion:
    """
    The induced strong inclusion on Δ-codes:
    n₁ ⊆̊ n₂ ⟺ every k ∈ Δ_{n₂} has some p ∈ Δ_{n₁} with p ⊆̊ k.
    """

    def holds(n1: Code, n2: Code) -> bool:
        left = induced_members(n1)
        return all(any(si.holds(p, k) for p in left) for k in induced_members(n2))

    semi = None
    if si.semi is not None:
        def semi(n1: Code, n2: Code, fuel: int) -> SemiResult:
            left, right = induced_members(n1), induced_members(n2)
            return semi_decide(lambda meter: _polls_all(si, left, right, meter), fuel)

    return StrongInclusion(label=f"induced({si.label})", holds=holds, semi=semi, reflexive=si.reflexive)


@dataclass(frozen=True)
class SequenceInclusion:
    """⊆̊ lifted to finite code sequences, as used by basis adapters."""
    label: str
    holds: Callable[[Sequence[int], Sequence[int]], bool]
    semi: Optional[Callable[[Sequence[int], Sequence[int], int], SemiResult]] = None


def extend_to_sequences(si: StrongInclusion) -> SequenceInclusion:
    """(b₁..bₙ) ⊆̊ (b'₁..b'ₘ) ⟺ ∀i ∃j, b_j ⊆̊ b'_i. Anything refines the empty sequence."""

    def holds(left: Sequence[int], right: Sequence[int]) -> bool:
        return all(any(si.holds(b, target) for b in left) for target in right)

    semi = None
    if si.semi is not None:
        def semi(left: Sequence[int], right: Sequence[int], fuel: int) -> SemiResult:
            return semi_decide(lambda meter: _polls_all(si, list(left), list(right), meter), fuel)

    return SequenceInclusion(label=f"sequences({si.label})", holds=holds, semi=semi)


# --- Sampled axiom check ---------------------------------------------------------

def check_axioms(
    si: StrongInclusion,
    sb: NumberedSubbasis,
    codes: Iterable[Code],
    points: Iterable[int],
    pair_sample: int = config.AXIOM_PAIR_SAMPLE,
    seed: int = config.SAMPLE_SEED,
    fuel: int = config.CHECK_FUEL,
    progress: bool = False,
) -> CheckReport:
    """
    Look for sampled violations of the strong-inclusion axioms.

    Args:
        si: the relation under test.
        sb: the numbered subbasis its codes refer to.
        codes: sampled codes; those not confirmed in dom(β) are skipped.
        points: sampled ν-codes of points used as inclusion witnesses.
        pair_sample: how many ordered code pairs to draw.
        seed: sampling seed.
        fuel: per-test budget for domain checks and membership tests.
        progress: show a tqdm progress bar.

    Returns:
        CheckReport whose violations are transitivity, inclusion and
        reflexivity counterexamples; Unknown memberships count as skipped.
    """
    report = CheckReport(subject=f"axioms of {si.label} on {sb.label}")
    rng = random.Random(seed)
    sampled = list(dict.fromkeys(codes))
    resolved = [code for code in sampled if sb.numbering.in_domain(code, fuel) is True]
    report.skipped += len(sampled) - len(resolved)
    if len(sampled) != len(resolved):
        logging.warning(f"{len(sampled) - len(resolved)} sampled codes not confirmed in dom({sb.label}), skipped")
    witnesses = list(points)

    holds = lru_cache(maxsize=None)(si.holds)
    memberships: Dict[Tuple[int, Code], Membership] = {}

    def member(point: int, code: Code) -> Membership:
        key = (point, code)
        if key not in memberships:
            memberships[key] = sb.member(point, code, fuel)
        return memberships[key]

    all_pairs = [(a, b) for a in resolved for b in resolved]
    pairs = all_pairs if len(all_pairs) <= pair_sample else rng.sample(all_pairs, pair_sample)

    for a, b in tqdm(pairs, desc="pairs", disable=not progress):
        report.checked += 1
        if not holds(a, b):
            continue
        for c in resolved:
            if holds(b, c) and not holds(a, c):
                report.add("transitivity", a, b, c=c)
        for point in witnesses:
            inside, outside = member(point, a), member(point, b)
            if Membership.UNKNOWN in (inside, outside):
                report.skipped += 1
            elif inside is Membership.IN and outside is Membership.OUT:
                report.add("inclusion", a, b, point=sb.point_label(point))

    if si.reflexive:
        for a in resolved:
            if not holds(a, a):
                report.add("reflexivity", a, a)

    logging.debug(f"check_axioms({si.label}): {report.checked} pairs, "
                  f"{len(report.violations)} violations, {report.skipped} skipped")
    return report


# --- Name prefixes -------------------------------------------------------------

class KindTag(str, Enum):
    MIN = "min"
    MAX = "max"
    SI = "si"


@dataclass(frozen=True)
class RepresentationKind:
    """Min | Max | SI(si). SI names list induced-basis Δ-codes, the others subbasis codes."""
    tag: KindTag
    si: Optional[StrongInclusion] = None

    @classmethod
    def minimal(cls) -> "RepresentationKind":
        return cls(KindTag.MIN)

    @classmethod
    def maximal(cls) -> "RepresentationKind":
        return cls(KindTag.MAX)

    @classmethod
    def strong(cls, si: StrongInclusion) -> "RepresentationKind":
        return cls(KindTag.SI, si)

    @property
    def uses_induced_codes(self) -> bool:
        return self.tag is KindTag.SI

    def __str__(self) -> str:
        return f"si({self.si.label})" if self.si is not None else self.tag.value


def validate_prefix(
    kind: RepresentationKind,
    sb: NumberedSubbasis,
    prefix: Sequence[Code],
    point: int,
    fuel: int = config.CHECK_FUEL,
) -> Verdict:
    """
    Check the first clause of the name definition on a finite prefix: every
    listed code is in the domain and its set contains the point. The
    completeness clause quantifies over the whole name and is never checked here.
    """
    unresolved = False
    for index, entry in enumerate(prefix):
        members = induced_members(entry) if kind.uses_induced_codes else [entry]
        for code in members:
            status = sb.numbering.in_domain(code, fuel)
            if status is False:
                logging.debug(f"Entry {index} lists code {code} outside dom({sb.label})")
                return Verdict.VIOLATION
            if status is None:
                unresolved = True
                continue
            membership = sb.member(point, code, fuel)
            if membership is Membership.OUT:
                logging.debug(f"Entry {index}: point {sb.point_label(point)} is outside code {code}")
                return Verdict.VIOLATION
            if membership is Membership.UNKNOWN:
                unresolved = True
    return Verdict.UNKNOWN if unresolved else Verdict.CONSISTENT
