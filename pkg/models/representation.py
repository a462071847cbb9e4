"""
Representation

Descriptors for the minimal, maximal and strong-inclusion representations of
a numbered subbasis, identity translations between them, restriction to a
subset, and fuel-bounded monitors that semi-decide membership in basic and
open sets from strong-inclusion names.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import config
from models.basis import (
    KindTag,
    Membership,
    NumberedSubbasis,
    RepresentationKind,
    StrongInclusion,
    Verdict,
    check_axioms,
    conjoin,
    extend_strong_inclusion,
    induced_subbasis,
    validate_prefix,
)
from utils.errors import NameExhausted, RepresentationError
from utils.kernel import Code, FinSetCode, Fuel, Name, SemiResult, dovetail, run_semi

__all__ = [
    "KindTag",
    "MembershipMonitor",
    "OpenSetMonitor",
    "Representation",
    "RepresentationKind",
    "Translator",
    "cover_to_open_name",
    "embedding_translation",
    "id_translation",
    "make_representation",
    "member_monitor",
    "open_set_monitor",
    "restrict",
    "restrict_subbasis",
]


@dataclass(frozen=True)
class Representation:
    kind: RepresentationKind
    subbasis: NumberedSubbasis
    certificate: bool = False
    restricted_from: Optional["Representation"] = None

    @property
    def name_subbasis(self) -> NumberedSubbasis:
        """The basis whose codes appear in names: β̂ for SI, β otherwise."""
        return induced_subbasis(self.subbasis) if self.kind.uses_induced_codes else self.subbasis

    @property
    def name_inclusion(self) -> Optional[StrongInclusion]:
        if self.kind.si is None:
            return None
        return extend_strong_inclusion(self.kind.si)

    def validate(self, prefix: Sequence[Code], point: int, fuel: int = config.CHECK_FUEL) -> Verdict:
        return validate_prefix(self.kind, self.subbasis, prefix, point, fuel)

    def __str__(self) -> str:
        return f"{self.kind} over {self.subbasis.label}"


def make_representation(
    kind: RepresentationKind,
    subbasis: NumberedSubbasis,
    certificate: bool = False,
    sample_codes: Optional[Sequence[Code]] = None,
    sample_points: Optional[Sequence[int]] = None,
) -> Representation:
    """
    Bundle a representation kind with its subbasis.

    Args:
        kind: Min, Max or SI(si).
        subbasis: the numbered subbasis.
        certificate: the world certifies that every point has a strong
            neighborhood basis for kind.si, so an irreflexive relation is accepted.
        sample_codes: if given with sample_points, kind.si must pass check_axioms on them.
        sample_points: witness points for the axiom check.

    Raises:
        RepresentationError: irreflexive relation without certificate, or a failed axiom check.
    """
    if kind.tag is KindTag.SI:
        si = kind.si
        if si is None:
            raise RepresentationError("SI representation needs a strong inclusion")
        if not si.reflexive and not certificate:
            raise RepresentationError(
                f"{si.label} is not reflexive and no strong-neighborhood certificate was given")
        if sample_codes is not None and sample_points is not None:
            report = check_axioms(si, subbasis, sample_codes, sample_points)
            if not report.passed:
                raise RepresentationError(f"{si.label} fails the axiom check: {report.lines()[0]}")
    return Representation(kind=kind, subbasis=subbasis, certificate=certificate)


# --- Translations ----------------------------------------------------------------

@dataclass(frozen=True)
class Translator:
    """
    A realizer on names. read_bound(k), when known, is the number of input
    positions read to emit output position k.
    """
    label: str
    transform: Callable[[Name], Name]
    read_bound: Optional[Callable[[int], int]] = None

    def __call__(self, name: Name) -> Name:
        return self.transform(name)


def _identity(label: str, wrap: Optional[Callable[[Code], Code]] = None) -> Translator:
    if wrap is None:
        return Translator(label, lambda name: Name(name.at, f"{label}({name.label})"), lambda k: k + 1)
    return Translator(label, lambda name: name.map(wrap, f"{label}({name.label})"), lambda k: k + 1)


def id_translation(src: Representation, dst: Representation) -> Translator:
    """
    The identity realizer for ρ_max ≤ ρ^⊆̊ ≤ ρ_min.

    Supported pairs are Max→SI and Max→Min over the same subbasis, and SI→Min
    where dst is the minimal representation over the induced basis of src.
    Max→SI wraps each subbasis code n as the singleton Δ-code {n}.
    """
    source, target = src.kind.tag, dst.kind.tag
    if source is KindTag.MAX and target is KindTag.SI and dst.subbasis == src.subbasis:
        if not (dst.kind.si.reflexive or dst.certificate):
            raise RepresentationError(f"{dst.kind.si.label} cannot turn a maximal name into a strong basis")
        return _identity("max-to-si", lambda code: FinSetCode({code}))
    if source is KindTag.MAX and target is KindTag.MIN and dst.subbasis == src.subbasis:
        return _identity("max-to-min")
    if source is KindTag.SI and target is KindTag.MIN and dst.subbasis.induced_from == src.subbasis:
        return _identity("si-to-min")
    raise RepresentationError(f"no identity realizer from {src} to {dst}")


# --- Restriction -----------------------------------------------------------------

def restrict_subbasis(
    sb: NumberedSubbasis,
    subset_member: Callable[[int, int], Membership],
    label: str = "A",
) -> NumberedSubbasis:
    """α(n) = A ∩ β(n), with the same codes; subset_member(point, fuel) tests x ∈ A."""

    def member_test(point: int, code: Code, fuel: int) -> Membership:
        return conjoin([subset_member(point, fuel), sb.member(point, code, fuel)])

    return replace(sb, member_test=member_test, label=f"{sb.label}|{label}")


def restrict(
    rep: Representation,
    subset_member: Callable[[int, int], Membership],
    label: str = "A",
) -> Representation:
    """Restriction to A ⊆ X; strong inclusions carry over unchanged."""
    return Representation(
        kind=rep.kind,
        subbasis=restrict_subbasis(rep.subbasis, subset_member, label),
        certificate=rep.certificate,
        restricted_from=rep,
    )


def embedding_translation(restricted: Representation, ambient: Representation) -> Translator:
    """The identity realizer of the inclusion A ↪ X on strong-inclusion names."""
    if restricted.restricted_from != ambient:
        raise RepresentationError(f"{restricted} is not a restriction of {ambient}")
    if restricted.kind.tag is not KindTag.SI:
        raise RepresentationError(f"the embedding is only realized by the identity on SI names, not {restricted.kind}")
    return _identity("embedding")


# --- Monitors --------------------------------------------------------------------

def _monitor_inclusion(rep: Representation) -> StrongInclusion:
    if rep.kind.tag is not KindTag.SI:
        raise RepresentationError(f"membership monitors need an SI representation, got {rep.kind}")
    si = rep.name_inclusion
    if si.semi is None:
        raise RepresentationError(f"{rep.kind.si.label} is not semi-decidable, no monitor exists")
    return si


class MembershipMonitor:
    """
    Semi-decides x ∈ β(target) from an SI-name of x: accepts once some listed
    Δ-code is semi-confirmed strongly included in {target}. Name positions and
    budgets are dovetailed, so the outcome is monotone in fuel.
    """

    def __init__(self, rep: Representation, target: int):
        self.si = _monitor_inclusion(rep)
        self.target = target
        self._wrapped = FinSetCode({target})
        self.last_used = 0

    def _search(self, name: Name, meter: Fuel) -> bool:
        for i, rest in dovetail():
            budget = rest + 1
            try:
                entry = name.read(i, meter)
            except NameExhausted:
                continue
            meter.charge(budget)
            if self.si.semi(entry, self._wrapped, budget) is SemiResult.ACCEPT:
                logging.debug(f"Entry {i} of {name.label} confirmed inside code {self.target} at budget {budget}")
                return True

    def poll(self, name: Name, fuel: int = config.DEFAULT_FUEL) -> SemiResult:
        result, self.last_used = run_semi(lambda meter: self._search(name, meter), fuel)
        return result


def member_monitor(rep: Representation, target: int) -> MembershipMonitor:
    return MembershipMonitor(rep, target)


class OpenSetMonitor:
    """
    Semi-decides x ∈ O for an open set O named by a stream where entry n+1
    lists basic code n and 0 lists nothing. Dovetails over (open-name index,
    point-name index, budget).
    """

    def __init__(self, rep: Representation, open_name: Name):
        self.si = _monitor_inclusion(rep)
        self.open_name = open_name
        self.last_used = 0

    def _search(self, name: Name, meter: Fuel) -> bool:
        for j, rest in dovetail():
            try:
                listed = self.open_name.read(j, meter)
            except NameExhausted:
                continue
            if listed == 0:
                continue
            target = FinSetCode({listed - 1})
            for i in range(rest + 1):
                budget = rest - i + 1
                try:
                    entry = name.read(i, meter)
                except NameExhausted:
                    continue
                meter.charge(budget)
                if self.si.semi(entry, target, budget) is SemiResult.ACCEPT:
                    return True

    def poll(self, name: Name, fuel: int = config.DEFAULT_FUEL) -> SemiResult:
        result, self.last_used = run_semi(lambda meter: self._search(name, meter), fuel)
        return result


def open_set_monitor(rep: Representation, open_name: Name) -> OpenSetMonitor:
    return OpenSetMonitor(rep, open_name)


def cover_to_open_name(cover: Name) -> Name:
    """Open-set name of the union of a stream of basic codes."""
    return cover.map(lambda code: code + 1, f"open({cover.label})")
