"""
Worlds

Concrete spaces used by the command line and the tests:

    R-rational   reals with open rational intervals, exact arithmetic
    R-registry   reals with intervals whose centers are computable reals from a
                 finite program registry (some slots never halt)
    K-space      A = ⋃_{n∈K}[n-1/2, n+1/2] ∪ ⋃_{n∉K}{n} with K simulated by a
                 step-counted program registry, basis A ∩ rational intervals
    singleton    β(n) = {ν(n)} over bit-stream programs with undecidable equality
    N-discrete   ℕ with singletons
"""

import logging
import random
import re
import shlex
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from math import isqrt
from typing import Callable, List, Optional

from mpmath.libmp import e_fixed, pi_fixed
from pydantic import ValidationError

import config
from models.basis import (
    Membership,
    Numbering,
    NumberedSubbasis,
    RepresentationKind,
    StrongInclusion,
    decidable_numbering,
    equality_inclusion,
)
from models.metric import (
    MetricWorld,
    ball_code,
    ball_parts,
    cauchy_name_of_rational,
    cauchy_to_min,
    cauchy_to_si,
    dyadic,
    parse_rational,
    precision_for,
    rational_from_code,
    rational_numbering_code,
    strong_incl_metric,
)
from models.representation import Representation, make_representation, restrict_subbasis
from models.schemas import WorldSpec
from utils.errors import CodingError, FuelExhausted, WorldError
from utils.kernel import Fuel, FinSetCode, Name, SemiResult, charge, pair, unpair

NAME_KINDS = ["cauchy", "min", "max", "si"]

_BALL_LITERAL = re.compile(r"^\s*B\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)\s*$")


class World:
    """Common surface of every world: points, balls, relations and name generators."""

    identifier = ""
    exact_membership = False

    def subbasis(self) -> NumberedSubbasis:
        raise NotImplementedError

    def inclusion(self, strict: bool = True) -> StrongInclusion:
        raise NotImplementedError

    def representation(self, kind: str, strict: bool = True) -> Representation:
        """Min, Max or SI representation of this world's subbasis."""
        sb = self.subbasis()
        if kind == "min":
            return make_representation(RepresentationKind.minimal(), sb)
        if kind == "max":
            return make_representation(RepresentationKind.maximal(), sb)
        if kind == "si":
            return make_representation(RepresentationKind.strong(self.inclusion(strict)), sb,
                                       certificate=self.certificate)
        raise WorldError(f"unknown representation kind {kind!r}")

    @property
    def certificate(self) -> bool:
        return False

    def parse_point(self, text: str) -> int:
        raise NotImplementedError

    def parse_ball(self, text: str) -> int:
        """A ball literal "B(center,radius)" to its code."""
        match = _BALL_LITERAL.match(text)
        if match is None:
            raise CodingError(f"bad ball literal {text!r}, expected B(center,radius)")
        radius = parse_rational(match.group(2))
        if radius <= 0:
            raise CodingError(f"ball radius must be positive, got {radius}")
        return ball_code(self.parse_point(match.group(1)), radius)

    def parse_target(self, text: str) -> int:
        """A basic-set literal: a ball for metric worlds."""
        return self.parse_ball(text)

    def cauchy_name(self, point: int) -> Name:
        raise WorldError(f"{self.identifier} is not a metric world, it has no Cauchy names")

    def max_name(self, point: int) -> Name:
        raise WorldError(f"{self.identifier} cannot enumerate every basic set containing a point")

    def name_of(self, point: int, kind: str) -> Name:
        """Generate a name of the point: cauchy, min, max or si."""
        if kind == "cauchy":
            return self.cauchy_name(point)
        if kind == "min":
            return cauchy_to_min(self.cauchy_name(point))
        if kind == "si":
            return cauchy_to_si(self.cauchy_name(point))
        if kind == "max":
            return enumerate_max_name(self, point)
        raise WorldError(f"unknown name kind {kind!r}")

    def sample_points(self, rng: random.Random, count: int) -> List[int]:
        raise NotImplementedError

    def sample_codes(self, rng: random.Random, count: int) -> List[int]:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.identifier})"


def _sample_balls(world: MetricWorld, rng: random.Random, count: int, centers: List[int]) -> List[int]:
    """Random balls, half of them nested inside earlier ones so related pairs show up."""
    radii = [Fraction(2), Fraction(3, 2), Fraction(1), Fraction(3, 4), Fraction(1, 2),
             Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]
    codes = []
    while len(codes) < count:
        if codes and rng.random() < 0.5:
            center, radius = ball_parts(rng.choice(codes))
            near = world.rational_near(center, precision_for(radius / 8))
            shifted = near + radius / 4 * rng.choice([-1, 0, 1])
            codes.append(ball_code(world.embed_rational(shifted), radius / 2))
        else:
            codes.append(ball_code(rng.choice(centers), rng.choice(radii)))
    return codes


# --- ℝ with rational intervals -----------------------------------------------------

class RationalRealWorld(World, MetricWorld):
    identifier = "R-rational"
    label = "R-rational"
    exact = True
    exact_membership = True

    def __init__(self):
        self.point_numbering = decidable_numbering("c_Q", lambda code: code >= 0)

    def value(self, point: int) -> Fraction:
        return rational_from_code(point)

    def distance_approx(self, n: int, m: int, k: int, fuel: Optional[Fuel] = None) -> Fraction:
        charge(fuel)
        return self.exact_distance(n, m)

    def exact_distance(self, n: int, m: int) -> Fraction:
        return abs(rational_from_code(n) - rational_from_code(m))

    def embed_rational(self, q: Fraction) -> int:
        return rational_numbering_code(q)

    def rational_near(self, n: int, k: int) -> Fraction:
        return rational_from_code(n)

    def subbasis(self) -> NumberedSubbasis:
        return self.ball_subbasis()

    def inclusion(self, strict: bool = True) -> StrongInclusion:
        return strong_incl_metric(self, strict)

    @property
    def certificate(self) -> bool:
        return True

    def parse_point(self, text: str) -> int:
        return rational_numbering_code(parse_rational(text))

    def point_label(self, point: int) -> str:
        return str(rational_from_code(point))

    def cauchy_name(self, point: int) -> Name:
        return cauchy_name_of_rational(rational_from_code(point))

    def max_name(self, point: int) -> Name:
        """
        Even positions 2j list B(a_j, 2^-j) from the Cauchy name. Position 2j+1
        lists code j when its ball contains the point and repeats B(a_j, 2^-j)
        otherwise, so every containing code shows up at a known position.
        """
        fast = cauchy_to_min(self.cauchy_name(point))

        def cell(index: int) -> int:
            code = index // 2
            if index % 2 == 1 and self.ball_member(point, code) is Membership.IN:
                return code
            return fast.at(code)

        return Name(cell, f"max({self.point_label(point)})")

    def sample_points(self, rng: random.Random, count: int) -> List[int]:
        return [rational_numbering_code(Fraction(rng.randint(-96, 96), rng.choice([3, 8, 16])))
                for _ in range(count)]

    def sample_codes(self, rng: random.Random, count: int) -> List[int]:
        centers = [rational_numbering_code(Fraction(rng.randint(-32, 32), 8)) for _ in range(count)]
        return _sample_balls(self, rng, count, centers)


# --- ℝ with computable-real centers --------------------------------------------------

def _fixed(constant: Callable[[int], int]) -> Callable[[int], Fraction]:
    """Approximant within 2^-k from an mpmath fixed-point constant, with 8 guard bits."""
    return lambda k: Fraction(constant(k + 8), 1 << (k + 8))


def _sqrt2(k: int) -> Fraction:
    bits = k + 8
    return Fraction(isqrt(2 << (2 * bits)), 1 << bits)


KNOWN_CONSTANTS = {
    "pi": _fixed(pi_fixed),
    "e": _fixed(e_fixed),
    "sqrt2": _sqrt2,
}


@dataclass(frozen=True)
class RegistrySlot:
    """
    A program computing a real: approximant(k) is within 2^-k of its value.
    A divergent slot has no approximant; a fake slot answers 0 below its
    horizon and never halts from there on.
    """
    label: str
    approximant: Optional[Callable[[int], Fraction]] = None
    horizon: Optional[int] = None

    @property
    def total(self) -> bool:
        return self.approximant is not None and self.horizon is None

    def halts_at(self, k: int) -> bool:
        return self.approximant is not None and (self.horizon is None or k < self.horizon)


def parse_slots(tokens: List[str]) -> List[RegistrySlot]:
    slots = []
    for token in tokens:
        name, _, argument = token.partition(":")
        if name in KNOWN_CONSTANTS and not argument:
            slots.append(RegistrySlot(name, KNOWN_CONSTANTS[name]))
        elif name == "divergent":
            if argument and not argument.isdecimal():
                raise WorldError(f"divergent slot count must be a natural, got {argument!r}")
            copies = int(argument) if argument else 1
            slots.extend(RegistrySlot("divergent") for _ in range(copies))
        elif name == "fake" and argument.isdecimal():
            slots.append(RegistrySlot(f"fake:{argument}", lambda k: Fraction(0), int(argument)))
        else:
            try:
                value = parse_rational(token)
            except CodingError:
                raise WorldError(f"unknown registry slot {token!r}")
            slots.append(RegistrySlot(token, lambda k, value=value: value))
    return slots


class RegistryRealWorld(World, MetricWorld):
    """
    ν-codes: pair(0, c) is the rational c_Q(c), pair(1, j) is registry slot j,
    anything else is malformed.
    """

    identifier = "R-registry"
    exact = False

    def __init__(self, slots: Optional[List[str]] = None):
        self.slots = parse_slots(slots or list(config.REGISTRY_DEFAULT_SLOTS))
        self.label = "R-registry[" + ",".join(slot.label for slot in self.slots) + "]"
        self.point_numbering = Numbering(
            label=self.label,
            domain_check=self._domain_check,
            malformed=self._malformed,
            oracle=self._in_domain,
            decidable=False,
        )

    def _malformed(self, code: int) -> bool:
        tag, body = unpair(code)
        return tag > 1 or (tag == 1 and body >= len(self.slots))

    def _in_domain(self, code: int) -> bool:
        if self._malformed(code):
            return False
        tag, body = unpair(code)
        return tag == 0 or self.slots[body].total

    def _domain_check(self, code: int, fuel: int) -> SemiResult:
        if fuel < 1 or not self._in_domain(code):
            return SemiResult.NOT_YET
        return SemiResult.ACCEPT

    def slot_code(self, index: int) -> int:
        return pair(1, index)

    def approximant(self, code: int, k: int, fuel: Optional[Fuel] = None) -> Fraction:
        """A rational within 2^-k of ν(code); non-halting programs eat all remaining fuel."""
        if self._malformed(code):
            raise WorldError(f"{code} is not a registry code")
        charge(fuel)
        tag, body = unpair(code)
        if tag == 0:
            return rational_from_code(body)
        slot = self.slots[body]
        if slot.halts_at(k):
            return slot.approximant(k)
        if fuel is None:
            raise WorldError(f"registry slot {slot.label} does not halt at precision {k}")
        charge(fuel, fuel.remaining + 1)

    def distance_approx(self, n: int, m: int, k: int, fuel: Optional[Fuel] = None) -> Fraction:
        return abs(self.approximant(n, k + 1, fuel) - self.approximant(m, k + 1, fuel))

    def embed_rational(self, q: Fraction) -> int:
        return pair(0, rational_numbering_code(q))

    def rational_near(self, n: int, k: int) -> Fraction:
        return self.approximant(n, k)

    def subbasis(self) -> NumberedSubbasis:
        return self.ball_subbasis()

    def inclusion(self, strict: bool = True) -> StrongInclusion:
        return strong_incl_metric(self, strict)

    @property
    def certificate(self) -> bool:
        return True

    def parse_point(self, text: str) -> int:
        text = text.strip()
        for index, slot in enumerate(self.slots):
            if slot.label == text:
                return self.slot_code(index)
        return self.embed_rational(parse_rational(text))

    def point_label(self, point: int) -> str:
        if self._malformed(point):
            return f"?{point}"
        tag, body = unpair(point)
        return str(rational_from_code(body)) if tag == 0 else self.slots[body].label

    def cauchy_name(self, point: int) -> Name:
        tag, body = unpair(point)
        if tag == 0:
            return cauchy_name_of_rational(rational_from_code(body)).map(
                lambda code: pair(0, code), f"cauchy({self.point_label(point)})")
        return Name(lambda n: self.embed_rational(self.approximant(point, n + 1)),
                    f"cauchy({self.point_label(point)})")

    def sample_points(self, rng: random.Random, count: int) -> List[int]:
        total = [self.slot_code(i) for i, slot in enumerate(self.slots) if slot.total]
        points = []
        for _ in range(count):
            if total and rng.random() < 0.25:
                points.append(rng.choice(total))
            else:
                points.append(self.embed_rational(Fraction(rng.randint(-96, 96), rng.choice([3, 8, 16]))))
        return points

    def sample_codes(self, rng: random.Random, count: int) -> List[int]:
        total = [self.slot_code(i) for i, slot in enumerate(self.slots) if slot.total]
        centers = [self.embed_rational(Fraction(rng.randint(-32, 32), 8)) for _ in range(count)]
        centers += total * max(1, count // 8)
        return _sample_balls(self, rng, count, centers)


# --- The space A built from the halting set ------------------------------------------

class KSpaceWorld(RationalRealWorld):
    """
    Points of A are coded by rationals. Integers are always points; a rational
    r ≠ n within 1/2 of n is only admitted once program n is seen to halt
    within F steps. Program 2i halts after 2i * config.KSPACE_STEPS_PER_PROGRAM
    steps, odd programs never halt.
    """

    identifier = "K-space"
    exact_membership = False

    def __init__(self, fuel: int = config.KSPACE_DEFAULT_FUEL):
        super().__init__()
        self.fuel = fuel
        self.label = f"K-space(F={fuel})"
        self._ambient = RationalRealWorld()
        self.point_numbering = Numbering(
            label=self.label,
            domain_check=self._admits,
            oracle=lambda code: self._admits(code, self.fuel) is SemiResult.ACCEPT,
        )

    @staticmethod
    def halting_steps(program: int) -> Optional[int]:
        if program < 0 or program % 2:
            return None
        return program * config.KSPACE_STEPS_PER_PROGRAM

    def halts_within(self, program: int, steps: int) -> bool:
        needed = self.halting_steps(program)
        return needed is not None and needed <= steps

    def in_kernel(self, program: int) -> bool:
        """n ∈ K_F."""
        return self.halts_within(program, self.fuel)

    def _admits(self, code: int, fuel: int) -> SemiResult:
        if fuel < 1:
            return SemiResult.NOT_YET
        x = rational_from_code(code)
        if x.denominator == 1:
            return SemiResult.ACCEPT
        budget = min(fuel, self.fuel)
        neighbors = {n for n in (round(x - Fraction(1, 2)), round(x + Fraction(1, 2))) if abs(x - n) <= Fraction(1, 2)}
        if any(self.halts_within(n, budget) for n in neighbors):
            return SemiResult.ACCEPT
        return SemiResult.NOT_YET

    def point_in_A(self, point: int, fuel: int) -> Membership:
        return Membership.IN if self._admits(point, fuel) is SemiResult.ACCEPT else Membership.UNKNOWN

    def subbasis(self) -> NumberedSubbasis:
        """α(n) = A ∩ β_Q(n), numbered by rational ball codes."""
        return restrict_subbasis(self._ambient.ball_subbasis(), self.point_in_A, self.label)

    def inclusion(self, strict: bool = True) -> StrongInclusion:
        return strong_incl_metric(self._ambient, strict)

    def max_name(self, point: int) -> Name:
        raise WorldError("K-space membership is not decidable, no maximal names are enumerated")

    def name_of(self, point: int, kind: str) -> Name:
        value = rational_from_code(point)
        if kind == "min" and value.denominator == 1 and not self.in_kernel(value.numerator):
            return kspace_min_name(self, value.numerator)
        return super().name_of(point, kind)

    def sample_points(self, rng: random.Random, count: int) -> List[int]:
        return [rational_numbering_code(Fraction(rng.randint(-4, 24))) for _ in range(count)]


def kspace_min_name(world: KSpaceWorld, n: int) -> Name:
    """The constant name of (n - 1/4, n + 1/4) ∩ A, a minimal name of n when n ∉ K."""
    if world.in_kernel(n):
        raise WorldError(f"{n} is in K_{world.fuel}, its neighborhood in A is an interval")
    return Name.constant(ball_code(rational_numbering_code(Fraction(n)), Fraction(1, 4)), f"min-const({n})")


# --- Singletons with undecidable equality --------------------------------------------

@dataclass(frozen=True)
class BitProgram:
    """A bit stream: all zeros, or zeros with a single 1 at position `late`; or an alias."""
    label: str
    late: Optional[int] = None
    alias: Optional[int] = None


DEFAULT_PROGRAMS = [
    BitProgram("zero"),
    BitProgram("zero-alias", alias=0),
    BitProgram("late-5", late=5),
    BitProgram("late-40", late=40),
    BitProgram("late-1000000", late=10**6),
    BitProgram("late-5-alias", alias=2),
]


class SingletonWorld(World):
    """β(n) = {ν(n)}: equality of points is co-semi-decidable only."""

    identifier = "singleton"
    label = "singleton"

    def __init__(self, programs: Optional[List[BitProgram]] = None):
        self.programs = programs or DEFAULT_PROGRAMS
        self.point_numbering = decidable_numbering("programs", lambda code: 0 <= code < len(self.programs))

    def _late(self, index: int) -> Optional[int]:
        program = self.programs[index]
        while program.alias is not None:
            program = self.programs[program.alias]
        return program.late

    def bit(self, index: int, position: int, fuel: Optional[Fuel] = None) -> int:
        charge(fuel)
        return 1 if self._late(index) == position else 0

    def member(self, point: int, code: int, fuel: int = config.CHECK_FUEL) -> Membership:
        if self.point_numbering.malformed(point) or self.point_numbering.malformed(code):
            return Membership.OUT
        if point == code:
            return Membership.IN
        meter = Fuel(fuel)
        try:
            for position in count():
                if self.bit(point, position, meter) != self.bit(code, position, meter):
                    return Membership.OUT
        except FuelExhausted:
            return Membership.UNKNOWN

    def naive_equality_semi(self, a: int, b: int, fuel: int) -> SemiResult:
        """Accepts when no difference shows up within the budget. Unsound."""
        meter = Fuel(fuel)
        try:
            for position in count():
                if self.bit(a, position, meter) != self.bit(b, position, meter):
                    return SemiResult.NOT_YET
        except FuelExhausted:
            return SemiResult.ACCEPT

    def subbasis(self) -> NumberedSubbasis:
        return NumberedSubbasis(self.point_numbering, self.member, "singletons", point_label=self.point_label)

    def inclusion(self, strict: bool = True) -> StrongInclusion:
        """Point equality, which has no semi-decision."""

        def holds(a: int, b: int) -> bool:
            valid = not (self.point_numbering.malformed(a) or self.point_numbering.malformed(b))
            return valid and self._late(a) == self._late(b)

        return StrongInclusion(label="point-equality", holds=holds, reflexive=True)

    def parse_point(self, text: str) -> int:
        text = text.strip()
        for index, program in enumerate(self.programs):
            if program.label == text:
                return index
        if text.isdecimal() and int(text) < len(self.programs):
            return int(text)
        raise CodingError(f"unknown program {text!r}")

    def parse_target(self, text: str) -> int:
        return self.parse_point(text)

    def point_label(self, point: int) -> str:
        return self.programs[point].label if 0 <= point < len(self.programs) else f"?{point}"

    def name_of(self, point: int, kind: str) -> Name:
        if kind in ("min", "max"):
            if kind == "max":
                same = [i for i in range(len(self.programs)) if self._late(i) == self._late(point)]
                return Name(lambda i: same[i % len(same)], f"max({self.point_label(point)})")
            return Name.constant(point)
        if kind == "si":
            return Name.constant(FinSetCode({point}))
        return super().name_of(point, kind)

    def sample_points(self, rng: random.Random, count: int) -> List[int]:
        return list(range(len(self.programs)))

    def sample_codes(self, rng: random.Random, count: int) -> List[int]:
        return list(range(len(self.programs)))


# --- ℕ with singletons ----------------------------------------------------------------

class DiscreteWorld(World):
    """ν = id, β(n) = {n}; minimal, maximal and SI names coincide."""

    identifier = "N-discrete"
    label = "N-discrete"
    exact_membership = True

    def __init__(self):
        self.point_numbering = decidable_numbering("id", lambda code: code >= 0)

    def member(self, point: int, code: int, fuel: int = config.CHECK_FUEL) -> Membership:
        return Membership.IN if point == code else Membership.OUT

    def subbasis(self) -> NumberedSubbasis:
        return NumberedSubbasis(self.point_numbering, self.member, "singletons(N)")

    def inclusion(self, strict: bool = True) -> StrongInclusion:
        return equality_inclusion()

    def parse_point(self, text: str) -> int:
        text = text.strip()
        if not text.isdecimal():
            raise CodingError(f"expected a natural, got {text!r}")
        return int(text)

    def parse_target(self, text: str) -> int:
        return self.parse_point(text)

    def point_label(self, point: int) -> str:
        return str(point)

    def max_name(self, point: int) -> Name:
        return Name.constant(point, f"max({point})")

    def name_of(self, point: int, kind: str) -> Name:
        if kind == "min":
            return Name.constant(point)
        if kind == "si":
            return Name.constant(FinSetCode({point}))
        return super().name_of(point, kind)

    def sample_points(self, rng: random.Random, count: int) -> List[int]:
        return [rng.randrange(64) for _ in range(count)]

    def sample_codes(self, rng: random.Random, count: int) -> List[int]:
        return [rng.randrange(64) for _ in range(count)]


# --- Entry points --------------------------------------------------------------------

def enumerate_max_name(world: World, point: int) -> Name:
    """A maximal name listing every basic code whose set contains the point."""
    if not world.exact_membership:
        raise WorldError(f"{world.identifier} has no exact membership test, maximal names are not enumerable")
    return world.max_name(point)


def filter_max_name(world: MetricWorld, point: int, fuel: Fuel) -> Name:
    """
    Enumerate a maximal name by filtering ball codes in code order, refining
    each membership test until it resolves. A center whose program never
    halts, or a point on the boundary of a ball, stalls the filter until the
    meter runs out.
    """

    def contains(code: int) -> bool:
        if world.ball_malformed(code):
            return False
        center, radius = ball_parts(code)
        for k in count():
            d = world.distance_approx(point, center, k, fuel)
            if d + dyadic(k) < radius:
                return True
            if d - dyadic(k) >= radius:
                return False

    found: List[int] = []
    scan = count()

    def cell(index: int) -> int:
        while len(found) <= index:
            code = next(scan)
            if contains(code):
                found.append(code)
        return found[index]

    return Name(cell, f"filtered-max({world.point_label(point)})")


def parse_world_spec(spec: str) -> WorldSpec:
    try:
        tokens = shlex.split(spec)
    except ValueError as e:
        raise WorldError(f"bad world string {spec!r}: {e}") from e
    if not tokens:
        raise WorldError("empty world string")
    fields = {"identifier": tokens[0]}
    rest = iter(tokens[1:])
    for flag in rest:
        value = next(rest, None)
        if value is None:
            raise WorldError(f"{flag} needs a value in world string {spec!r}")
        if flag == "--fuel":
            fields["fuel"] = value
        elif flag == "--with":
            fields["slots"] = [slot for slot in value.split(",") if slot]
        else:
            raise WorldError(f"unknown world option {flag!r}")
    try:
        return WorldSpec(**fields)
    except ValidationError as e:
        raise WorldError(f"bad world parameters in {spec!r}: {e.errors()[0]['msg']}") from e


def make_world(spec: str = config.DEFAULT_WORLD) -> World:
    """
    Build a world from a string such as "K-space --fuel 1000" or
    "R-registry --with pi,e,divergent:3".
    """
    parsed = parse_world_spec(spec)
    if parsed.identifier == "R-rational":
        world = RationalRealWorld()
    elif parsed.identifier == "R-registry":
        world = RegistryRealWorld(parsed.slots)
    elif parsed.identifier == "K-space":
        world = KSpaceWorld(parsed.fuel)
    elif parsed.identifier == "singleton":
        world = SingletonWorld()
    elif parsed.identifier == "N-discrete":
        world = DiscreteWorld()
    else:
        raise WorldError(f"unknown world {parsed.identifier!r}")
    logging.debug(f"Built world {world!r} from {spec!r}")
    return world
