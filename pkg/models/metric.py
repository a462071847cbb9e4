"""
Metric

Metric worlds over a partial numbering of a dense subset, the ball
numbering, the strict and non-strict metric strong inclusions, the Cauchy
representation and the four translations between Cauchy, minimal, maximal
and strong-inclusion names of points.
"""

import logging
import math
from fractions import Fraction
from itertools import count
from typing import List, Optional, Sequence, Tuple

import config
from models.basis import Membership, Numbering, NumberedSubbasis, StrongInclusion, Verdict
from utils.errors import CodingError, FuelExhausted
from utils.kernel import Code, FinSetCode, Fuel, Name, SemiResult, charge, finset_members, pair, semi_decide, unpair


# --- Rational coding ---------------------------------------------------------

def rational_numbering_code(q: Fraction) -> int:
    """c_Q⁻¹: pair(sign, pair(|numerator|, denominator - 1)) in lowest terms."""
    q = Fraction(q)
    sign = 1 if q < 0 else 0
    return pair(sign, pair(abs(q.numerator), q.denominator - 1))


def rational_from_code(code: int) -> Fraction:
    """c_Q, total: an odd sign component negates."""
    sign, rest = unpair(code)
    numerator, denominator = unpair(rest)
    value = Fraction(numerator, denominator + 1)
    return -value if sign % 2 else value


def dyadic(n: int) -> Fraction:
    """2^-n."""
    return Fraction(1, 1 << n)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise CodingError(f"bad rational literal {text!r}") from e


# --- Balls -------------------------------------------------------------------

def ball_code(center_code: int, radius: Fraction) -> int:
    return pair(center_code, rational_numbering_code(radius))


def ball_parts(code: int) -> Tuple[int, Fraction]:
    """(center ν-code, radius) of a ball code."""
    center, radius = unpair(code)
    return center, rational_from_code(radius)


def precision_for(bound: Fraction) -> int:
    """Smallest k with 2^-k ≤ bound (bound > 0)."""
    k = 0
    while dyadic(k) > bound:
        k += 1
    return k


class MetricWorld:
    """
    A metric space with a numbered dense subset, the ν of the ball numbering.

    Subclasses provide point_numbering and distance_approx; exact worlds also
    provide exact_distance and compare without approximation.
    """

    label = "metric"
    exact = False
    point_numbering: Numbering

    def distance_approx(self, n: int, m: int, k: int, fuel: Optional[Fuel] = None) -> Fraction:
        """A rational within 2^-k of d(ν(n), ν(m))."""
        raise NotImplementedError

    def exact_distance(self, n: int, m: int) -> Optional[Fraction]:
        return None

    def embed_rational(self, q: Fraction) -> int:
        """ν-code of a rational point."""
        raise NotImplementedError

    def rational_near(self, n: int, k: int) -> Fraction:
        """A rational within 2^-k of ν(n)."""
        raise NotImplementedError

    def distance_oracle(self, n: int, m: int) -> Fraction:
        """Test oracle: exact when available, otherwise to config.ORACLE_PRECISION bits."""
        exact = self.exact_distance(n, m)
        if exact is not None:
            return exact
        return self.distance_approx(n, m, config.ORACLE_PRECISION)

    # balls

    def ball_malformed(self, code: int) -> bool:
        center, radius = ball_parts(code)
        return radius <= 0 or self.point_numbering.malformed(center)

    def ball_domain_check(self, code: int, fuel: int) -> SemiResult:
        center, radius = ball_parts(code)
        if radius <= 0:
            return SemiResult.NOT_YET
        return self.point_numbering.domain_check(center, fuel)

    def ball_oracle(self, code: int) -> bool:
        center, radius = ball_parts(code)
        oracle = self.point_numbering.oracle
        return radius > 0 and (oracle(center) if oracle is not None else not self.point_numbering.malformed(center))

    def ball_numbering(self) -> Numbering:
        return Numbering(
            label=f"balls({self.label})",
            domain_check=self.ball_domain_check,
            malformed=self.ball_malformed,
            oracle=self.ball_oracle,
            decidable=self.point_numbering.decidable,
        )

    def ball_member(self, point: int, code: Code, fuel: int = config.CHECK_FUEL) -> Membership:
        """ν(point) ∈ B(ν(c), r): exact when possible, else to config.MEMBER_PRECISION bits."""
        center, radius = ball_parts(code)
        if self.ball_malformed(code) or self.point_numbering.malformed(point):
            return Membership.OUT
        if self.exact:
            return Membership.IN if self.exact_distance(point, center) < radius else Membership.OUT
        meter = Fuel(fuel)
        try:
            for k in range(config.MEMBER_PRECISION + 1):
                d = self.distance_approx(point, center, k, meter)
                if d + dyadic(k) < radius:
                    return Membership.IN
                if d - dyadic(k) >= radius:
                    return Membership.OUT
        except FuelExhausted:
            logging.debug(f"Membership of {point} in ball {code} unresolved at fuel {fuel}")
        return Membership.UNKNOWN

    def ball_subbasis(self) -> NumberedSubbasis:
        return NumberedSubbasis(
            numbering=self.ball_numbering(),
            member_test=self.ball_member,
            label=f"balls({self.label})",
            point_label=self.point_label,
        )

    def point_label(self, point: int) -> str:
        return str(point)

    @property
    def certificate(self) -> bool:
        """Both metric relations yield strong neighborhood bases at every point."""
        return True


def strong_incl_metric(world: MetricWorld, strict: bool) -> StrongInclusion:
    """
    B(n₁,r₁) ⊆̊ B(n₂,r₂) ⟺ d(ν(n₁),ν(n₂)) + r₁ < r₂ (strict) or ≤ r₂.

    Only the strict relation is semi-decidable; its semi-decision polls
    distance_approx at k = 0, 1, ... and does not confirm that the centers are
    in dom(ν).
    """
    label = "strict-metric" if strict else "metric"

    def holds(a: Code, b: Code) -> bool:
        if not (world.ball_oracle(a) and world.ball_oracle(b)):
            return False
        (ca, ra), (cb, rb) = ball_parts(a), ball_parts(b)
        d = world.distance_oracle(ca, cb)
        return d + ra < rb if strict else d + ra <= rb

    semi = None
    if strict:
        def search(a: Code, b: Code, meter: Fuel) -> bool:
            (ca, ra), (cb, rb) = ball_parts(a), ball_parts(b)
            if ra <= 0 or rb <= 0:
                return False
            for k in count():
                charge(meter)
                if world.distance_approx(ca, cb, k, meter) + dyadic(k) + ra < rb:
                    return True

        def semi(a: Code, b: Code, fuel: int) -> SemiResult:
            return semi_decide(lambda meter: search(a, b, meter), fuel)

    return StrongInclusion(label=f"{label}({world.label})", holds=holds, semi=semi, reflexive=not strict)


# --- Cauchy representation ------------------------------------------------------

def cauchy_to_min(p: Name) -> Name:
    """output(n) = B(p(n), 2^-n)."""
    return Name(lambda n: ball_code(p.at(n), dyadic(n)), f"min({p.label})")


def cauchy_to_si(p: Name) -> Name:
    """output(n) = {B(p(n), 2^-n)} as a singleton Δ-code."""
    return Name(lambda n: FinSetCode({ball_code(p.at(n), dyadic(n))}), f"si({p.label})")


def si_to_cauchy(q: Name, fuel: Optional[Fuel] = None) -> Name:
    """
    p(n) is the center of the first ball listed in q with 0 < radius < 2^-(n+1).
    Scans forever, charging fuel per cell read, when q never gets that fine.
    """

    def entry(n: int) -> int:
        bound = dyadic(n + 1)
        for i in count():
            for member in sorted(finset_members(q.read(i, fuel))):
                center, radius = ball_parts(member)
                if 0 < radius < bound:
                    return center

    return Name(entry, f"cauchy({q.label})")


def max_to_cauchy(f: Name, fuel: Optional[Fuel] = None) -> Name:
    """p(n) is the center of the first ball code in f with 0 < radius ≤ 2^-(n+1)."""

    def entry(n: int) -> int:
        bound = dyadic(n + 1)
        for i in count():
            center, radius = ball_parts(f.read(i, fuel))
            if 0 < radius <= bound:
                return center

    return Name(entry, f"cauchy({f.label})")


def cauchy_name_of_rational(x: Fraction) -> Name:
    """a_n = floor(4^n x) / 4^n, so |a_n - x| < 4^-n."""
    x = Fraction(x)
    return Name(
        lambda n: rational_numbering_code(Fraction(math.floor(x * 4**n), 4**n)),
        f"cauchy({x})",
    )


def validate_cauchy_prefix(prefix: Sequence[int], world: MetricWorld, fuel: int = config.CHECK_FUEL) -> Verdict:
    """Check d(ν(p(i)), ν(p(j))) < 2^-j for all i > j in the prefix."""
    unresolved = False
    for code in prefix:
        status = world.point_numbering.in_domain(code, fuel)
        if status is False:
            return Verdict.VIOLATION
        if status is None:
            unresolved = True
    if unresolved:
        return Verdict.UNKNOWN
    for j in range(len(prefix)):
        bound = dyadic(j)
        for i in range(j + 1, len(prefix)):
            verdict = _modulus_pair(world, prefix[i], prefix[j], bound, fuel)
            if verdict is Verdict.VIOLATION:
                logging.debug(f"Positions {j} and {i} are at least {bound} apart")
                return verdict
            if verdict is Verdict.UNKNOWN:
                unresolved = True
    return Verdict.UNKNOWN if unresolved else Verdict.CONSISTENT


def _modulus_pair(world: MetricWorld, a: int, b: int, bound: Fraction, fuel: int) -> Verdict:
    if world.exact:
        return Verdict.CONSISTENT if world.exact_distance(a, b) < bound else Verdict.VIOLATION
    meter = Fuel(fuel)
    try:
        for k in range(config.MEMBER_PRECISION + 1):
            d = world.distance_approx(a, b, k, meter)
            if d - dyadic(k) >= bound:
                return Verdict.VIOLATION
            if d + dyadic(k) < bound:
                return Verdict.CONSISTENT
    except FuelExhausted:
        pass
    return Verdict.UNKNOWN


def shrinking_balls(world: MetricWorld, code: int, depth: int = 3) -> List[int]:
    """
    Balls strictly inside B(c, r): B(c, r/2^j) and balls of radius r/2^(j+1)
    centered at rationals within r/4 of c, for j = 1..depth.
    """
    center, radius = ball_parts(code)
    near = world.rational_near(center, precision_for(radius / 8))
    shifts = [world.embed_rational(near + radius / 4), world.embed_rational(near - radius / 4)]
    balls = []
    for j in range(1, depth + 1):
        balls.append(ball_code(center, radius / 2**j))
        balls.extend(ball_code(shifted, radius / 2 ** (j + 1)) for shifted in shifts)
    return balls
