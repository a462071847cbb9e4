from fractions import Fraction

import pytest

from models.basis import Membership, RepresentationKind, StrongInclusion, Verdict, induced_code, induced_subbasis
from models.metric import ball_code, ball_parts, dyadic
from models.representation import (
    Representation,
    cover_to_open_name,
    embedding_translation,
    id_translation,
    make_representation,
    member_monitor,
    open_set_monitor,
    restrict,
)
from models.worlds import make_world
from utils.errors import RepresentationError
from utils.kernel import FinSetCode, Name, SemiResult, check_fuel_monotone


def test_make_representation_needs_reflexivity_or_certificate(rational_world):
    sb = rational_world.subbasis()
    strict = RepresentationKind.strong(rational_world.inclusion(True))
    with pytest.raises(RepresentationError):
        make_representation(strict, sb)
    assert make_representation(strict, sb, certificate=True).kind.si.label.startswith("strict-metric")
    assert make_representation(RepresentationKind.strong(rational_world.inclusion(False)), sb).certificate is False
    assert make_representation(RepresentationKind.maximal(), sb).kind.si is None


def test_make_representation_runs_the_axiom_check(rational_world, rng):
    everything = RepresentationKind.strong(StrongInclusion("always", holds=lambda a, b: True, reflexive=True))
    codes = rational_world.sample_codes(rng, 50)
    points = rational_world.sample_points(rng, 50)
    with pytest.raises(RepresentationError, match="axiom check"):
        make_representation(everything, rational_world.subbasis(), sample_codes=codes, sample_points=points)


def test_identity_translations(rational_world):
    maximal = rational_world.representation("max")
    strong = rational_world.representation("si")
    minimal = rational_world.representation("min")

    wrapped = id_translation(maximal, strong)(Name.from_prefix([5, 14]))
    assert wrapped.prefix(2) == [FinSetCode({5}), FinSetCode({14})]
    assert wrapped.at(0) == 32

    assert id_translation(maximal, minimal)(Name.from_prefix([5, 14])).prefix(2) == [5, 14]

    over_induced = Representation(RepresentationKind.minimal(), induced_subbasis(strong.subbasis))
    entries = [induced_code([5]), induced_code([5, 14])]
    assert id_translation(strong, over_induced)(Name.from_prefix(entries)).prefix(2) == entries

    with pytest.raises(RepresentationError):
        id_translation(minimal, maximal)
    with pytest.raises(RepresentationError):
        id_translation(strong, minimal)


def test_max_names_become_valid_si_names(rational_world, cq):
    third = cq(Fraction(1, 3))
    maximal = rational_world.representation("max")
    strong = rational_world.representation("si")
    name = rational_world.name_of(third, "max")
    assert maximal.validate(name.prefix(12), third) is Verdict.CONSISTENT
    translated = id_translation(maximal, strong)(name)
    assert strong.validate(translated.prefix(12), third) is Verdict.CONSISTENT


def _unit_interval(world):
    def inside(point, fuel):
        return Membership.IN if 0 <= world.value(point) <= 1 else Membership.OUT

    return inside


def test_restriction_filters_points_outside_the_subset(rational_world, cq):
    ambient = rational_world.representation("max")
    restricted = restrict(ambient, _unit_interval(rational_world), "[0,1]")
    ball = rational_world.parse_ball
    assert restricted.validate([ball("B(1/2,1/4)")], cq(Fraction(1, 2))) is Verdict.CONSISTENT
    assert ambient.validate([ball("B(2,1)")], cq(2)) is Verdict.CONSISTENT
    assert restricted.validate([ball("B(2,1)")], cq(2)) is Verdict.VIOLATION
    assert restricted.restricted_from == ambient


def test_embedding_is_the_identity_on_si_names(rational_world, cq):
    ambient = rational_world.representation("si")
    restricted = restrict(ambient, _unit_interval(rational_world))
    half = cq(Fraction(1, 2))
    name = rational_world.name_of(half, "si")
    embedded = embedding_translation(restricted, ambient)(name)
    assert embedded.prefix(6) == name.prefix(6)
    assert restricted.validate(name.prefix(6), half) is Verdict.CONSISTENT
    assert ambient.validate(embedded.prefix(6), half) is Verdict.CONSISTENT
    with pytest.raises(RepresentationError):
        embedding_translation(restrict(rational_world.representation("max"), _unit_interval(rational_world)),
                              rational_world.representation("max"))
    with pytest.raises(RepresentationError):
        embedding_translation(restricted, rational_world.representation("si", strict=False))


def test_monitor_accepts_inside_and_waits_outside(rational_world):
    ball = rational_world.parse_ball
    rep = rational_world.representation("si")
    name = Name.constant(FinSetCode({ball("B(21/64,1/64)")}))
    assert member_monitor(rep, ball("B(0,1)")).poll(name, 10**4) is SemiResult.ACCEPT
    outside = member_monitor(rep, ball("B(2,1/4)"))
    for fuel in (100, 1000, 10**4):
        assert outside.poll(name, fuel) is SemiResult.NOT_YET
        assert outside.last_used == fuel


def test_monitor_on_a_shrinking_name(rational_world, cq):
    rep = rational_world.representation("si")
    name = Name(lambda k: FinSetCode({ball_code(cq(0), dyadic(k))}))
    monitor = member_monitor(rep, rational_world.parse_ball("B(0,1)"))
    assert monitor.poll(name, 10**4) is SemiResult.ACCEPT
    assert 0 < monitor.last_used <= 10**4


def test_monitor_is_sound_on_sampled_names(rational_world, rng):
    rep = rational_world.representation("si")
    points = rational_world.sample_points(rng, 100)
    targets = rational_world.sample_codes(rng, 100)
    for _ in range(1000):
        point, target = rng.choice(points), rng.choice(targets)
        result = member_monitor(rep, target).poll(rational_world.name_of(point, "si"), 300)
        if result is SemiResult.ACCEPT:
            assert rational_world.ball_member(point, target) is Membership.IN


def test_monitor_is_complete_on_sampled_names(rational_world, rng, cq):
    rep = rational_world.representation("si")
    points = [cq(Fraction(rng.randint(-48, 48), 16)) for _ in range(100)]
    targets = rational_world.sample_codes(rng, 200)
    checked = 0
    for point in points:
        x = rational_world.value(point)
        for target in targets:
            center, radius = ball_parts(target)
            gap = radius - abs(x - rational_world.value(center))
            if gap < dyadic(10):
                continue
            assert member_monitor(rep, target).poll(rational_world.name_of(point, "si"), 10**5) is SemiResult.ACCEPT
            checked += 1
            break
    assert checked >= 80


def test_monitor_needs_a_semi_decidable_relation():
    singleton = make_world("singleton")
    with pytest.raises(RepresentationError):
        member_monitor(singleton.representation("si"), 0)
    rational = make_world("R-rational")
    with pytest.raises(RepresentationError):
        member_monitor(rational.representation("max"), 5)
    with pytest.raises(RepresentationError):
        member_monitor(rational.representation("si", strict=False), 5)


def test_open_set_monitor(rational_world, cq):
    ball = rational_world.parse_ball
    rep = rational_world.representation("si")
    cover = Name.from_prefix([ball("B(0,1/2)"), ball("B(1,1/2)")])
    union = open_set_monitor(rep, cover_to_open_name(cover))
    assert union.poll(rational_world.name_of(cq(1), "si"), 10**4) is SemiResult.ACCEPT
    assert union.poll(rational_world.name_of(cq(3), "si"), 5000) is SemiResult.NOT_YET
    empty = open_set_monitor(rep, Name.constant(0))
    assert empty.poll(rational_world.name_of(cq(0), "si"), 2000) is SemiResult.NOT_YET


def test_monitors_are_monotone_in_fuel(rational_world, rng):
    rep = rational_world.representation("si")
    points = rational_world.sample_points(rng, 50)
    targets = rational_world.sample_codes(rng, 100)
    accepted = 0
    for _ in range(1000):
        name = rational_world.name_of(rng.choice(points), "si")
        member = member_monitor(rep, rng.choice(targets))
        union = open_set_monitor(rep, cover_to_open_name(Name.from_prefix(rng.sample(targets, 3))))
        fuel = rng.choice([2, 8, 32, 128])
        assert check_fuel_monotone(lambda f: member.poll(name, f), fuel)
        assert check_fuel_monotone(lambda f: union.poll(name, f), fuel)
        accepted += member.poll(name, 256) is SemiResult.ACCEPT
    assert accepted > 0
