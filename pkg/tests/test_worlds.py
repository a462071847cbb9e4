from fractions import Fraction

import pytest

from models.basis import Membership, Verdict
from models.metric import ball_code, dyadic
from models.worlds import (
    DiscreteWorld,
    KSpaceWorld,
    RationalRealWorld,
    RegistryRealWorld,
    SingletonWorld,
    enumerate_max_name,
    filter_max_name,
    kspace_min_name,
    make_world,
    parse_world_spec,
)
from utils.errors import CodingError, FuelExhausted, WorldError
from utils.kernel import FinSetCode, Fuel, SemiResult, check_fuel_monotone, pair


def test_make_world_identifiers():
    assert isinstance(make_world("R-rational"), RationalRealWorld)
    assert isinstance(make_world("N-discrete"), DiscreteWorld)
    assert isinstance(make_world("singleton"), SingletonWorld)
    assert make_world("K-space --fuel 1000").fuel == 1000
    registry = make_world("R-registry --with pi,e,divergent:3")
    assert isinstance(registry, RegistryRealWorld)
    assert [slot.label for slot in registry.slots] == ["pi", "e", "divergent", "divergent", "divergent"]
    assert parse_world_spec("K-space").fuel == 1000


@pytest.mark.parametrize("spec", ["torus", "", "K-space --fuel", "K-space --fuel -3", "K-space --speed 2",
                                  "R-registry --with tau", "R-rational 'unclosed",
                                  "R-registry --with divergent:abc", "R-registry --with pi,divergent:-2"])
def test_make_world_rejects_bad_strings(spec):
    with pytest.raises(WorldError):
        make_world(spec)


def test_parse_ball_literals(rational_world, cq):
    assert rational_world.parse_ball("B(0,1)") == 5
    assert rational_world.parse_ball(" B( 1/2 , 1/4 ) ") == ball_code(cq(Fraction(1, 2)), Fraction(1, 4))
    for bad in ["B(0)", "B(0,0)", "B(0,-1)", "ball(0,1)", "B(x,1)"]:
        with pytest.raises(CodingError):
            rational_world.parse_ball(bad)


def test_max_name_lists_containing_balls(rational_world, cq):
    zero = enumerate_max_name(rational_world, cq(0))
    assert 5 in zero.prefix(4)
    half = cq(Fraction(1, 2))
    name = rational_world.name_of(half, "max")
    assert rational_world.representation("max").validate(name.prefix(64), half) is Verdict.CONSISTENT
    listed = set(name.prefix(400))
    for code in range(200):
        if rational_world.ball_member(half, code) is Membership.IN:
            assert code in listed


def test_filtered_max_name_stalls_on_a_divergent_center():
    world = make_world("R-registry --with divergent")
    zero = world.embed_rational(Fraction(0))
    fuel = Fuel(10**4)
    name = filter_max_name(world, zero, fuel)
    assert name.at(0) == ball_code(0, Fraction(1))
    with pytest.raises(FuelExhausted):
        name.at(50)
    assert fuel.exhausted


def test_filtered_max_name_stalls_on_a_boundary(rational_world, cq):
    fuel = Fuel(2000)
    name = filter_max_name(rational_world, cq(0), fuel)
    assert name.at(0) == 5
    assert ball_code(cq(1), Fraction(1)) == 12
    with pytest.raises(FuelExhausted):
        name.at(12)
    assert fuel.exhausted


def test_max_names_need_exact_membership():
    for spec in ["R-registry", "K-space --fuel 1000", "singleton"]:
        with pytest.raises(WorldError):
            enumerate_max_name(make_world(spec), 0)


def test_registry_approximants_are_consistent(registry_world):
    for index in range(len(registry_world.slots)):
        code = registry_world.slot_code(index)
        reference = registry_world.approximant(code, 100)
        for k in range(41):
            a, b = registry_world.approximant(code, k), registry_world.approximant(code, k + 1)
            assert abs(a - b) <= dyadic(k) + dyadic(k + 1)
            assert abs(a - reference) <= dyadic(k) + dyadic(100)


def test_registry_constants(registry_world):
    pi = registry_world.approximant(registry_world.parse_point("pi"), 30)
    e = registry_world.approximant(registry_world.parse_point("e"), 30)
    root = registry_world.approximant(registry_world.parse_point("sqrt2"), 30)
    assert abs(pi - Fraction(314159265358979, 10**14)) < dyadic(29)
    assert abs(e - Fraction(271828182845905, 10**14)) < dyadic(29)
    assert abs(root * root - 2) < dyadic(26)


def test_registry_domain():
    world = make_world("R-registry --with pi,divergent,fake:20")
    numbering = world.point_numbering
    assert numbering.in_domain(world.slot_code(0)) is True
    assert numbering.in_domain(world.slot_code(1)) is None
    assert numbering.in_domain(world.slot_code(2)) is None
    assert numbering.in_domain(world.embed_rational(Fraction(-3, 7))) is True
    assert numbering.in_domain(world.slot_code(3)) is False
    assert numbering.in_domain(pair(2, 0)) is False
    assert world.point_label(world.slot_code(2)) == "fake:20"


def test_registry_domain_checks_are_monotone_in_fuel(rng):
    world = make_world("R-registry --with pi,divergent,fake:20")
    points = world.point_numbering.domain_check
    balls = world.subbasis().numbering.domain_check
    codes = [rng.randrange(64) for _ in range(100)] + [world.slot_code(i) for i in range(4)]
    ball_codes = world.sample_codes(rng, 60) + [ball_code(world.slot_code(i), Fraction(1)) for i in range(4)]
    for _ in range(1000):
        code, ball = rng.choice(codes), rng.choice(ball_codes)
        fuel = rng.choice([1, 2, 8, 32])
        assert check_fuel_monotone(lambda f: points(code, f), fuel)
        assert check_fuel_monotone(lambda f: balls(ball, f), fuel)


def test_non_halting_slots_eat_the_fuel():
    world = make_world("R-registry --with divergent,fake:20")
    fuel = Fuel(50)
    with pytest.raises(FuelExhausted):
        world.approximant(world.slot_code(0), 3, fuel)
    assert fuel.exhausted
    assert world.approximant(world.slot_code(1), 19) == 0
    with pytest.raises(FuelExhausted):
        world.approximant(world.slot_code(1), 20, Fuel(50))
    with pytest.raises(WorldError):
        world.approximant(world.slot_code(1), 20)


def test_registry_membership_by_approximation(registry_world):
    pi = registry_world.parse_point("pi")
    ball = registry_world.parse_ball
    assert registry_world.ball_member(pi, ball("B(3,1/4)")) is Membership.IN
    assert registry_world.ball_member(pi, ball("B(3,1/8)")) is Membership.OUT
    assert registry_world.ball_member(pi, ball_code(pi, Fraction(1, 2**20))) is Membership.IN


def test_kspace_kernel(kspace_world):
    assert kspace_world.in_kernel(20)
    assert not kspace_world.in_kernel(22)
    assert not kspace_world.in_kernel(7)
    assert kspace_min_name(kspace_world, 7).prefix(3) == [ball_code(kspace_world.parse_point("7"), Fraction(1, 4))] * 3
    with pytest.raises(WorldError):
        kspace_min_name(kspace_world, 4)


def test_kspace_domain_is_monotone_in_fuel(cq):
    world = KSpaceWorld(2000)
    near_twenty, near_twenty_two = cq(Fraction(81, 4)), cq(Fraction(89, 4))
    domain = world.point_numbering.domain_check
    assert domain(near_twenty, 1000) is SemiResult.ACCEPT
    assert domain(near_twenty_two, 1000) is SemiResult.NOT_YET
    assert domain(near_twenty_two, 1100) is SemiResult.ACCEPT
    assert domain(cq(Fraction(29, 4)), 2000) is SemiResult.NOT_YET
    assert domain(cq(7), 1) is SemiResult.ACCEPT
    for code in [near_twenty, near_twenty_two, cq(Fraction(29, 4)), cq(3)]:
        for fuel in [1, 10, 500, 1000, 1100]:
            assert check_fuel_monotone(lambda f: domain(code, f), fuel)


def test_kspace_subbasis_is_restricted(kspace_world, cq):
    sb = kspace_world.subbasis()
    around_seven = kspace_world.parse_ball("B(7,1/4)")
    assert sb.member(cq(7), around_seven) is Membership.IN
    assert sb.member(cq(Fraction(57, 8)), around_seven) is Membership.UNKNOWN
    assert sb.member(cq(Fraction(81, 4)), kspace_world.parse_ball("B(20,1/2)")) is Membership.IN


def test_kspace_names_of_integers(kspace_world, cq):
    seven = kspace_world.name_of(cq(7), "min")
    assert seven.at(5) == kspace_world.parse_ball("B(7,1/4)")
    twenty = kspace_world.name_of(cq(20), "min")
    assert twenty.at(1) == ball_code(cq(20), Fraction(1, 2))


def test_singleton_membership():
    world = SingletonWorld()
    zero, alias, late5 = world.parse_point("zero"), world.parse_point("zero-alias"), world.parse_point("late-5")
    assert world.member(zero, zero) is Membership.IN
    assert world.member(zero, late5) is Membership.OUT
    assert world.member(zero, alias, fuel=100) is Membership.UNKNOWN
    assert world.inclusion().holds(zero, alias)
    assert not world.inclusion().holds(zero, late5)
    assert world.inclusion().semi is None


def test_naive_singleton_equality_is_unsound():
    world = SingletonWorld()
    zero, late40, late_million = (world.parse_point(label) for label in ["zero", "late-40", "late-1000000"])
    assert world.naive_equality_semi(zero, late_million, 100) is SemiResult.ACCEPT
    assert not world.inclusion().holds(zero, late_million)
    assert world.naive_equality_semi(zero, late40, 60) is SemiResult.ACCEPT
    assert world.naive_equality_semi(zero, late40, 120) is SemiResult.NOT_YET
    assert not check_fuel_monotone(lambda f: world.naive_equality_semi(zero, late40, f), 60)


def test_singleton_names():
    world = SingletonWorld()
    late5 = world.parse_point("late-5")
    assert world.name_of(late5, "min").prefix(2) == [late5, late5]
    assert set(world.name_of(late5, "max").prefix(4)) == {late5, world.parse_point("late-5-alias")}
    assert world.name_of(late5, "si").at(0) == FinSetCode({late5})
    with pytest.raises(CodingError):
        world.parse_point("late-6")


def test_discrete_names_coincide():
    world = DiscreteWorld()
    assert world.name_of(3, "min").prefix(3) == [3, 3, 3]
    assert world.name_of(3, "max").prefix(3) == [3, 3, 3]
    assert world.name_of(3, "si").at(0) == 8
    assert world.member(3, 3) is Membership.IN
    assert world.member(3, 4) is Membership.OUT
    with pytest.raises(WorldError):
        world.name_of(3, "cauchy")
