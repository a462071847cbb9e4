import random
from fractions import Fraction

from models.basis import (
    Membership,
    RepresentationKind,
    StrongInclusion,
    Verdict,
    check_axioms,
    conjoin,
    decidable_numbering,
    equality_inclusion,
    extend_strong_inclusion,
    extend_to_sequences,
    induced_code,
    induced_subbasis,
    validate_prefix,
)
from models.metric import ball_code
from utils.kernel import SemiResult, check_fuel_monotone, finset_decode


def test_induced_code_examples():
    assert induced_code([]) == 0
    assert induced_code([0, 2]) == 5
    assert induced_code([3]) == 8


def test_conjoin():
    assert conjoin([]) is Membership.IN
    assert conjoin([Membership.IN, Membership.UNKNOWN]) is Membership.UNKNOWN
    assert conjoin([Membership.UNKNOWN, Membership.OUT]) is Membership.OUT


def test_decidable_numbering_domain():
    evens = decidable_numbering("even", lambda n: n % 2 == 0)
    assert evens.in_domain(4) is True
    assert evens.in_domain(3) is False
    assert evens.domain_check(4, 0) is SemiResult.NOT_YET


def test_extended_metric_inclusion(rational_world):
    ball = rational_world.parse_ball
    si = extend_strong_inclusion(rational_world.inclusion(strict=True))
    small = induced_code([ball("B(0,1/4)")])
    large = induced_code([ball("B(0,1/2)"), ball("B(0,1)")])
    assert si.holds(small, large)
    assert not si.holds(large, small)
    assert si.semi(small, large, 1000) is SemiResult.ACCEPT
    assert si.semi(large, small, 1000) is SemiResult.NOT_YET
    # the empty intersection is the whole space
    assert si.holds(large, induced_code([]))
    assert si.semi(large, induced_code([]), 1) is SemiResult.ACCEPT
    assert not si.holds(induced_code([]), small)


def test_equality_extension_is_reverse_inclusion_of_sets():
    si = extend_strong_inclusion(equality_inclusion())
    for n1 in range(256):
        for n2 in range(256):
            assert si.holds(n1, n2) == (finset_decode(n2) <= finset_decode(n1))


def test_sequence_extension(rational_world):
    ball = rational_world.parse_ball
    sequences = extend_to_sequences(rational_world.inclusion(strict=True))
    assert sequences.holds([ball("B(0,1/4)")], [ball("B(0,1/2)")])
    assert sequences.holds([ball("B(5,1)")], [])
    assert not sequences.holds([], [ball("B(0,1/2)")])
    assert sequences.semi([ball("B(0,1/4)")], [ball("B(0,1/2)")], 500) is SemiResult.ACCEPT


def test_metric_relations_pass_axiom_check(rational_world, rng):
    codes = rational_world.sample_codes(rng, 200)
    points = rational_world.sample_points(rng, 100)
    sb = rational_world.subbasis()
    for strict in (True, False):
        report = check_axioms(rational_world.inclusion(strict), sb, codes, points)
        assert report.passed, report.lines()[:3]
        assert report.checked == 1000


def test_extended_relation_passes_axiom_check(rational_world, rng):
    codes = rational_world.sample_codes(rng, 60)
    points = rational_world.sample_points(rng, 50)
    induced = [induced_code(rng.sample(codes, rng.randint(1, 3))) for _ in range(80)]
    si = extend_strong_inclusion(rational_world.inclusion(strict=True))
    report = check_axioms(si, induced_subbasis(rational_world.subbasis()), induced, points)
    assert report.passed, report.lines()[:3]


def test_extended_semi_decisions_are_monotone_in_fuel(rational_world, rng):
    strict = rational_world.inclusion(True)
    induced, sequences = extend_strong_inclusion(strict), extend_to_sequences(strict)
    codes = rational_world.sample_codes(rng, 60)
    for _ in range(1000):
        left = rng.sample(codes, rng.randint(0, 3))
        right = rng.sample(codes, rng.randint(0, 3))
        fuel = rng.choice([2, 8, 32, 128])
        assert check_fuel_monotone(lambda f: induced.semi(induced_code(left), induced_code(right), f), fuel)
        assert check_fuel_monotone(lambda f: sequences.semi(left, right, f), fuel)


def test_sequence_extension_is_transitive(rational_world, cq, rng):
    pool = [ball_code(cq(Fraction(n, 4)), radius)
            for n in range(-4, 5)
            for radius in (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2))]
    sequences = extend_to_sequences(rational_world.inclusion(strict=True))
    premises = 0
    for _ in range(2000):
        a, b, c = (rng.sample(pool, rng.randint(0, 3)) for _ in range(3))
        if sequences.holds(a, b) and sequences.holds(b, c):
            premises += 1
            assert sequences.holds(a, c), (a, b, c)
    assert premises >= 50


def test_non_strict_extension_passes_axiom_check(rational_world, rng):
    codes = rational_world.sample_codes(rng, 60)
    points = rational_world.sample_points(rng, 50)
    induced = [induced_code(rng.sample(codes, rng.randint(1, 3))) for _ in range(80)]
    si = extend_strong_inclusion(rational_world.inclusion(strict=False))
    assert si.semi is None
    report = check_axioms(si, induced_subbasis(rational_world.subbasis()), induced, points)
    assert report.passed, report.lines()[:3]
    assert report.checked == 1000


def test_equality_passes_axiom_check(rational_world, rng):
    codes = rational_world.sample_codes(rng, 100)
    points = rational_world.sample_points(rng, 50)
    report = check_axioms(equality_inclusion(), rational_world.subbasis(), codes, points)
    assert report.passed


def test_axiom_check_catches_a_relation_that_ignores_sets(rational_world, rng):
    codes = rational_world.sample_codes(rng, 100)
    points = rational_world.sample_points(rng, 100)
    everything = StrongInclusion("always", holds=lambda a, b: True)
    report = check_axioms(everything, rational_world.subbasis(), codes, points)
    assert not report.passed
    assert {violation.kind for violation in report.violations} == {"inclusion"}
    assert report.lines()[0].startswith("VIOLATION inclusion a=")


def test_axiom_check_catches_irreflexivity(rational_world, rng):
    codes = rational_world.sample_codes(rng, 20)
    nothing = StrongInclusion("never", holds=lambda a, b: False, reflexive=True)
    report = check_axioms(nothing, rational_world.subbasis(), codes, [])
    assert {violation.kind for violation in report.violations} == {"reflexivity"}


def test_validate_prefix(rational_world, cq):
    ball = rational_world.parse_ball
    third = cq(Fraction(1, 3))
    sb = rational_world.subbasis()
    minimal = RepresentationKind.minimal()
    assert validate_prefix(minimal, sb, [ball("B(0,1)"), ball("B(1/4,1/2)")], third) is Verdict.CONSISTENT
    assert validate_prefix(minimal, sb, [ball("B(0,1)"), ball("B(0,1/8)")], third) is Verdict.VIOLATION
    assert validate_prefix(minimal, sb, [], third) is Verdict.CONSISTENT

    strong = RepresentationKind.strong(rational_world.inclusion(True))
    entry = induced_code([ball("B(0,1)"), ball("B(1/2,1/4)")])
    assert validate_prefix(strong, sb, [entry], third) is Verdict.CONSISTENT
    assert validate_prefix(strong, sb, [entry], cq(Fraction(3, 4))) is Verdict.VIOLATION


def test_validate_prefix_rejects_codes_outside_the_domain(rational_world, cq):
    sb = rational_world.subbasis()
    zero_radius = 0
    assert validate_prefix(RepresentationKind.maximal(), sb, [zero_radius], cq(0)) is Verdict.VIOLATION


def test_sampled_pairs_are_reproducible(rational_world):
    codes = rational_world.sample_codes(random.Random(1), 50)
    points = rational_world.sample_points(random.Random(1), 20)
    si = rational_world.inclusion(True)
    first = check_axioms(si, rational_world.subbasis(), codes, points, pair_sample=100, seed=3)
    second = check_axioms(si, rational_world.subbasis(), codes, points, pair_sample=100, seed=3)
    assert first.checked == second.checked == 100
    assert first.skipped == second.skipped
