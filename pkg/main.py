#!/usr/bin/env python3
"""
Subbasis representations command line

Generate names of points, translate names between representations, validate
name prefixes, poll membership monitors and run the sampled axiom and adapter
checks.

Exit status: 0 on success, 1 when a check or probe finds a violation, 2 on bad
flags or literals, 3 when the fuel runs out (partial output is kept).
"""

import argparse
import logging
import random
import sys
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import ValidationError

import config
from models.basis import (
    RepresentationKind,
    Verdict,
    check_axioms,
    equality_inclusion,
    extend_strong_inclusion,
    induced_code,
    induced_subbasis,
)
from models.equivalence import (
    cauchy_selector,
    check_adapter,
    embedding_cover,
    identity_adapter,
    identity_selector,
    lacombe_adapter_check,
    nogina_adapter_check,
    rational_cover,
    rational_vs_creal_adapters,
)
from models.metric import MetricWorld, cauchy_to_min, cauchy_to_si, max_to_cauchy, si_to_cauchy, validate_cauchy_prefix
from models.representation import MembershipMonitor, Representation, Translator, id_translation, member_monitor
from models.schemas import CheckReport, CommandOptions
from models.worlds import NAME_KINDS, RationalRealWorld, RegistryRealWorld, World, make_world
from utils.errors import CodingError, FuelExhausted, NameExhausted, RepresentationError, WorldError
from utils.kernel import Fuel, Name, SemiResult
from utils.report_utils import load_prefix, open_input, open_output, write_entry, write_reports

logging.basicConfig(
    level=logging.INFO,
    format=config.LOG_FORMAT,
    datefmt=config.LOG_DATE_FORMAT,
)

ADAPTERS = [
    "rational-to-creal",
    "creal-to-rational",
    "identity",
    "lacombe-embedding",
    "lacombe-rational",
    "nogina-cauchy",
    "nogina-identity",
]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--world", default=config.DEFAULT_WORLD,
                        help='World string, e.g. "R-rational", "K-space --fuel 1000", "R-registry --with pi,e,divergent:3"')
    common.add_argument("--fuel", type=int, default=config.DEFAULT_FUEL, help="Step budget")
    common.add_argument("--prefix", type=int, default=config.DEFAULT_PREFIX, help="Name positions to emit")
    common.add_argument("--out", default=None, help="Output file (default: stdout)")
    common.add_argument("--verbose", action="store_true", help="Print read bounds and progress bars")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")

    parser = argparse.ArgumentParser(description="Representations of points from numbered subbases")
    commands = parser.add_subparsers(dest="command", required=True)

    translate = commands.add_parser("translate", parents=[common], help="Translate a name prefix")
    translate.add_argument("--src", required=True, choices=NAME_KINDS, help="Representation of the input name")
    translate.add_argument("--dst", required=True, choices=NAME_KINDS, help="Representation of the output name")
    translate.add_argument("--input", default=None, help="Input prefix file (default: stdin)")
    translate.add_argument("--point", default=None, help="Generate the input name from this point instead")
    translate.add_argument("--input-kind", default=None, choices=NAME_KINDS,
                           help="Generator used with --point (default: --src)")

    probe = commands.add_parser("probe", parents=[common], help="Validate a name prefix against a point")
    probe.add_argument("--kind", required=True, choices=NAME_KINDS)
    probe.add_argument("--point", required=True)
    probe.add_argument("--input", default=None, help="Prefix file (default: stdin)")
    probe.add_argument("--non-strict", action="store_true", help="Tag SI names with the non-strict relation")

    member = commands.add_parser("member", parents=[common], help="Semi-decide membership from an SI name")
    member.add_argument("--target", required=True, help='Basic set, e.g. "B(0,1)"')
    member.add_argument("--point", default=None, help="Generate the SI name from this point instead of reading it")
    member.add_argument("--input", default=None, help="SI name prefix file (default: stdin)")

    axioms = commands.add_parser("check-axioms", parents=[common], help="Sampled strong-inclusion axiom check")
    axioms.add_argument("--relation", default="strict", choices=["strict", "non-strict", "equality"])
    axioms.add_argument("--induced", action="store_true", help="Check the extension to induced-basis codes")
    axioms.add_argument("--samples", type=int, default=config.AXIOM_PAIR_SAMPLE, help="Code pairs to draw")

    adapter = commands.add_parser("check-adapter", parents=[common], help="Sampled basis-equivalence check")
    adapter.add_argument("--adapter", required=True, choices=ADAPTERS)
    adapter.add_argument("--samples", type=int, default=config.ADAPTER_SAMPLE, help="Sequences and (point, code) pairs")

    gen = commands.add_parser("gen-name", parents=[common], help="Emit a name prefix of a point")
    gen.add_argument("--point", required=True)
    gen.add_argument("--kind", required=True, choices=NAME_KINDS)

    return parser


# --- translate ---------------------------------------------------------------------

def pick_translator(world: World, src: str, dst: str, fuel: Fuel) -> Translator:
    """The realizer from src-names to dst-names in this world."""
    metric: Dict[Tuple[str, str], Callable[[Name], Name]] = {
        ("cauchy", "min"): cauchy_to_min,
        ("cauchy", "si"): cauchy_to_si,
        ("si", "cauchy"): lambda name: si_to_cauchy(name, fuel),
        ("max", "cauchy"): lambda name: max_to_cauchy(name, fuel),
    }
    if (src, dst) in metric:
        if not isinstance(world, MetricWorld):
            raise WorldError(f"{world.identifier} has no Cauchy representation")
        bound = (lambda k: k + 1) if src == "cauchy" else None
        return Translator(f"{src}-to-{dst}", metric[(src, dst)], bound)
    if "cauchy" in (src, dst):
        raise RepresentationError(f"no realizer from {src} to {dst}")
    source = world.representation(src)
    if (src, dst) == ("si", "min"):
        target = Representation(RepresentationKind.minimal(), induced_subbasis(source.subbasis))
    else:
        target = world.representation(dst)
    return id_translation(source, target)


def emit_translation(args: argparse.Namespace, translator: Translator, source: Name, fuel: Fuel,
                     options: CommandOptions) -> int:
    output = translator(source)
    with open_output(args.out) as out:
        for k in range(options.prefix):
            try:
                write_entry(out, output.at(k))
            except NameExhausted as e:
                logging.warning(f"Input ended after {e.length} positions, {k} outputs written")
                return 0
            except FuelExhausted as e:
                logging.error(f"{translator.label}: {e} before output position {k}")
                return 3
            if args.verbose:
                bound = f", bound {translator.read_bound(k)}" if translator.read_bound else ""
                logging.info(f"Output {k} read {source.highest_read + 1} input positions{bound}")
    logging.info(f"{translator.label}: {options.prefix} positions, {fuel.used} steps")
    return 0


def run_translate(args: argparse.Namespace, world: World, options: CommandOptions) -> int:
    fuel = Fuel(options.fuel)
    translator = pick_translator(world, args.src, args.dst, fuel)
    if args.point is not None:
        source = world.name_of(world.parse_point(args.point), args.input_kind or args.src)
        return emit_translation(args, translator, source, fuel, options)
    with open_input(args.input) as lines:
        return emit_translation(args, translator, Name.from_lines(lines), fuel, options)


# --- probe and member ----------------------------------------------------------------

def run_probe(args: argparse.Namespace, world: World, options: CommandOptions) -> int:
    point = world.parse_point(args.point)
    prefix = load_prefix(args.input)
    if args.kind == "cauchy":
        if not isinstance(world, MetricWorld):
            raise WorldError(f"{world.identifier} has no Cauchy representation")
        verdict = validate_cauchy_prefix(prefix, world, options.fuel)
    else:
        verdict = world.representation(args.kind, strict=not args.non_strict).validate(prefix, point, options.fuel)
    with open_output(args.out) as out:
        out.write(f"{verdict.value.upper()}\n")
    return 1 if verdict is Verdict.VIOLATION else 0


def poll_member(args: argparse.Namespace, monitor: MembershipMonitor, name: Name, options: CommandOptions) -> int:
    result = monitor.poll(name, options.fuel)
    with open_output(args.out) as out:
        out.write(f"{'ACCEPT' if result is SemiResult.ACCEPT else 'NOT-YET'} fuel={monitor.last_used}\n")
    if args.verbose:
        logging.info(f"Monitor read {name.highest_read + 1} name positions")
    return 0 if result is SemiResult.ACCEPT else 3


def run_member(args: argparse.Namespace, world: World, options: CommandOptions) -> int:
    target = world.parse_target(args.target)
    monitor = member_monitor(world.representation("si", strict=True), target)
    if args.point is not None:
        return poll_member(args, monitor, world.name_of(world.parse_point(args.point), "si"), options)
    with open_input(args.input) as lines:
        return poll_member(args, monitor, Name.from_lines(lines), options)


# --- checks --------------------------------------------------------------------------

def run_check_axioms(args: argparse.Namespace, world: World, options: CommandOptions) -> int:
    rng = random.Random(config.SAMPLE_SEED)
    codes = world.sample_codes(rng, 200)
    points = world.sample_points(rng, config.POINT_SAMPLE)
    si = equality_inclusion() if args.relation == "equality" else world.inclusion(args.relation == "strict")
    sb = world.subbasis()
    if args.induced:
        si, sb = extend_strong_inclusion(si), induced_subbasis(sb)
        codes = [induced_code(rng.sample(codes, rng.randint(1, 3))) for _ in range(200)]
    logging.info(f"Checking {si.label} on {len(codes)} codes and {len(points)} points")
    report = check_axioms(si, sb, codes, points, pair_sample=args.samples, fuel=config.CHECK_FUEL,
                          progress=args.verbose)
    with open_output(args.out) as out:
        passed = write_reports(out, [report])
    return 0 if passed else 1


def adapter_report(name: str, registry: RegistryRealWorld, samples: int, progress: bool) -> CheckReport:
    rational = RationalRealWorld()
    rng = random.Random(config.SAMPLE_SEED)
    points = [rational.point_label(p) for p in rational.sample_points(rng, config.POINT_SAMPLE)]
    to_creal, to_rational = rational_vs_creal_adapters(rational, registry)
    if name == "rational-to-creal":
        return check_adapter(to_creal, rational, registry, registry.inclusion(True), rational.inclusion(True),
                             points, samples, progress=progress)
    if name == "creal-to-rational":
        return check_adapter(to_rational, registry, rational, rational.inclusion(True), registry.inclusion(True),
                             points, samples, progress=progress)
    if name == "identity":
        return check_adapter(identity_adapter(), rational, rational, rational.inclusion(True),
                             rational.inclusion(True), points, samples, progress=progress)
    if name == "lacombe-embedding":
        return lacombe_adapter_check(embedding_cover(registry), rational, registry,
                                     rational.sample_codes(rng, samples), points)
    if name == "lacombe-rational":
        return lacombe_adapter_check(rational_cover(registry), registry, rational,
                                     registry.sample_codes(rng, samples), points)
    selector = cauchy_selector(rational) if name == "nogina-cauchy" else identity_selector()
    return nogina_adapter_check(selector, rational, rational, rational.sample_codes(rng, samples), points)


def run_check_adapter(args: argparse.Namespace, world: World, options: CommandOptions) -> int:
    registry = world if isinstance(world, RegistryRealWorld) else make_world("R-registry")
    report = adapter_report(args.adapter, registry, args.samples, args.verbose)
    with open_output(args.out) as out:
        passed = write_reports(out, [report])
    return 0 if passed else 1


def run_gen_name(args: argparse.Namespace, world: World, options: CommandOptions) -> int:
    name = world.name_of(world.parse_point(args.point), args.kind)
    with open_output(args.out) as out:
        for k in range(options.prefix):
            write_entry(out, name.at(k))
    return 0


COMMANDS = {
    "translate": run_translate,
    "probe": run_probe,
    "member": run_member,
    "check-axioms": run_check_axioms,
    "check-adapter": run_check_adapter,
    "gen-name": run_gen_name,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        options = CommandOptions(fuel=args.fuel, prefix=args.prefix)
    except ValidationError as e:
        logging.error(f"Invalid options: {e.errors()[0]['loc'][0]} {e.errors()[0]['msg']}")
        return 2
    try:
        world = make_world(args.world)
        return COMMANDS[args.command](args, world, options)
    except (CodingError, WorldError, RepresentationError) as e:
        logging.error(f"{args.command}: {e}")
        return 2
    except FuelExhausted as e:
        logging.error(f"{args.command}: {e}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
