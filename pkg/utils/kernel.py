"""
Kernel

Codes, Cantor pairing, the bit-set coding of finite sets, names as memoized
demand-driven streams of naturals, and the fuel discipline used by every
semi-decision and realizer in the package.
"""

import logging
import math
from enum import Enum
from itertools import count
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

import config
from utils.errors import CodingError, FuelExhausted, NameExhausted


class SemiResult(str, Enum):
    """Outcome of a fuel-bounded semi-decision. ACCEPT is final, NOT_YET says nothing."""

    ACCEPT = "accept"
    NOT_YET = "not-yet"


# --- Pairing -----------------------------------------------------------------

def pair(n: int, m: int) -> int:
    """Cantor pairing <n,m> = (n+m)(n+m+1)/2 + m."""
    if n < 0 or m < 0:
        raise ValueError(f"pair expects naturals, got ({n}, {m})")
    return (n + m) * (n + m + 1) // 2 + m


def unpair(code: int) -> Tuple[int, int]:
    """Inverse of pair: returns (n, m) with pair(n, m) == code."""
    if code < 0:
        raise ValueError(f"unpair expects a natural, got {code}")
    w = (math.isqrt(8 * code + 1) - 1) // 2
    m = code - w * (w + 1) // 2
    return w - m, m


# --- Finite sets ---------------------------------------------------------------

def finset_decode(code: int) -> FrozenSet[int]:
    """Δ_n: positions of the 1-bits of n."""
    if code < 0:
        raise ValueError(f"finset_decode expects a natural, got {code}")
    return frozenset(i for i in range(code.bit_length()) if code >> i & 1)


def finset_encode(elements: Iterable[int]) -> int:
    """Inverse of finset_decode (duplicates are ignored)."""
    code = 0
    for element in set(elements):
        if element < 0:
            raise ValueError(f"finite sets of naturals only, got {element}")
        code |= 1 << element
    return code


# Python's int hash is the value modulo this prime for naturals
_HASH_MODULUS = 2**61 - 1


class FinSetCode:
    """
    A Δ-code held in decoded form.

    It is equal, and hash-equal, to the natural finset_encode(elements). That
    natural has about max(elements) bits, so it is only materialized on request
    and only below config.FINSET_MATERIALIZE_LIMIT; induced codes over ball
    codes outgrow any memory after a few name positions.
    """

    __slots__ = ("elements",)

    def __init__(self, elements: Iterable[int]):
        members = frozenset(elements)
        if any(element < 0 for element in members):
            raise ValueError(f"finite sets of naturals only, got {sorted(members)}")
        self.elements = members

    @classmethod
    def of(cls, code: "Code") -> "FinSetCode":
        if isinstance(code, FinSetCode):
            return code
        return cls(finset_decode(code))

    @property
    def materializable(self) -> bool:
        return not self.elements or max(self.elements) < config.FINSET_MATERIALIZE_LIMIT

    @property
    def code(self) -> int:
        if not self.materializable:
            raise CodingError(f"Δ-code with largest element {max(self.elements)} is too large to materialize")
        return finset_encode(self.elements)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FinSetCode):
            return self.elements == other.elements
        if isinstance(other, int) and not isinstance(other, bool):
            return other >= 0 and finset_decode(other) == self.elements
        return NotImplemented

    def __hash__(self) -> int:
        return sum(pow(2, element, _HASH_MODULUS) for element in self.elements) % _HASH_MODULUS

    def __repr__(self) -> str:
        return f"FinSetCode({sorted(self.elements)})"

    def __str__(self) -> str:
        return format_code(self)


Code = Union[int, FinSetCode]


def finset_members(code: Code) -> FrozenSet[int]:
    """Δ_code for either form of a Δ-code."""
    if isinstance(code, FinSetCode):
        return code.elements
    return finset_decode(code)


# --- Fuel ------------------------------------------------------------------

class Fuel:
    """
    A step meter. Readers charge one step per name cell and one per
    semi-decision poll; a charge beyond the budget raises FuelExhausted.
    """

    def __init__(self, steps: int):
        if steps < 0:
            raise ValueError(f"fuel must be a natural, got {steps}")
        self.steps = steps
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.steps - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.steps

    def charge(self, steps: int = 1) -> None:
        if self.used + steps > self.steps:
            self.used = self.steps
            raise FuelExhausted(self.used)
        self.used += steps

    def __repr__(self) -> str:
        return f"Fuel(used={self.used}, steps={self.steps})"


def charge(fuel: Optional[Fuel], steps: int = 1) -> None:
    """Charge a meter if there is one; None means unmetered."""
    if fuel is not None:
        fuel.charge(steps)


def run_semi(search: Callable[[Fuel], bool], fuel: int) -> Tuple[SemiResult, int]:
    """
    Run a deterministic search under a fresh meter of `fuel` steps.

    Args:
        search: returns True once it has found a witness; it charges the meter
            it is given and may loop forever otherwise.
        fuel: the step budget.

    Returns:
        (SemiResult, steps used). Running out of fuel answers NOT_YET.
    """
    meter = Fuel(fuel)
    try:
        found = search(meter)
    except FuelExhausted:
        logging.debug(f"Semi-decision ran out of fuel after {meter.used} steps")
        return SemiResult.NOT_YET, meter.used
    return (SemiResult.ACCEPT if found else SemiResult.NOT_YET), meter.used


def semi_decide(search: Callable[[Fuel], bool], fuel: int) -> SemiResult:
    return run_semi(search, fuel)[0]


def check_fuel_monotone(procedure: Callable[[int], SemiResult], fuel: int) -> bool:
    """F-vs-2F harness: False iff the procedure accepts at F but not at 2F."""
    if procedure(fuel) is SemiResult.ACCEPT:
        return procedure(2 * fuel) is SemiResult.ACCEPT
    return True


def dovetail() -> Iterator[Tuple[int, int]]:
    """Enumerate all pairs (i, j) along anti-diagonals: (0,0), (0,1), (1,0), ..."""
    for stage in count():
        for i in range(stage + 1):
            yield i, stage - i


# --- Names -------------------------------------------------------------------

class Name:
    """
    An element of Baire space, evaluated on demand.

    Entries are naturals; streams of induced-basis codes may hold them as
    FinSetCode values. Positions are memoized, so at(i) is repeatable and
    interleaved reads agree with sequential ones. A Name is single-consumer
    while it is being evaluated.
    """

    def __init__(self, fn: Callable[[int], Code], label: str = "name"):
        self._fn = fn
        self._memo: Dict[int, Code] = {}
        self.label = label
        self.highest_read = -1

    def at(self, index: int) -> Code:
        if index < 0:
            raise IndexError(f"names are indexed by naturals, got {index}")
        if index not in self._memo:
            value = self._fn(index)
            if isinstance(value, int) and value < 0:
                raise CodingError(f"{self.label} produced a negative entry at {index}: {value}")
            self._memo[index] = value
        self.highest_read = max(self.highest_read, index)
        return self._memo[index]

    def read(self, index: int, fuel: Optional[Fuel] = None) -> Code:
        """at(index), charging one step to the meter."""
        charge(fuel)
        return self.at(index)

    def prefix(self, length: int) -> List[Code]:
        return [self.at(i) for i in range(length)]

    def map(self, fn: Callable[[Code], Code], label: Optional[str] = None) -> "Name":
        return Name(lambda i: fn(self.at(i)), label or f"map({self.label})")

    def __getitem__(self, index: int) -> Code:
        return self.at(index)

    def __iter__(self) -> Iterator[Code]:
        for i in count():
            yield self.at(i)

    def __repr__(self) -> str:
        known = [self._memo[i] for i in sorted(self._memo)[:8]]
        return f"Name({self.label}, known={known})"

    @classmethod
    def from_prefix(cls, values: Iterable[Code], label: str = "prefix") -> "Name":
        """A name known only up to a finite prefix; reading past it raises NameExhausted."""
        entries = list(values)

        def cell(index: int) -> Code:
            if index >= len(entries):
                raise NameExhausted(index, len(entries))
            return entries[index]

        return cls(cell, label)

    @classmethod
    def from_lines(cls, lines: Iterable[str], label: str = "input") -> "Name":
        """
        A name read lazily from text in the prefix format. Position k pulls
        lines only until its entry is parsed; the end of the text raises
        NameExhausted.
        """
        source = enumerate(lines, start=1)
        entries: List[Code] = []

        def cell(index: int) -> Code:
            while len(entries) <= index:
                try:
                    number, line = next(source)
                except StopIteration:
                    raise NameExhausted(index, len(entries)) from None
                if line.strip():
                    entries.append(_parse_line(number, line))
            return entries[index]

        return cls(cell, label)

    @classmethod
    def constant(cls, value: Code, label: Optional[str] = None) -> "Name":
        return cls(lambda _: value, label or f"const({value})")


def name_from_function(g: Callable[[int], int], label: str = "name") -> Name:
    """Wrap a total deterministic map ℕ→ℕ as a Name."""
    return Name(g, label)


# --- Textual prefix format ------------------------------------------------------

def format_code(value: Code) -> str:
    """
    Decimal for plain codes and small Δ-codes; a Δ-code whose largest member
    reaches config.FINSET_DECIMAL_LIMIT is written as its member list "{a,b}".
    """
    if isinstance(value, FinSetCode):
        if not value.elements or max(value.elements) < config.FINSET_DECIMAL_LIMIT:
            return str(value.code)
        return "{" + ",".join(str(element) for element in sorted(value.elements)) + "}"
    return str(value)


def parse_code(text: str) -> Code:
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        body = text[1:-1].strip()
        members = [part.strip() for part in body.split(",")] if body else []
        if not all(member.isdecimal() for member in members):
            raise CodingError(f"bad Δ-code literal {text!r}")
        return FinSetCode(int(member) for member in members)
    if not text.isdecimal():
        raise CodingError(f"expected a natural, got {text!r}")
    return int(text)


def format_prefix(values: Iterable[Code]) -> str:
    """One natural per line, in index order."""
    return "".join(f"{format_code(value)}\n" for value in values)


def _parse_line(number: int, line: str) -> Code:
    try:
        return parse_code(line)
    except CodingError as e:
        raise CodingError(f"line {number}: {e}") from e


def read_prefix(lines: Iterable[str]) -> List[Code]:
    """Parse the one-natural-per-line format; blank lines are ignored."""
    return [_parse_line(number, line) for number, line in enumerate(lines, start=1) if line.strip()]
