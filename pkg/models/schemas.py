from typing import List, Optional

from pydantic import BaseModel, Field, PositiveInt

import config
from utils.kernel import Code, format_code


class Violation(BaseModel):
    """One sampled counterexample found by a check."""
    kind: str = Field(description="transitivity, inclusion, reflexivity, overset, refinement, cover-miss, ...")
    a: str = Field(description="First code involved, in the name-prefix text format")
    b: str = Field(description="Second code involved")
    c: Optional[str] = Field(default=None, description="Third code (transitivity only)")
    point: Optional[str] = Field(default=None, description="Identifier of the witness point")

    def line(self) -> str:
        text = f"VIOLATION {self.kind} a={self.a} b={self.b}"
        if self.c is not None:
            text += f" c={self.c}"
        if self.point is not None:
            text += f" point={self.point}"
        return text


class CheckReport(BaseModel):
    """Result of a sampled check; an empty violation list means pass."""
    subject: str = Field(default="", description="What was checked")
    violations: List[Violation] = Field(default_factory=list)
    checked: int = Field(default=0, description="Sample items that were decided")
    skipped: int = Field(default=0, description="Sample items left undecided (Unknown or unresolved)")

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, kind: str, a: Code, b: Code, c: Optional[Code] = None, point: Optional[str] = None) -> None:
        self.violations.append(Violation(
            kind=kind,
            a=format_code(a),
            b=format_code(b),
            c=None if c is None else format_code(c),
            point=point,
        ))

    def lines(self) -> List[str]:
        return [violation.line() for violation in self.violations]


class WorldSpec(BaseModel):
    """A parsed world string such as "K-space --fuel 1000"."""
    identifier: str = Field(description="R-rational, N-discrete, K-space, R-registry or singleton")
    fuel: PositiveInt = Field(default=config.KSPACE_DEFAULT_FUEL, description="F in K_F (K-space only)")
    slots: List[str] = Field(default_factory=lambda: list(config.REGISTRY_DEFAULT_SLOTS),
                             description="Registry slots (R-registry only)")


class CommandOptions(BaseModel):
    """Numeric CLI options shared by every subcommand."""
    fuel: PositiveInt = Field(default=config.DEFAULT_FUEL, description="Step budget")
    prefix: PositiveInt = Field(default=config.DEFAULT_PREFIX, description="Name positions to emit")
