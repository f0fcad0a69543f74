from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Configuration:
    """Which assertions are compiled in, indexed by assertion position.

    Printed as a bit string with assertion 0 leftmost, so ``"01"`` disables
    assertion 0 and enables assertion 1.
    """

    bits: tuple[bool, ...]

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        if any(ch not in "01" for ch in text):
            raise ConfigurationError(f"configuration must be a bit string, got {text!r}")
        return cls(tuple(ch == "1" for ch in text))

    @classmethod
    def all_enabled(cls, n: int) -> "Configuration":
        return cls((True,) * n)

    @classmethod
    def all_disabled(cls, n: int) -> "Configuration":
        return cls((False,) * n)

    @classmethod
    def enumerate(cls, n: int) -> Iterator["Configuration"]:
        """All 2**n configurations in bit-string order."""
        for bits in product((False, True), repeat=n):
            yield cls(bits)

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def enabled(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b)

    @property
    def disabled(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if not b)

    @property
    def n_enabled(self) -> int:
        return sum(self.bits)

    def flip(self, i: int) -> "Configuration":
        bits = list(self.bits)
        bits[i] = not bits[i]
        return Configuration(tuple(bits))

    def check_length(self, n: int) -> None:
        if len(self.bits) != n:
            raise ConfigurationError(
                f"configuration {str(self)!r} has {len(self.bits)} bits, program has {n} assertions"
            )


def as_configuration(c, n: int | None = None) -> Configuration:
    """Accept a Configuration, bit string or bool sequence; optionally check length."""
    if isinstance(c, str):
        c = Configuration.parse(c)
    elif not isinstance(c, Configuration):
        c = Configuration(tuple(bool(b) for b in c))
    if n is not None:
        c.check_length(n)
    return c
