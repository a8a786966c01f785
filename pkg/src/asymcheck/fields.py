"""Field descriptors: F_2, F_p and the integers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d = 53
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient ring of a form or algebra.

    ``char == 0`` means the integers; otherwise the prime field of that
    characteristic.  ``Field(2)`` is F_2.
    """

    char: int

    def __post_init__(self) -> None:
        if self.char != 0 and not is_prime(self.char):
            raise ValueError(f"characteristic {self.char} is not prime")

    @property
    def is_integral(self) -> bool:
        return self.char == 0

    @property
    def is_finite(self) -> bool:
        return self.char != 0

    def reduce(self, value: int) -> int:
        value = int(value)
        return value % self.char if self.char else value

    def inverse(self, value: int) -> int:
        if not self.char:
            raise ValueError("no inverses over the integers")
        value %= self.char
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(value, -1, self.char)

    def elements(self) -> range:
        if not self.char:
            raise ValueError("the integers are not enumerable")
        return range(self.char)

    @property
    def name(self) -> str:
        if self.char == 0:
            return "Int"
        if self.char == 2:
            return "F2"
        return f"F{self.char}"

    def to_json(self) -> Any:
        if self.char == 0:
            return "Int"
        if self.char == 2:
            return "F2"
        return {"Fp": self.char}

    @classmethod
    def from_json(cls, obj: Any) -> "Field":
        if obj == "F2":
            return F2
        if obj == "Int":
            return ZZ
        if isinstance(obj, dict) and set(obj) == {"Fp"}:
            return cls(int(obj["Fp"]))
        raise ValueError(f"unrecognised field descriptor {obj!r}")

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse the CLI spelling: ``f2``, ``fp:P`` or ``int``."""
        t = text.strip().lower()
        if t in ("f2", "gf2"):
            return F2
        if t in ("int", "z", "zz"):
            return ZZ
        if t.startswith("fp:"):
            return cls(int(t[3:]))
        if t.startswith("f") and t[1:].isdigit():
            return cls(int(t[1:]))
        raise ValueError(f"unrecognised field {text!r} (use f2, fp:P or int)")

    def __str__(self) -> str:
        return self.name


F2 = Field(2)
ZZ = Field(0)


def Fp(p: int) -> Field:
    return Field(p)
