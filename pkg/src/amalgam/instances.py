"""Built-in instances, loaded from the spec files shipped with the package."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .specfile import SpecFile, parse_spec

FILES = {
    "z4_z2_z6": "z4_z2_z6.spec",
    "z_2z_z": "z_2z_z.spec",
    "z_free_z": "z_free_z.spec",
    "z2_free_z3": "z2_free_z3.spec",
}


def spec_text(key: str) -> str:
    return resources.files("amalgam").joinpath("data", FILES[key]).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load(key: str) -> SpecFile:
    """Parsed built-in spec; cached, so repeated loads share one setup."""
    if key not in FILES:
        raise KeyError(f"unknown instance {key!r}; known: {', '.join(sorted(FILES))}")
    return parse_spec(spec_text(key))
