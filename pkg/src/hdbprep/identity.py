"""Canonical household identifiers.

Survey strata (region, milieu, cluster, household number) only identify a
household jointly: household numbers restart within clusters, clusters
within milieux. Concatenating the four tokens, each preceded by a distinct
prefix letter, yields a single string key that is injective as long as no
token contains any of the prefix letters. That collision check runs on
every key build, so a garbled token fails loudly instead of silently
aliasing two households.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import ConfigError, EmptyTokenError, MalformedKeyError, PrefixCollisionError
from .model import HouseholdKey, PersonRecord


@dataclass(frozen=True)
class PrefixScheme:
    """The four single-letter prefixes used to build canonical keys.

    Letters must be distinct uppercase ASCII. The default spells R, M, C, H
    for region, milieu, cluster, household; a D/M/C/H variant is around in
    older exports and is one from_string call away.
    """

    region: str = "R"
    milieu: str = "M"
    cluster: str = "C"
    household: str = "H"

    def __post_init__(self):
        for letter in self.letters:
            if len(letter) != 1 or not ("A" <= letter <= "Z"):
                raise ConfigError(f"prefix {letter!r} is not a single uppercase letter")
        if len(set(self.letters)) != 4:
            raise ConfigError(f"prefix letters must be distinct, got {self.letters}")

    @property
    def letters(self) -> tuple[str, str, str, str]:
        return (self.region, self.milieu, self.cluster, self.household)

    @classmethod
    def from_string(cls, token: str) -> "PrefixScheme":
        token = token.strip()
        if len(token) != 4:
            raise ConfigError(f"prefix scheme must be 4 letters, got {token!r}")
        return cls(token[0], token[1], token[2], token[3])


DEFAULT_SCHEME = PrefixScheme()


def make_household_key(
    region: str,
    milieu: str,
    cluster: str,
    household: str,
    scheme: PrefixScheme = DEFAULT_SCHEME,
) -> HouseholdKey:
    """Build the canonical key from the four strata tokens.

    Tokens are used verbatim and must be non-empty. Any occurrence of any
    prefix letter inside any token would break the injectivity of the
    concatenation and raises PREFIX_COLLISION.
    """
    components = (region, milieu, cluster, household)
    letters = scheme.letters
    for token in components:
        if not token:
            raise EmptyTokenError("strata token is empty")
        for letter in letters:
            if letter in token:
                raise PrefixCollisionError(token, letter)
    canonical = "".join(letter + token for letter, token in zip(letters, components))
    return HouseholdKey(canonical, components)


@lru_cache(maxsize=8)
def _key_pattern(letters: tuple[str, str, str, str]) -> re.Pattern[str]:
    escaped = [re.escape(letter) for letter in letters]
    charclass = "".join(escaped)
    parts = "".join(f"{e}([^{charclass}]+)" for e in escaped)
    return re.compile(f"^{parts}$")


def parse_household_key(
    canonical: str, scheme: PrefixScheme = DEFAULT_SCHEME
) -> tuple[str, str, str, str]:
    """Recover (region, milieu, cluster, household) from a canonical key.

    A true inverse of make_household_key under the same scheme; a string
    no key build could have produced (missing, reordered or duplicated
    prefixes) raises MALFORMED_KEY.
    """
    match = _key_pattern(scheme.letters).match(canonical)
    if match is None:
        raise MalformedKeyError(canonical)
    region, milieu, cluster, household = match.groups()
    return region, milieu, cluster, household


def key_of_record(
    record: PersonRecord, scheme: PrefixScheme = DEFAULT_SCHEME
) -> HouseholdKey:
    """The canonical key of one person's household."""
    return make_household_key(
        record.region, record.milieu, record.cluster, record.household, scheme
    )


def identify_stream(
    records: Iterable[PersonRecord], scheme: PrefixScheme = DEFAULT_SCHEME
) -> Iterator[HouseholdKey]:
    """Yield one key per person, in order, annotating errors with the
    person's 1-based position."""
    for i, record in enumerate(records, 1):
        try:
            yield key_of_record(record, scheme)
        except PrefixCollisionError as exc:
            raise exc.at(line=i)
