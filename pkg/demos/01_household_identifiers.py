"""Canonical household identifiers.

A household is identified by four nested strata tokens: region, milieu,
cluster, household. The canonical key concatenates them behind single-letter
prefixes so that one string can always be split back into the original
tokens. Run this file directly to see the round trip and its guard rails.
"""

from hdbprep import (
    DEFAULT_SCHEME,
    PersonRecord,
    PrefixScheme,
    identify_stream,
    make_household_key,
    parse_household_key,
)
from hdbprep.errors import MalformedKeyError, PrefixCollisionError

key = make_household_key("1", "2", "3", "47")
print("tokens (1, 2, 3, 47)  ->", key.canonical)
print("parsed back           ->", parse_household_key(key.canonical, DEFAULT_SCHEME))

# tokens travel verbatim; leading zeros survive
padded = make_household_key("01", "2", "03", "007")
print("padded tokens         ->", padded.canonical)

# an alternate prefix alphabet, for files that use D for the region
dmch = PrefixScheme.from_string("DMCH")
print("DMCH scheme           ->", make_household_key("1", "2", "3", "47", dmch).canonical)

# a token containing a prefix letter would make the key ambiguous,
# so building one is an error rather than a corrupt key
try:
    make_household_key("1", "2M", "3", "47")
except PrefixCollisionError as exc:
    print("collision rejected    ->", exc)

try:
    parse_household_key("R1M2C3", DEFAULT_SCHEME)  # household part missing
except MalformedKeyError as exc:
    print("malformed rejected    ->", exc)

# person records stream straight into keys, one per input line
persons = [
    PersonRecord("1", "1", "1", "1", "34", "1", "1"),
    PersonRecord("1", "1", "1", "1", "30", "2", "2"),
    PersonRecord("1", "1", "1", "2", "51", "1", "1"),
]
print("streamed keys         ->", [k.canonical for k in identify_stream(persons)])
