"""Author-name parsing, ASCII dumb-down, blocking keys, and compatibility scoring.

Author strings arrive in a handful of shapes ("Zhang, Y", "Ang Lee",
"J. Smith", "van der Berg, J."). Everything here normalizes those shapes
into a :class:`ParsedName` so that identifier minting and claim heuristics
can work on a stable (surname key, first initial) basis.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional

from .errors import UnmappableNameError, ValidationError

if TYPE_CHECKING:
    from .store import ReadView


def dumbdown_surname(surname: str) -> str:
    """Reduce a surname to a lowercase ASCII key ("Müller" -> "muller").

    Unicode compatibility decomposition, then only characters that map to
    an ASCII letter are kept: diacritics are stripped, spaces, hyphens,
    apostrophes and periods removed, and anything else (digits, unmapped
    scripts, ligatures such as "ß") is dropped rather than transliterated.

    Raises :class:`UnmappableNameError` if nothing survives.
    """
    if not surname or not surname.strip():
        raise ValidationError("surname must be non-empty")
    decomposed = unicodedata.normalize("NFKD", surname)
    key = "".join(c for ch in decomposed for c in ch.lower() if "a" <= c <= "z")
    if not key:
        raise UnmappableNameError(f"no ASCII letters derivable from {surname!r}")
    return key


def _dumbdown_or_empty(text: str) -> str:
    try:
        return dumbdown_surname(text)
    except (ValidationError, UnmappableNameError):
        return ""


@dataclass(frozen=True)
class ParsedName:
    """A normalized personal name: surname, optional given name, initials."""

    surname: str
    given: Optional[str] = None
    initials: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.surname or not self.surname.strip():
            raise ValidationError("surname must be non-empty")
        for letter in self.initials:
            if len(letter) != 1 or not ("A" <= letter <= "Z"):
                raise ValidationError(f"initials must be single uppercase ASCII letters, got {letter!r}")
        if self.given is not None:
            mapped = _dumbdown_or_empty(self.given)
            if mapped and (not self.initials or self.initials[0] != mapped[0].upper()):
                raise ValidationError(
                    f"first initial {self.initials[:1]} does not match given name {self.given!r}"
                )


@dataclass(frozen=True, order=True)
class BlockingKey:
    """(surname key, first initial) pair used to group same-name candidates."""

    surname_key: str
    first_initial: str

    def __post_init__(self) -> None:
        if not self.surname_key or not all("a" <= c <= "z" for c in self.surname_key):
            raise ValidationError(f"surname_key must be non-empty lowercase ASCII: {self.surname_key!r}")
        if len(self.first_initial) != 1 or not ("a" <= self.first_initial <= "z"):
            raise ValidationError(f"first_initial must be one lowercase ASCII letter: {self.first_initial!r}")


_PIECE_SPLIT_RE = re.compile(r"[.\-']")


def _is_initial_token(token: str) -> bool:
    pieces = [p for p in _PIECE_SPLIT_RE.split(token) if p]
    return bool(pieces) and all(len(p) == 1 and p.isalpha() for p in pieces)


def _parse_given_tokens(tokens: Iterable[str]) -> tuple[Optional[str], tuple[str, ...]]:
    """Split a given-name part into (given, initials).

    Full-word tokens contribute their first dumb-downed letter; initial
    tokens like "J." or "J.-P." contribute one letter per piece. The given
    name is recorded only when the part starts with a full word, which keeps
    the first initial and the given name consistent.
    """
    initials: list[str] = []
    words: list[str] = []
    first_is_word = False
    for pos, token in enumerate(tokens):
        if _is_initial_token(token):
            for piece in _PIECE_SPLIT_RE.split(token):
                mapped = _dumbdown_or_empty(piece)
                if mapped:
                    initials.append(mapped[0].upper())
        else:
            if pos == 0:
                first_is_word = True
            words.append(token)
            mapped = _dumbdown_or_empty(token)
            if mapped:
                initials.append(mapped[0].upper())
    given = " ".join(words) if words and first_is_word else None
    return given, tuple(initials)


def parse_author_string(raw: str) -> ParsedName:
    """Parse a display-name string into a :class:`ParsedName`.

    Comma forms ("Surname, Given", "Surname, I.") keep multi-token surnames
    intact; in space forms ("Given Surname", "I. Surname") the final token is
    taken as the surname, with no particle detection.
    """
    text = raw.strip() if raw else ""
    if not text:
        raise ValidationError("author string is empty")
    if "," in text:
        surname_part, _, given_part = text.partition(",")
        surname = surname_part.strip()
        if not surname:
            raise ValidationError(f"no surname before comma in {raw!r}")
        given, initials = _parse_given_tokens(given_part.split())
        return ParsedName(surname=surname, given=given, initials=initials)
    tokens = text.split()
    surname = tokens[-1]
    given, initials = _parse_given_tokens(tokens[:-1])
    return ParsedName(surname=surname, given=given, initials=initials)


def parse_name_parts(surname: str, given: Optional[str]) -> ParsedName:
    """Build a :class:`ParsedName` from already-separated record fields."""
    g, initials = _parse_given_tokens(given.split() if given else [])
    return ParsedName(surname=surname, given=g, initials=initials)


def blocking_key(name: ParsedName) -> BlockingKey:
    """Derive the (surname key, first initial) blocking key for a name."""
    if not name.initials:
        raise ValidationError(f"cannot derive a blocking key without an initial: {name!r}")
    return BlockingKey(
        surname_key=dumbdown_surname(name.surname),
        first_initial=name.initials[0].lower(),
    )


def _blocking_key_or_none(name: ParsedName) -> Optional[BlockingKey]:
    try:
        return blocking_key(name)
    except (ValidationError, UnmappableNameError):
        return None


class NameMatch(str, enum.Enum):
    EXACT = "exact"
    INITIAL_COMPATIBLE = "initial-compatible"
    INCOMPATIBLE = "incompatible"


def name_compatibility(user: ParsedName, author_string: str) -> NameMatch:
    """Score how well a user's registered name fits one paper author string.

    Exact requires matching dumb-downs of both surname and full given name;
    initial-compatible requires matching surname keys and first initials.
    Unparseable author strings are incompatible, never an error.
    """
    try:
        candidate = parse_author_string(author_string)
    except ValidationError:
        return NameMatch.INCOMPATIBLE
    user_key = _dumbdown_or_empty(user.surname)
    cand_key = _dumbdown_or_empty(candidate.surname)
    if not user_key or user_key != cand_key:
        return NameMatch.INCOMPATIBLE
    if user.given and candidate.given:
        user_given = _dumbdown_or_empty(user.given)
        if user_given and user_given == _dumbdown_or_empty(candidate.given):
            return NameMatch.EXACT
    if user.initials and candidate.initials and user.initials[0] == candidate.initials[0]:
        return NameMatch.INITIAL_COMPATIBLE
    return NameMatch.INCOMPATIBLE


def name_frequency_report(view: "ReadView") -> list[tuple[BlockingKey, int]]:
    """Count users per blocking key, most frequent first, ties by key.

    Users whose names yield no blocking key (no first name, or nothing
    mappable to ASCII) are not counted.
    """
    counts: Counter[BlockingKey] = Counter()
    for user in view.users.values():
        key = _blocking_key_or_none(parse_name_parts(user.last_name, user.first_name))
        if key is not None:
            counts[key] += 1
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def format_frequency_report(report: list[tuple[BlockingKey, int]], top: Optional[int] = None) -> str:
    """Render the frequency report as aligned two-column text."""
    rows = report[:top] if top is not None else report
    labels = [f"{key.surname_key}, {key.first_initial}" for key, _ in rows]
    width = max([len("Lastname, Initial")] + [len(label) for label in labels])
    lines = [f"{'Lastname, Initial':<{width}}  Count"]
    for label, (_, count) in zip(labels, rows):
        lines.append(f"{label:<{width}}  {count}")
    return "\n".join(lines)
