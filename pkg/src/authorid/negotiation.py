"""HTTP content negotiation over the three author representations.

A URL suffix (.html/.atom/.rdf) always wins over the Accept header; with no
suffix the best quality match among text/html, application/atom+xml and
application/rdf+xml is chosen, with HTML as the default and tie-breaker.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .errors import NotAcceptableError, NotFoundError
from .representations import MEDIA_TYPES, Suffix

# Tie-break preference when Accept scores representations equally.
_PREFERENCE = (Suffix.HTML, Suffix.ATOM, Suffix.RDF)


class Via(str, enum.Enum):
    DEFAULT = "default"
    ACCEPT_HEADER = "accept-header"
    SUFFIX = "suffix"


@dataclass(frozen=True)
class NegotiationResult:
    chosen: Suffix
    via: Via


def _parse_accept(header: str) -> list[tuple[str, str, float]]:
    """Parse an Accept header into (type, subtype, q) entries, skipping junk."""
    entries = []
    for part in header.split(","):
        tokens = [t.strip() for t in part.split(";")]
        if not tokens or "/" not in tokens[0]:
            continue
        media_type, _, media_subtype = tokens[0].partition("/")
        quality = 1.0
        for param in tokens[1:]:
            name, _, value = param.partition("=")
            if name.strip().lower() == "q":
                try:
                    quality = float(value.strip())
                except ValueError:
                    quality = 1.0
                break
        entries.append((media_type.lower(), media_subtype.lower(), max(0.0, min(quality, 1.0))))
    return entries


def _quality_for(offer: str, entries: list[tuple[str, str, float]]) -> float:
    """Quality assigned to one offered media type, most specific range wins."""
    offer_type, _, offer_subtype = offer.partition("/")
    best_specificity = -1
    best_quality = 0.0
    for media_type, media_subtype, quality in entries:
        if media_type == offer_type and media_subtype == offer_subtype:
            specificity = 3
        elif media_type == offer_type and media_subtype == "*":
            specificity = 2
        elif media_type == "*" and media_subtype == "*":
            specificity = 1
        else:
            continue
        if specificity > best_specificity or (specificity == best_specificity and quality > best_quality):
            best_specificity = specificity
            best_quality = quality
    return best_quality if best_specificity > 0 else 0.0


def negotiate(
    accept_header: Optional[str] = None, suffix: Optional[Union[str, Suffix]] = None
) -> NegotiationResult:
    """Pick a representation for an author resource.

    Raises :class:`NotFoundError` for an unknown suffix and
    :class:`NotAcceptableError` when the Accept header rules out every offer.
    """
    if suffix is not None:
        try:
            chosen = Suffix(suffix)
        except ValueError:
            raise NotFoundError(f"unknown representation suffix {suffix!r}") from None
        return NegotiationResult(chosen=chosen, via=Via.SUFFIX)
    if accept_header is None or not accept_header.strip():
        return NegotiationResult(chosen=Suffix.HTML, via=Via.DEFAULT)
    entries = _parse_accept(accept_header)
    scores = {candidate: _quality_for(MEDIA_TYPES[candidate], entries) for candidate in _PREFERENCE}
    best = max(_PREFERENCE, key=lambda candidate: scores[candidate])
    if scores[best] <= 0.0:
        raise NotAcceptableError(f"no offered representation matches {accept_header!r}")
    return NegotiationResult(chosen=best, via=Via.ACCEPT_HEADER)
