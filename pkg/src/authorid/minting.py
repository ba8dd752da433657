"""Minting of author identifiers, ownership-claim evaluation, endorsement checks.

Identifiers are human-copyable keys of the form `{surname}_{initial}_{n}`
(e.g. warner_s_1) where n is assigned first-come-first-served per blocking
key. Claim evaluation is deliberately conservative: automatic acceptance
needs either a submitter email match or an unambiguous, uncontested name
slot on a paper with few enough authors; everything else is deferred to an
admin as `pending`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from urllib.parse import urlparse

from .errors import ConflictError, NotFoundError, ValidationError
from .names import NameMatch, ParsedName, dumbdown_surname, name_compatibility, parse_name_parts
from .store import (
    AUTHOR_ID_RE,
    AuthorRecord,
    ClaimProvenance,
    ClaimStatus,
    OwnershipClaim,
    ReadView,
    Store,
)


@dataclass(frozen=True)
class MintPolicy:
    """Configuration for identifier URIs and claim/endorsement thresholds."""

    base_url: str = "http://arxiv.org"
    auto_claim_max_authors: int = 10
    endorsement_threshold: int = 3

    def __post_init__(self) -> None:
        object.__setattr__(self, "base_url", self.base_url.rstrip("/"))
        parsed = urlparse(self.base_url)
        if not parsed.scheme or not parsed.netloc:
            raise ValidationError(f"base_url must be an absolute URI prefix: {self.base_url!r}")
        if self.auto_claim_max_authors < 1 or self.endorsement_threshold < 1:
            raise ValidationError("policy thresholds must be >= 1")


def mint_author_id(store: Store, user_id: str, name: ParsedName) -> str:
    """Mint `{surname_key}_{initial}_{n}` for a user and create the author record.

    n is 1 + the largest suffix already minted for that key, so re-running
    the same mint against the same store state yields the same id.
    """
    if not store.has_user(user_id):
        raise NotFoundError(f"unknown user {user_id}")
    existing = store.author_id_for_owner(user_id)
    if existing is not None:
        raise ConflictError(f"user {user_id} already owns author id {existing}")
    if not name.initials:
        raise ValidationError(f"cannot mint an id for a name without an initial: {name!r}")
    key_prefix = f"{dumbdown_surname(name.surname)}_{name.initials[0].lower()}"
    author_id = f"{key_prefix}_{store.next_suffix(key_prefix)}"
    if name.given:
        display_name = f"{name.given} {name.surname}"
    else:
        display_name = f"{' '.join(i + '.' for i in name.initials)} {name.surname}"
    store.add_author(
        AuthorRecord(author_id=author_id, owner_user_id=user_id, display_name=display_name)
    )
    return author_id


def author_uri(policy: MintPolicy, author_id: str) -> str:
    """Absolute URI for an author id, e.g. http://arxiv.org/a/warner_s_1."""
    if not AUTHOR_ID_RE.fullmatch(author_id):
        raise ValidationError(f"malformed author_id {author_id!r}")
    return f"{policy.base_url}/a/{author_id}"


def _compatible_slots(view: ReadView, user_id: str, author_strings: tuple[str, ...]) -> set[int]:
    user = view.user(user_id)
    name = parse_name_parts(user.last_name, user.first_name)
    return {
        i
        for i, author_string in enumerate(author_strings)
        if name_compatibility(name, author_string) is not NameMatch.INCOMPATIBLE
    }


def evaluate_claim(view: ReadView, policy: MintPolicy, user_id: str, paper_id: str) -> ClaimStatus:
    """Decide what status a fresh ownership claim would get.

    auto-accepted on a submitter email match, or on a name-compatible author
    slot that no other accepted claimant also matches, provided the paper has
    at most `auto_claim_max_authors` authors. Name-compatible claims failing
    those side conditions are pending; everything else is rejected.
    """
    user = view.user(user_id)
    paper = view.paper(paper_id)
    if (user_id, paper_id) in view.claims:
        raise ConflictError(f"duplicate claim for user {user_id} on paper {paper_id}")

    if paper.submitter_email is not None and paper.submitter_email in user.emails:
        return ClaimStatus.AUTO_ACCEPTED

    compatible = _compatible_slots(view, user_id, paper.author_strings)
    if not compatible:
        return ClaimStatus.REJECTED
    if len(paper.author_strings) > policy.auto_claim_max_authors:
        return ClaimStatus.PENDING
    taken: set[int] = set()
    for claim in view.accepted_claims_for_paper(paper_id):
        if claim.user_id == user_id:
            continue
        taken |= _compatible_slots(view, claim.user_id, paper.author_strings)
    if compatible - taken:
        return ClaimStatus.AUTO_ACCEPTED
    return ClaimStatus.PENDING


def apply_claim(
    store: Store,
    user_id: str,
    paper_id: str,
    decision: ClaimStatus,
    provenance: ClaimProvenance = ClaimProvenance.USER_CLAIM,
    timestamp: int | None = None,
) -> OwnershipClaim:
    """Record a claim with the given decision; visible in subsequent snapshots."""
    if provenance not in (ClaimProvenance.USER_CLAIM, ClaimProvenance.ADMIN):
        raise ValidationError(f"claims are applied with user-claim or admin provenance, not {provenance.value}")
    claim = OwnershipClaim(
        user_id=user_id,
        paper_id=paper_id,
        asserts_authorship=True,
        provenance=provenance,
        status=decision,
        timestamp=int(time.time()) if timestamp is None else timestamp,
    )
    store.add_claim(claim)
    return claim


def endorsement_eligible(view: ReadView, policy: MintPolicy, author_id: str) -> bool:
    """True iff the author owns at least `endorsement_threshold` accepted papers."""
    return len(view.papers_for_author(author_id)) >= policy.endorsement_threshold
