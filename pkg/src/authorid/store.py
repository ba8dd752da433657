"""Typed in-memory store for users, papers, author records, and claims.

Records are frozen dataclasses with tuple-valued collections, so a snapshot
is a cheap dict copy that later writes can never reach. Ingest and export
use JSON-Lines files; timestamps are RFC 3339 UTC text at the file boundary
and integer epoch seconds internally.
"""

from __future__ import annotations

import enum
import json
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import ConflictError, CorpusFormatError, NotFoundError, ValidationError

AUTHOR_ID_RE = re.compile(r"[a-z_]+_[1-9][0-9]*")
_ABSOLUTE_URI_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:[^\s]+")

FOREIGN_SCHEMES = ("openid", "isni", "scopus", "researcherid", "dai", "repec", "other")


def parse_rfc3339(text: str) -> int:
    """Parse an RFC 3339 timestamp ("2009-05-18T12:00:00Z") to epoch seconds."""
    try:
        moment = datetime.fromisoformat(text.replace("Z", "+00:00").replace("z", "+00:00"))
    except (ValueError, TypeError, AttributeError) as exc:
        raise ValidationError(f"bad RFC 3339 timestamp {text!r}: {exc}") from None
    if moment.tzinfo is None:
        raise ValidationError(f"timestamp {text!r} is missing a UTC offset")
    return int(moment.astimezone(timezone.utc).timestamp())


def format_rfc3339(seconds: int) -> str:
    """Render epoch seconds as RFC 3339 UTC text."""
    return datetime.fromtimestamp(seconds, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class ClaimProvenance(str, enum.Enum):
    SUBMISSION = "submission"
    EMAIL_MATCH = "email-match"
    USER_CLAIM = "user-claim"
    ADMIN = "admin"


class ClaimStatus(str, enum.Enum):
    AUTO_ACCEPTED = "auto-accepted"
    PENDING = "pending"
    REJECTED = "rejected"


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    last_name: str
    first_name: str
    emails: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.user_id:
            raise ValidationError("user_id must be non-empty")
        if not self.last_name:
            raise ValidationError(f"user {self.user_id}: last_name must be non-empty")
        normalized = tuple(dict.fromkeys(e.strip().lower() for e in self.emails if e and e.strip()))
        object.__setattr__(self, "emails", normalized)


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    title: str
    abstract: str
    author_strings: tuple[str, ...]
    published: int
    updated: int
    submitter_user_id: Optional[str] = None
    submitter_email: Optional[str] = None
    categories: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.paper_id:
            raise ValidationError("paper_id must be non-empty")
        if not self.author_strings:
            raise ValidationError(f"paper {self.paper_id}: author_strings must be non-empty")
        if self.updated < self.published:
            raise ValidationError(f"paper {self.paper_id}: updated precedes published")
        object.__setattr__(self, "author_strings", tuple(self.author_strings))
        object.__setattr__(self, "categories", tuple(self.categories))
        if self.submitter_email is not None:
            object.__setattr__(self, "submitter_email", self.submitter_email.strip().lower() or None)


@dataclass(frozen=True)
class ForeignIdentity:
    """An identifier for the same person in another scheme (DAI, ResearcherID, ...)."""

    scheme: str
    value: str

    def __post_init__(self) -> None:
        if self.scheme not in FOREIGN_SCHEMES:
            raise ValidationError(f"unknown foreign identity scheme {self.scheme!r}")
        if not self.value or not self.value.strip():
            raise ValidationError(f"foreign identity value for scheme {self.scheme!r} is empty")

    @property
    def is_uri(self) -> bool:
        """True when the value is an absolute URI, including info: forms."""
        return _ABSOLUTE_URI_RE.fullmatch(self.value) is not None


@dataclass(frozen=True)
class AuthorRecord:
    author_id: str
    owner_user_id: str
    display_name: str
    alt_names: tuple[str, ...] = ()
    foreign_ids: tuple[ForeignIdentity, ...] = ()

    def __post_init__(self) -> None:
        if not AUTHOR_ID_RE.fullmatch(self.author_id):
            raise ValidationError(f"malformed author_id {self.author_id!r}")
        object.__setattr__(self, "alt_names", tuple(self.alt_names))
        object.__setattr__(self, "foreign_ids", tuple(self.foreign_ids))

    def with_foreign_identity(self, identity: ForeignIdentity) -> "AuthorRecord":
        if identity in self.foreign_ids:
            return self
        return AuthorRecord(
            author_id=self.author_id,
            owner_user_id=self.owner_user_id,
            display_name=self.display_name,
            alt_names=self.alt_names,
            foreign_ids=self.foreign_ids + (identity,),
        )


@dataclass(frozen=True)
class OwnershipClaim:
    user_id: str
    paper_id: str
    asserts_authorship: bool
    provenance: ClaimProvenance
    status: ClaimStatus
    timestamp: int

    @property
    def is_accepted(self) -> bool:
        return self.status is ClaimStatus.AUTO_ACCEPTED and self.asserts_authorship


class ReadView:
    """Immutable consistent view of a store; safe to hand between threads."""

    def __init__(
        self,
        users: dict[str, UserRecord],
        papers: dict[str, PaperRecord],
        authors: dict[str, AuthorRecord],
        claims: dict[tuple[str, str], OwnershipClaim],
    ) -> None:
        self.users: Mapping[str, UserRecord] = MappingProxyType(users)
        self.papers: Mapping[str, PaperRecord] = MappingProxyType(papers)
        self.authors: Mapping[str, AuthorRecord] = MappingProxyType(authors)
        self.claims: Mapping[tuple[str, str], OwnershipClaim] = MappingProxyType(claims)

    def user(self, user_id: str) -> UserRecord:
        try:
            return self.users[user_id]
        except KeyError:
            raise NotFoundError(f"unknown user {user_id}") from None

    def paper(self, paper_id: str) -> PaperRecord:
        try:
            return self.papers[paper_id]
        except KeyError:
            raise NotFoundError(f"unknown paper {paper_id}") from None

    def author(self, author_id: str) -> AuthorRecord:
        try:
            return self.authors[author_id]
        except KeyError:
            raise NotFoundError(f"unknown author {author_id}") from None

    def papers_for_author(self, author_id: str) -> list[PaperRecord]:
        """Papers with an accepted authorship claim by the author's owner.

        Sorted by updated timestamp descending, ties by paper_id ascending.
        """
        owner = self.author(author_id).owner_user_id
        papers = [
            self.papers[claim.paper_id]
            for claim in self.claims.values()
            if claim.user_id == owner and claim.is_accepted
        ]
        papers.sort(key=lambda p: (-p.updated, p.paper_id))
        return papers

    def accepted_claims_for_paper(self, paper_id: str) -> list[OwnershipClaim]:
        return [c for c in self.claims.values() if c.paper_id == paper_id and c.is_accepted]


class Store:
    """Mutable record store; one writer at a time, readers use snapshots."""

    def __init__(self) -> None:
        self._users: dict[str, UserRecord] = {}
        self._papers: dict[str, PaperRecord] = {}
        self._authors: dict[str, AuthorRecord] = {}
        self._claims: dict[tuple[str, str], OwnershipClaim] = {}
        self._author_by_owner: dict[str, str] = {}
        self._max_suffix: dict[str, int] = {}
        self._write_lock = threading.Lock()

    def snapshot(self) -> ReadView:
        """Capture an immutable view; later writes stay invisible through it."""
        with self._write_lock:
            return ReadView(
                dict(self._users), dict(self._papers), dict(self._authors), dict(self._claims)
            )

    def add_user(self, user: UserRecord) -> None:
        with self._write_lock:
            if user.user_id in self._users:
                raise ConflictError(f"duplicate user_id {user.user_id}")
            self._users[user.user_id] = user

    def add_paper(self, paper: PaperRecord) -> None:
        with self._write_lock:
            if paper.paper_id in self._papers:
                raise ConflictError(f"duplicate paper_id {paper.paper_id}")
            if paper.submitter_user_id is not None and paper.submitter_user_id not in self._users:
                raise NotFoundError(f"unknown user {paper.submitter_user_id}")
            self._papers[paper.paper_id] = paper

    def add_author(self, author: AuthorRecord) -> None:
        with self._write_lock:
            if author.author_id in self._authors:
                raise ConflictError(f"duplicate author_id {author.author_id}")
            if author.owner_user_id not in self._users:
                raise NotFoundError(f"unknown user {author.owner_user_id}")
            existing = self._author_by_owner.get(author.owner_user_id)
            if existing is not None:
                raise ConflictError(
                    f"user {author.owner_user_id} already owns author id {existing}"
                )
            self._authors[author.author_id] = author
            self._author_by_owner[author.owner_user_id] = author.author_id
            prefix, _, suffix = author.author_id.rpartition("_")
            self._max_suffix[prefix] = max(self._max_suffix.get(prefix, 0), int(suffix))

    def add_claim(self, claim: OwnershipClaim) -> None:
        with self._write_lock:
            if claim.user_id not in self._users:
                raise NotFoundError(f"unknown user {claim.user_id}")
            if claim.paper_id not in self._papers:
                raise NotFoundError(f"unknown paper {claim.paper_id}")
            key = (claim.user_id, claim.paper_id)
            if key in self._claims:
                raise ConflictError(f"duplicate claim for user {claim.user_id} on paper {claim.paper_id}")
            self._claims[key] = claim

    def register_foreign_identity(self, author_id: str, scheme: str, value: str) -> AuthorRecord:
        """Append a foreign identity to an author record; idempotent per (scheme, value)."""
        identity = ForeignIdentity(scheme=scheme, value=value)
        with self._write_lock:
            if author_id not in self._authors:
                raise NotFoundError(f"unknown author {author_id}")
            updated = self._authors[author_id].with_foreign_identity(identity)
            self._authors[author_id] = updated
            return updated

    def author_id_for_owner(self, user_id: str) -> Optional[str]:
        return self._author_by_owner.get(user_id)

    def next_suffix(self, key_prefix: str) -> int:
        """1 + the largest suffix already minted for `{surname_key}_{initial}`."""
        return self._max_suffix.get(key_prefix, 0) + 1

    def has_user(self, user_id: str) -> bool:
        return user_id in self._users


# --- JSON-Lines ingest -------------------------------------------------------

CORPUS_FILE_NAMES = ("users.jsonl", "papers.jsonl", "authors.jsonl", "foreign.jsonl", "claims.jsonl")


def _require(record: dict, key: str):
    if key not in record:
        raise ValidationError(f"missing field {key!r}")
    return record[key]


def _user_from_json(record: dict) -> UserRecord:
    return UserRecord(
        user_id=_require(record, "user_id"),
        last_name=_require(record, "last_name"),
        first_name=_require(record, "first_name"),
        emails=tuple(record.get("emails", ())),
    )


def _paper_from_json(record: dict) -> PaperRecord:
    return PaperRecord(
        paper_id=_require(record, "paper_id"),
        title=_require(record, "title"),
        abstract=_require(record, "abstract"),
        author_strings=tuple(_require(record, "authors")),
        published=parse_rfc3339(_require(record, "published")),
        updated=parse_rfc3339(_require(record, "updated")),
        submitter_user_id=record.get("submitter_user_id"),
        submitter_email=record.get("submitter_email"),
        categories=tuple(record.get("categories", ())),
    )


def _author_from_json(record: dict) -> AuthorRecord:
    foreign = tuple(
        ForeignIdentity(scheme=_require(f, "scheme"), value=_require(f, "value"))
        for f in record.get("foreign_ids", ())
    )
    return AuthorRecord(
        author_id=_require(record, "author_id"),
        owner_user_id=_require(record, "owner_user_id"),
        display_name=_require(record, "display_name"),
        alt_names=tuple(record.get("alt_names", ())),
        foreign_ids=foreign,
    )


def _claim_from_json(record: dict) -> OwnershipClaim:
    asserts = _require(record, "asserts_authorship")
    if not isinstance(asserts, bool):
        raise ValidationError("asserts_authorship must be a boolean")
    try:
        provenance = ClaimProvenance(_require(record, "provenance"))
        status = ClaimStatus(_require(record, "status"))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    return OwnershipClaim(
        user_id=_require(record, "user_id"),
        paper_id=_require(record, "paper_id"),
        asserts_authorship=asserts,
        provenance=provenance,
        status=status,
        timestamp=parse_rfc3339(_require(record, "timestamp")),
    )


def _iter_jsonl(path: Path) -> Iterable[tuple[int, dict]]:
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: malformed JSON: {exc.msg}") from None
            if not isinstance(record, dict):
                raise CorpusFormatError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, record


def load_corpus(paths: Sequence[Union[str, Path]]) -> Store:
    """Load JSON-Lines corpus files into a fresh store.

    Files are recognized by basename (users.jsonl, papers.jsonl,
    authors.jsonl, foreign.jsonl, claims.jsonl) and loaded in dependency
    order so referential integrity can be checked as records arrive.
    """
    by_kind: dict[str, list[Path]] = {name: [] for name in CORPUS_FILE_NAMES}
    for raw in paths:
        path = Path(raw)
        if path.name not in by_kind:
            raise CorpusFormatError(
                f"{path}: unrecognized corpus file name (expected one of {', '.join(CORPUS_FILE_NAMES)})"
            )
        by_kind[path.name].append(path)

    store = Store()
    loaders = {
        "users.jsonl": lambda s, rec: s.add_user(_user_from_json(rec)),
        "papers.jsonl": lambda s, rec: s.add_paper(_paper_from_json(rec)),
        "authors.jsonl": lambda s, rec: s.add_author(_author_from_json(rec)),
        "foreign.jsonl": lambda s, rec: s.register_foreign_identity(
            _require(rec, "author_id"), _require(rec, "scheme"), _require(rec, "value")
        ),
        "claims.jsonl": lambda s, rec: s.add_claim(_claim_from_json(rec)),
    }
    for name in CORPUS_FILE_NAMES:
        for path in by_kind[name]:
            if not path.exists():
                raise CorpusFormatError(f"{path}: no such file")
            for lineno, record in _iter_jsonl(path):
                try:
                    loaders[name](store, record)
                except (ValidationError, ConflictError, NotFoundError) as exc:
                    raise CorpusFormatError(f"{path}:{lineno}: {exc}") from None
    return store


def load_corpus_dir(directory: Union[str, Path]) -> Store:
    """Load whichever of the five corpus files exist under a directory."""
    root = Path(directory)
    if not root.is_dir():
        raise CorpusFormatError(f"{root}: not a directory")
    present = [root / name for name in CORPUS_FILE_NAMES if (root / name).exists()]
    return load_corpus(present)


# --- JSON-Lines export -------------------------------------------------------


def _user_to_json(user: UserRecord) -> dict:
    return {
        "user_id": user.user_id,
        "last_name": user.last_name,
        "first_name": user.first_name,
        "emails": list(user.emails),
    }


def _paper_to_json(paper: PaperRecord) -> dict:
    record = {
        "paper_id": paper.paper_id,
        "title": paper.title,
        "abstract": paper.abstract,
        "authors": list(paper.author_strings),
        "published": format_rfc3339(paper.published),
        "updated": format_rfc3339(paper.updated),
        "categories": list(paper.categories),
    }
    if paper.submitter_user_id is not None:
        record["submitter_user_id"] = paper.submitter_user_id
    if paper.submitter_email is not None:
        record["submitter_email"] = paper.submitter_email
    return record


def _author_to_json(author: AuthorRecord) -> dict:
    return {
        "author_id": author.author_id,
        "owner_user_id": author.owner_user_id,
        "display_name": author.display_name,
        "alt_names": list(author.alt_names),
        "foreign_ids": [{"scheme": f.scheme, "value": f.value} for f in author.foreign_ids],
    }


def _claim_to_json(claim: OwnershipClaim) -> dict:
    return {
        "user_id": claim.user_id,
        "paper_id": claim.paper_id,
        "asserts_authorship": claim.asserts_authorship,
        "provenance": claim.provenance.value,
        "status": claim.status.value,
        "timestamp": format_rfc3339(claim.timestamp),
    }


def export_corpus(view: ReadView, directory: Union[str, Path]) -> None:
    """Re-export a snapshot as the four JSON-Lines corpus files.

    Foreign identities are embedded in authors.jsonl. Records are written in
    sorted key order so exports are byte-stable for a given snapshot.
    """
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    outputs = [
        ("users.jsonl", [_user_to_json(view.users[k]) for k in sorted(view.users)]),
        ("papers.jsonl", [_paper_to_json(view.papers[k]) for k in sorted(view.papers)]),
        ("authors.jsonl", [_author_to_json(view.authors[k]) for k in sorted(view.authors)]),
        ("claims.jsonl", [_claim_to_json(view.claims[k]) for k in sorted(view.claims)]),
    ]
    for name, records in outputs:
        with (root / name).open("w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
                handle.write("\n")
