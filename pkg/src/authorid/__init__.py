"""Author identifiers for scholarly repositories.

Minting of human-copyable author ids, ownership claims, name blocking keys,
publication-graph joins across repositories, and a content-negotiating HTTP
resolver serving HTML, Atom, and OAI-ORE representations.
"""

from .errors import (
    AuthorIdError,
    ConflictError,
    CorpusFormatError,
    NotAcceptableError,
    NotFoundError,
    UnmappableNameError,
    ValidationError,
)
from .minting import MintPolicy, apply_claim, author_uri, endorsement_eligible, evaluate_claim, mint_author_id
from .names import (
    BlockingKey,
    NameMatch,
    ParsedName,
    blocking_key,
    dumbdown_surname,
    name_compatibility,
    name_frequency_report,
    parse_author_string,
    parse_name_parts,
)
from .negotiation import NegotiationResult, Via, negotiate
from .pubgraph import (
    IdentityAssertion,
    Node,
    PubGraph,
    build_graph,
    coauthor_edges,
    connected_components,
    dedup_papers,
    identity_classes,
    merge_graphs,
)
from .representations import (
    OreGraph,
    Representation,
    Suffix,
    canonical_ntriples,
    render_atom,
    render_html,
    render_ore,
)
from .store import (
    AuthorRecord,
    ClaimProvenance,
    ClaimStatus,
    ForeignIdentity,
    OwnershipClaim,
    PaperRecord,
    ReadView,
    Store,
    UserRecord,
    export_corpus,
    format_rfc3339,
    load_corpus,
    load_corpus_dir,
    parse_rfc3339,
)

__version__ = "0.1.0"
