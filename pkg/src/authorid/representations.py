"""Deterministic renderers for the author-URI representations.

One author resource has three faces: an HTML listing, an Atom feed, and an
OAI-ORE resource map (as canonical N-Triples and RDF/XML). All renderers
are pure functions of their inputs and byte-stable across calls, which is
what makes golden-file testing and HTTP caching behave.
"""

from __future__ import annotations

import enum
import html
from dataclasses import dataclass
from typing import NamedTuple, Sequence
from xml.etree import ElementTree as ET
from xml.sax.saxutils import escape as xml_escape
from xml.sax.saxutils import quoteattr

from .errors import ValidationError
from .minting import MintPolicy, author_uri
from .store import AuthorRecord, PaperRecord, format_rfc3339

ATOM_NS = "http://www.w3.org/2005/Atom"
ORE_NS = "http://www.openarchives.org/ore/terms/"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
FOAF_NS = "http://xmlns.com/foaf/0.1/"
DCTERMS_NS = "http://purl.org/dc/terms/"

ORE_RESOURCE_MAP = ORE_NS + "ResourceMap"
ORE_AGGREGATION = ORE_NS + "Aggregation"
ORE_DESCRIBES = ORE_NS + "describes"
ORE_AGGREGATES = ORE_NS + "aggregates"
ORE_SIMILAR_TO = ORE_NS + "similarTo"
RDF_TYPE = RDF_NS + "type"
RDF_VALUE = RDF_NS + "value"
FOAF_NAME = FOAF_NS + "name"
DCTERMS_TYPE = DCTERMS_NS + "type"


class Suffix(str, enum.Enum):
    HTML = "html"
    ATOM = "atom"
    RDF = "rdf"


MEDIA_TYPES = {
    Suffix.HTML: "text/html",
    Suffix.ATOM: "application/atom+xml",
    Suffix.RDF: "application/rdf+xml",
}
NTRIPLES_MEDIA_TYPE = "application/n-triples"


@dataclass(frozen=True)
class Representation:
    media_type: str
    body: bytes
    suffix: Suffix


class Term(NamedTuple):
    """An RDF term: a URI, a blank-node label, or a plain literal."""

    kind: str  # "uri" | "blank" | "literal"
    value: str


def uri(value: str) -> Term:
    return Term("uri", value)


def blank(label: str) -> Term:
    return Term("blank", label)


def literal(value: str) -> Term:
    return Term("literal", value)


Triple = tuple[Term, Term, Term]


@dataclass(frozen=True)
class OreGraph:
    """Triple set for one resource map describing one aggregation."""

    triples: frozenset[Triple]

    def __post_init__(self) -> None:
        maps = {s for s, p, o in self.triples if p == uri(RDF_TYPE) and o == uri(ORE_RESOURCE_MAP)}
        aggs = {s for s, p, o in self.triples if p == uri(RDF_TYPE) and o == uri(ORE_AGGREGATION)}
        if len(maps) != 1 or len(aggs) != 1:
            raise ValidationError("an ORE graph carries exactly one resource map and one aggregation")
        if (next(iter(maps)), uri(ORE_DESCRIBES), next(iter(aggs))) not in self.triples:
            raise ValidationError("the resource map must describe the aggregation")


def _abstract_url(policy: MintPolicy, paper_id: str) -> str:
    return f"{policy.base_url}/abs/{paper_id}"


# --- HTML --------------------------------------------------------------------


def render_html(author: AuthorRecord, papers: Sequence[PaperRecord], policy: MintPolicy) -> Representation:
    """HTML5 listing page; papers are expected in recency order."""
    heading = html.escape(f"Articles by {author.display_name}")
    lines = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8"/>',
        f"<title>{heading}</title>",
        "</head>",
        "<body>",
        f"<h1>{heading}</h1>",
    ]
    if papers:
        lines.append('<ul class="articles">')
        for paper in papers:
            link = html.escape(_abstract_url(policy, paper.paper_id), quote=True)
            lines.append("<li>")
            lines.append(f'<a href="{link}">{html.escape(paper.title)}</a>')
            lines.append(f'<span class="authors">{html.escape(", ".join(paper.author_strings))}</span>')
            lines.append(f'<span class="updated">{format_rfc3339(paper.updated)[:10]}</span>')
            lines.append("</li>")
        lines.append("</ul>")
    else:
        lines.append('<p class="empty">No articles on record for this author.</p>')
    lines.extend(["</body>", "</html>", ""])
    return Representation(
        media_type=MEDIA_TYPES[Suffix.HTML], body="\n".join(lines).encode("utf-8"), suffix=Suffix.HTML
    )


# --- Atom --------------------------------------------------------------------


def render_atom(
    author: AuthorRecord,
    papers: Sequence[PaperRecord],
    policy: MintPolicy,
    generated_at: int,
) -> Representation:
    """Atom 1.0 feed of the author's papers, byte-deterministic given generated_at."""
    feed = ET.Element("feed", {"xmlns": ATOM_NS})
    ET.SubElement(feed, "id").text = author_uri(policy, author.author_id)
    ET.SubElement(feed, "title").text = f"Articles by {author.display_name}"
    ET.SubElement(feed, "updated").text = format_rfc3339(generated_at)
    feed_author = ET.SubElement(feed, "author")
    ET.SubElement(feed_author, "name").text = author.display_name
    for paper in papers:
        entry = ET.SubElement(feed, "entry")
        link = _abstract_url(policy, paper.paper_id)
        ET.SubElement(entry, "id").text = link
        ET.SubElement(entry, "title").text = paper.title
        ET.SubElement(entry, "summary").text = paper.abstract
        for name in paper.author_strings:
            entry_author = ET.SubElement(entry, "author")
            ET.SubElement(entry_author, "name").text = name
        ET.SubElement(entry, "published").text = format_rfc3339(paper.published)
        ET.SubElement(entry, "updated").text = format_rfc3339(paper.updated)
        ET.SubElement(entry, "link", {"rel": "alternate", "type": "text/html", "href": link})
    body = '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(feed, encoding="unicode") + "\n"
    return Representation(
        media_type=MEDIA_TYPES[Suffix.ATOM], body=body.encode("utf-8"), suffix=Suffix.ATOM
    )


# --- OAI-ORE -----------------------------------------------------------------


def _ore_triples(
    author: AuthorRecord, papers: Sequence[PaperRecord], policy: MintPolicy
) -> list[Triple]:
    """Generation-ordered triples; blank nodes are labeled idN at first use."""
    agg = uri(author_uri(policy, author.author_id))
    rem = uri(agg.value + ".rdf")
    triples: list[Triple] = [
        (rem, uri(RDF_TYPE), uri(ORE_RESOURCE_MAP)),
        (rem, uri(ORE_DESCRIBES), agg),
        (agg, uri(RDF_TYPE), uri(ORE_AGGREGATION)),
        (agg, uri(FOAF_NAME), literal(author.display_name)),
    ]
    triples.extend((agg, uri(FOAF_NAME), literal(alt)) for alt in author.alt_names)
    triples.extend((agg, uri(ORE_AGGREGATES), uri(_abstract_url(policy, p.paper_id))) for p in papers)
    blanks = 0
    for identity in author.foreign_ids:
        if identity.is_uri:
            triples.append((agg, uri(ORE_SIMILAR_TO), uri(identity.value)))
        else:
            # A string-valued identity cannot be linked directly; it hangs off
            # an intermediate node carrying the value and its scheme.
            blanks += 1
            node = blank(f"id{blanks}")
            triples.append((agg, uri(ORE_SIMILAR_TO), node))
            triples.append((node, uri(RDF_VALUE), literal(identity.value)))
            triples.append((node, uri(DCTERMS_TYPE), literal(identity.scheme)))
    return triples


def _escape_literal(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def _term_ntriples(term: Term, blank_labels: dict[str, str]) -> str:
    if term.kind == "uri":
        if any(c in term.value for c in '<>"{}|^`') or any(ord(c) <= 0x20 for c in term.value):
            raise ValidationError(f"URI not serializable in N-Triples: {term.value!r}")
        return f"<{term.value}>"
    if term.kind == "blank":
        if term.value not in blank_labels:
            blank_labels[term.value] = f"id{len(blank_labels) + 1}"
        return f"_:{blank_labels[term.value]}"
    return f'"{_escape_literal(term.value)}"'


def canonical_ntriples(triples: Sequence[Triple]) -> bytes:
    """Canonical N-Triples: blank nodes relabeled _:idN in first-use order
    over the given sequence, then lines sorted bytewise."""
    blank_labels: dict[str, str] = {}
    lines = [
        " ".join((_term_ntriples(s, blank_labels), _term_ntriples(p, blank_labels), _term_ntriples(o, blank_labels), "."))
        for s, p, o in triples
    ]
    return b"\n".join(sorted(line.encode("utf-8") for line in lines)) + b"\n"


def _render_rdfxml(
    author: AuthorRecord, papers: Sequence[PaperRecord], policy: MintPolicy
) -> bytes:
    """Fixed RDF/XML template carrying the same statements as the triples."""
    agg = author_uri(policy, author.author_id)
    rem = agg + ".rdf"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<rdf:RDF xmlns:rdf={quoteattr(RDF_NS)} xmlns:ore={quoteattr(ORE_NS)}'
        f" xmlns:foaf={quoteattr(FOAF_NS)} xmlns:dcterms={quoteattr(DCTERMS_NS)}>",
        f"  <ore:ResourceMap rdf:about={quoteattr(rem)}>",
        f"    <ore:describes rdf:resource={quoteattr(agg)}/>",
        "  </ore:ResourceMap>",
        f"  <ore:Aggregation rdf:about={quoteattr(agg)}>",
        f"    <foaf:name>{xml_escape(author.display_name)}</foaf:name>",
    ]
    lines.extend(f"    <foaf:name>{xml_escape(alt)}</foaf:name>" for alt in author.alt_names)
    lines.extend(
        f"    <ore:aggregates rdf:resource={quoteattr(_abstract_url(policy, p.paper_id))}/>"
        for p in papers
    )
    blanks = 0
    for identity in author.foreign_ids:
        if identity.is_uri:
            lines.append(f"    <ore:similarTo rdf:resource={quoteattr(identity.value)}/>")
        else:
            blanks += 1
            lines.extend(
                [
                    "    <ore:similarTo>",
                    f'      <rdf:Description rdf:nodeID="id{blanks}">',
                    f"        <rdf:value>{xml_escape(identity.value)}</rdf:value>",
                    f"        <dcterms:type>{xml_escape(identity.scheme)}</dcterms:type>",
                    "      </rdf:Description>",
                    "    </ore:similarTo>",
                ]
            )
    lines.extend(["  </ore:Aggregation>", "</rdf:RDF>", ""])
    return "\n".join(lines).encode("utf-8")


def render_ore(
    author: AuthorRecord, papers: Sequence[PaperRecord], policy: MintPolicy
) -> tuple[OreGraph, Representation, Representation]:
    """ORE resource map for an author: triple graph, canonical N-Triples,
    and an RDF/XML rendering for content negotiation."""
    triples = _ore_triples(author, papers, policy)
    graph = OreGraph(triples=frozenset(triples))
    ntriples = Representation(
        media_type=NTRIPLES_MEDIA_TYPE, body=canonical_ntriples(triples), suffix=Suffix.RDF
    )
    rdfxml = Representation(
        media_type=MEDIA_TYPES[Suffix.RDF], body=_render_rdfxml(author, papers, policy), suffix=Suffix.RDF
    )
    return graph, ntriples, rdfxml
