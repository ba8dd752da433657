"""Command-line interface: a thin layer over the core package.

Read commands (`stats`, `endorse-check`, `export`, `join`) work on snapshots
of a JSON-Lines data directory; write commands (`mint`, `claim`) rewrite the
directory via full re-export. `serve` starts the HTTP resolver.
"""

from __future__ import annotations

import functools
import json
import time
from pathlib import Path

import click

from .errors import AuthorIdError, CorpusFormatError, ValidationError
from .minting import MintPolicy, apply_claim, author_uri, endorsement_eligible, evaluate_claim, mint_author_id
from .names import format_frequency_report, name_frequency_report, parse_author_string
from .pubgraph import AUTHOR, PAPER, IdentityAssertion, Node, build_graph, connected_components, merge_graphs
from .representations import render_atom, render_html, render_ore
from .store import ClaimProvenance, ClaimStatus, export_corpus, load_corpus_dir, parse_rfc3339

_DATA_OPTION = click.option(
    "--data",
    "data_dir",
    envvar="AUTHORID_DATA",
    default="data",
    show_default=True,
    help="Directory holding the JSON-Lines corpus files.",
)
_BASE_URL_OPTION = click.option(
    "--base-url",
    envvar="AUTHORID_BASE_URL",
    default="http://arxiv.org",
    show_default=True,
    help="Absolute URI prefix for author and abstract URLs.",
)


def _friendly_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except AuthorIdError as exc:
            raise click.ClickException(str(exc)) from None

    return wrapper


@click.group()
def main() -> None:
    """Author identifiers: minting, claims, stats, graph joins, and a resolver."""


@main.group()
def stats() -> None:
    """Corpus statistics."""


@stats.command("names")
@_DATA_OPTION
@click.option("--top", default=10, show_default=True, help="Number of rows to print.")
@_friendly_errors
def stats_names(data_dir: str, top: int) -> None:
    """Print the most frequent (lastname, initial) blocking keys."""
    view = load_corpus_dir(data_dir).snapshot()
    click.echo(format_frequency_report(name_frequency_report(view), top=top))


@main.command()
@_DATA_OPTION
@click.option("--user", "user_id", required=True, help="Owning user id.")
@click.option("--name", "name_text", required=True, help='Author name, e.g. "Warner, Simeon".')
@_BASE_URL_OPTION
@_friendly_errors
def mint(data_dir: str, user_id: str, name_text: str, base_url: str) -> None:
    """Mint an author identifier for a user and persist it."""
    store = load_corpus_dir(data_dir)
    author_id = mint_author_id(store, user_id, parse_author_string(name_text))
    export_corpus(store.snapshot(), data_dir)
    click.echo(author_id)
    click.echo(author_uri(MintPolicy(base_url=base_url), author_id))


@main.command()
@_DATA_OPTION
@click.option("--user", "user_id", required=True)
@click.option("--paper", "paper_id", required=True)
@click.option(
    "--force-status",
    type=click.Choice([s.value for s in ClaimStatus]),
    default=None,
    help="Admin override: record the claim with this status instead of evaluating.",
)
@click.option("--max-authors", default=10, show_default=True, help="Auto-claim author-count limit.")
@_friendly_errors
def claim(data_dir: str, user_id: str, paper_id: str, force_status: str | None, max_authors: int) -> None:
    """Evaluate and record an ownership claim."""
    store = load_corpus_dir(data_dir)
    if force_status is not None:
        decision = ClaimStatus(force_status)
        provenance = ClaimProvenance.ADMIN
    else:
        policy = MintPolicy(auto_claim_max_authors=max_authors)
        decision = evaluate_claim(store.snapshot(), policy, user_id, paper_id)
        provenance = ClaimProvenance.USER_CLAIM
    apply_claim(store, user_id, paper_id, decision, provenance=provenance)
    export_corpus(store.snapshot(), data_dir)
    click.echo(decision.value)


@main.command("endorse-check")
@_DATA_OPTION
@click.option("--author", "author_id", required=True)
@click.option("--threshold", default=3, show_default=True, help="Accepted papers needed to endorse.")
@_friendly_errors
def endorse_check(data_dir: str, author_id: str, threshold: int) -> None:
    """Report whether an author may endorse new submitters."""
    view = load_corpus_dir(data_dir).snapshot()
    policy = MintPolicy(endorsement_threshold=threshold)
    eligible = endorsement_eligible(view, policy, author_id)
    owned = len(view.papers_for_author(author_id))
    click.echo(f"{author_id}: {'eligible' if eligible else 'not eligible'} ({owned}/{threshold} papers)")


def _read_assertions(path: Path) -> list[IdentityAssertion]:
    assertions = []
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                left = Node(record["left_repo"], record["left_kind"], record["left_id"])
                right = Node(record["right_repo"], record["right_kind"], record["right_id"])
                if left.kind not in (AUTHOR, PAPER) or right.kind not in (AUTHOR, PAPER):
                    raise ValidationError(f"kind must be {AUTHOR!r} or {PAPER!r}")
                assertions.append(IdentityAssertion(left=left, right=right, source=record.get("source", "")))
            except (json.JSONDecodeError, KeyError, TypeError, ValidationError) as exc:
                raise CorpusFormatError(f"{path}:{lineno}: bad assertion: {exc}") from None
    return assertions


@main.command()
@click.option("--left", "left_dir", required=True, help="First repository data directory.")
@click.option("--right", "right_dir", required=True, help="Second repository data directory.")
@click.option("--assertions", "assertions_file", required=True, help="JSON-Lines sameAs assertions.")
@click.option("--left-label", default=None, help="Repo label for --left (default: directory name).")
@click.option("--right-label", default=None, help="Repo label for --right (default: directory name).")
@click.option("--out", "out_file", default=None, help="Write components here instead of stdout.")
@_friendly_errors
def join(
    left_dir: str,
    right_dir: str,
    assertions_file: str,
    left_label: str | None,
    right_label: str | None,
    out_file: str | None,
) -> None:
    """Join two repository graphs through identity assertions; emit components."""
    left_label = left_label or Path(left_dir).name or "left"
    right_label = right_label or Path(right_dir).name or "right"
    left = build_graph(load_corpus_dir(left_dir).snapshot(), left_label)
    right = build_graph(load_corpus_dir(right_dir).snapshot(), right_label)
    merged = merge_graphs(left, right, _read_assertions(Path(assertions_file)))
    components = connected_components(merged)
    lines = [
        json.dumps(
            {"component_label": label.label(), "members": [m.label() for m in members]},
            ensure_ascii=False,
        )
        for label, members in sorted(components.items())
    ]
    text = "\n".join(lines) + ("\n" if lines else "")
    if out_file is None:
        click.echo(text, nl=False)
    else:
        Path(out_file).write_text(text, encoding="utf-8")


@main.command()
@_DATA_OPTION
@click.option("--author", "author_id", required=True)
@click.option("--format", "fmt", required=True, type=click.Choice(["html", "atom", "ntriples", "rdfxml"]))
@_BASE_URL_OPTION
@click.option("--generated-at", default=None, help="RFC 3339 feed timestamp (atom only; default: now).")
@_friendly_errors
def export(data_dir: str, author_id: str, fmt: str, base_url: str, generated_at: str | None) -> None:
    """Write one representation of an author resource to stdout."""
    view = load_corpus_dir(data_dir).snapshot()
    author = view.author(author_id)
    papers = view.papers_for_author(author_id)
    policy = MintPolicy(base_url=base_url)
    if fmt == "html":
        rep = render_html(author, papers, policy)
    elif fmt == "atom":
        moment = parse_rfc3339(generated_at) if generated_at else int(time.time())
        rep = render_atom(author, papers, policy, moment)
    else:
        _, ntriples, rdfxml = render_ore(author, papers, policy)
        rep = ntriples if fmt == "ntriples" else rdfxml
    click.get_binary_stream("stdout").write(rep.body)


@main.command()
@_DATA_OPTION
@_BASE_URL_OPTION
@click.option("--host", envvar="AUTHORID_HOST", default="127.0.0.1", show_default=True)
@click.option("--port", envvar="AUTHORID_PORT", default=8080, show_default=True)
@_friendly_errors
def serve(data_dir: str, base_url: str, host: str, port: int) -> None:
    """Run the HTTP resolver over a data directory."""
    import uvicorn

    from .service import create_app

    app = create_app(data_dir, base_url=base_url)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
