"""FastAPI resolver for author URIs with content negotiation.

`GET /a/{id}` 303-redirects to the negotiated representation; the suffix
URLs (`/a/{id}.html|.atom|.rdf`) serve the rendered bodies with permissive
CORS so the embeddable widget can fetch feeds cross-origin. A small JSON API
exposes author details and the blocking-key frequency report.

Write operations (minting, claims) are deliberately not exposed over HTTP;
they go through the CLI against the data directory.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import PlainTextResponse, RedirectResponse
from pydantic import BaseModel

from .errors import NotAcceptableError, NotFoundError
from .minting import MintPolicy, author_uri
from .names import name_frequency_report
from .negotiation import negotiate
from .representations import Suffix, render_atom, render_html, render_ore
from .store import ReadView, load_corpus_dir

_CORS = {"Access-Control-Allow-Origin": "*"}


class ForeignIdentityInfo(BaseModel):
    scheme: str
    value: str
    is_uri: bool


class AuthorInfo(BaseModel):
    author_id: str
    uri: str
    display_name: str
    alt_names: list[str]
    foreign_identities: list[ForeignIdentityInfo]
    paper_count: int


class NameStatsRow(BaseModel):
    surname_key: str
    first_initial: str
    count: int


class DataState:
    """Holds the served snapshot; reload swaps it atomically."""

    def __init__(self, data_dir: Union[str, Path], policy: MintPolicy) -> None:
        self.data_dir = Path(data_dir)
        self.policy = policy
        self._current: tuple[ReadView, int] = (load_corpus_dir(self.data_dir).snapshot(), int(time.time()))

    @property
    def current(self) -> tuple[ReadView, int]:
        return self._current

    def reload(self) -> None:
        view = load_corpus_dir(self.data_dir).snapshot()
        self._current = (view, int(time.time()))


def _representation_response(state: DataState, author_id: str, suffix: Suffix) -> Response:
    view, generated_at = state.current
    if author_id not in view.authors:
        raise HTTPException(status_code=404, detail=f"unknown author {author_id}", headers=_CORS)
    author = view.authors[author_id]
    papers = view.papers_for_author(author_id)
    if suffix is Suffix.HTML:
        rep = render_html(author, papers, state.policy)
        media_type = "text/html; charset=utf-8"
    elif suffix is Suffix.ATOM:
        rep = render_atom(author, papers, state.policy, generated_at)
        media_type = rep.media_type
    else:
        _, _, rep = render_ore(author, papers, state.policy)
        media_type = rep.media_type
    return Response(content=rep.body, media_type=media_type, headers=_CORS)


def create_app(
    data_dir: Union[str, Path],
    base_url: str = "http://arxiv.org",
    policy: Optional[MintPolicy] = None,
) -> FastAPI:
    policy = policy if policy is not None else MintPolicy(base_url=base_url)
    app = FastAPI(title="authorid resolver", version="0.1.0")
    state = DataState(data_dir, policy)
    app.state.authorid = state

    @app.get("/healthz")
    def healthz() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.get("/a/{ref}")
    def get_author(ref: str, request: Request) -> Response:
        view, _ = state.current
        if "." in ref:
            author_id, _, ext = ref.rpartition(".")
            try:
                result = negotiate(suffix=ext)
            except NotFoundError as exc:
                raise HTTPException(status_code=404, detail=str(exc), headers=_CORS) from None
            if not author_id:
                raise HTTPException(status_code=404, detail="missing author id", headers=_CORS)
            return _representation_response(state, author_id, result.chosen)
        if ref not in view.authors:
            raise HTTPException(status_code=404, detail=f"unknown author {ref}")
        try:
            result = negotiate(accept_header=request.headers.get("accept"))
        except NotAcceptableError as exc:
            return PlainTextResponse(str(exc), status_code=406, headers={"Vary": "Accept"})
        return RedirectResponse(
            url=f"/a/{ref}.{result.chosen.value}",
            status_code=303,
            headers={"Vary": "Accept"},
        )

    @app.get("/api/authors/{author_id}", response_model=AuthorInfo)
    def get_author_info(author_id: str) -> AuthorInfo:
        view, _ = state.current
        if author_id not in view.authors:
            raise HTTPException(status_code=404, detail=f"unknown author {author_id}")
        author = view.authors[author_id]
        return AuthorInfo(
            author_id=author.author_id,
            uri=author_uri(policy, author.author_id),
            display_name=author.display_name,
            alt_names=list(author.alt_names),
            foreign_identities=[
                ForeignIdentityInfo(scheme=f.scheme, value=f.value, is_uri=f.is_uri)
                for f in author.foreign_ids
            ],
            paper_count=len(view.papers_for_author(author_id)),
        )

    @app.get("/api/stats/names", response_model=list[NameStatsRow])
    def get_name_stats(top: int = 10) -> list[NameStatsRow]:
        view, _ = state.current
        report = name_frequency_report(view)
        return [
            NameStatsRow(surname_key=key.surname_key, first_initial=key.first_initial, count=count)
            for key, count in report[: max(top, 0)]
        ]

    return app
