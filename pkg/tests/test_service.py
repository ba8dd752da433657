import pytest
from fastapi.testclient import TestClient

from authorid.service import create_app
from authorid.store import export_corpus

from synth import three_paper_author_store


@pytest.fixture
def client(lee_data_dir):
    app = create_app(lee_data_dir, base_url="http://arxiv.org")
    return TestClient(app)


class TestHealth:
    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.text == "ok"


class TestAuthorRedirect:
    def test_default_redirects_to_html(self, client):
        response = client.get("/a/lee_a_1", follow_redirects=False)
        assert response.status_code == 303
        assert response.headers["location"] == "/a/lee_a_1.html"
        assert response.headers["vary"] == "Accept"

    def test_accept_atom(self, client):
        response = client.get(
            "/a/lee_a_1", headers={"Accept": "application/atom+xml"}, follow_redirects=False
        )
        assert response.status_code == 303
        assert response.headers["location"] == "/a/lee_a_1.atom"

    def test_accept_rdf(self, client):
        response = client.get(
            "/a/lee_a_1", headers={"Accept": "application/rdf+xml"}, follow_redirects=False
        )
        assert response.headers["location"] == "/a/lee_a_1.rdf"

    def test_unknown_author_404(self, client):
        assert client.get("/a/nobody_x_9", follow_redirects=False).status_code == 404

    def test_not_acceptable_406(self, client):
        response = client.get(
            "/a/lee_a_1", headers={"Accept": "text/plain"}, follow_redirects=False
        )
        assert response.status_code == 406
        assert response.headers["vary"] == "Accept"

    def test_redirect_target_resolves(self, client):
        redirect = client.get(
            "/a/lee_a_1", headers={"Accept": "application/atom+xml"}, follow_redirects=False
        )
        followed = client.get(redirect.headers["location"])
        assert followed.status_code == 200
        assert followed.headers["content-type"] == "application/atom+xml"


class TestRepresentations:
    def test_html(self, client):
        response = client.get("/a/lee_a_1.html")
        assert response.status_code == 200
        assert response.headers["content-type"] == "text/html; charset=utf-8"
        assert response.headers["access-control-allow-origin"] == "*"
        assert "Articles by Ang Lee" in response.text

    def test_atom(self, client):
        response = client.get("/a/lee_a_1.atom")
        assert response.status_code == 200
        assert response.headers["content-type"] == "application/atom+xml"
        assert response.text.count("<entry>") == 3

    def test_rdf(self, client):
        response = client.get("/a/lee_a_1.rdf")
        assert response.status_code == 200
        assert response.headers["content-type"] == "application/rdf+xml"
        assert "ore:Aggregation" in response.text

    def test_unknown_extension_404(self, client):
        assert client.get("/a/lee_a_1.pdf").status_code == 404

    def test_unknown_author_404(self, client):
        response = client.get("/a/nobody_x_9.html")
        assert response.status_code == 404
        assert response.headers["access-control-allow-origin"] == "*"

    def test_bare_extension_404(self, client):
        assert client.get("/a/.html").status_code == 404

    def test_repeat_requests_byte_identical(self, client):
        for path in ("/a/lee_a_1.html", "/a/lee_a_1.atom", "/a/lee_a_1.rdf"):
            assert client.get(path).content == client.get(path).content


class TestJsonApi:
    def test_author_info(self, client):
        payload = client.get("/api/authors/lee_a_1").json()
        assert payload["author_id"] == "lee_a_1"
        assert payload["uri"] == "http://arxiv.org/a/lee_a_1"
        assert payload["display_name"] == "Ang Lee"
        assert payload["paper_count"] == 3
        schemes = {f["scheme"]: f["is_uri"] for f in payload["foreign_identities"]}
        assert schemes == {"dai": True, "researcherid": False}

    def test_author_info_404(self, client):
        assert client.get("/api/authors/nobody_x_9").status_code == 404

    def test_name_stats(self, client):
        rows = client.get("/api/stats/names?top=5").json()
        assert rows[0] == {"surname_key": "lee", "first_initial": "a", "count": 1}


class TestSnapshotReload:
    def test_reload_swaps_snapshot(self, tmp_path):
        data = tmp_path / "data"
        store = three_paper_author_store()
        export_corpus(store.snapshot(), data)
        app = create_app(data, base_url="http://arxiv.org")
        client = TestClient(app)
        assert client.get("/api/authors/lee_a_1").json()["paper_count"] == 3

        store.register_foreign_identity("lee_a_1", "scopus", "7103063073")
        export_corpus(store.snapshot(), data)
        app.state.authorid.reload()
        schemes = {f["scheme"] for f in client.get("/api/authors/lee_a_1").json()["foreign_identities"]}
        assert "scopus" in schemes
