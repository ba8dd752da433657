import random
from collections import defaultdict

import pytest

from authorid.errors import ConflictError, NotFoundError, UnmappableNameError, ValidationError
from authorid.minting import (
    MintPolicy,
    apply_claim,
    author_uri,
    endorsement_eligible,
    evaluate_claim,
    mint_author_id,
)
from authorid.names import parse_author_string, parse_name_parts
from authorid.store import (
    AuthorRecord,
    ClaimProvenance,
    ClaimStatus,
    OwnershipClaim,
    PaperRecord,
    Store,
    UserRecord,
)

from synth import build_corpus, mint_all


class TestMintPolicy:
    def test_trailing_slash_stripped(self):
        assert MintPolicy(base_url="http://arxiv.org/").base_url == "http://arxiv.org"

    def test_relative_base_rejected(self):
        with pytest.raises(ValidationError):
            MintPolicy(base_url="arxiv.org")

    def test_thresholds_must_be_positive(self):
        with pytest.raises(ValidationError):
            MintPolicy(auto_claim_max_authors=0)
        with pytest.raises(ValidationError):
            MintPolicy(endorsement_threshold=0)

    def test_defaults(self):
        policy = MintPolicy()
        assert policy.auto_claim_max_authors == 10
        assert policy.endorsement_threshold == 3


class TestMintAuthorId:
    def test_first_warner(self):
        store = Store()
        store.add_user(UserRecord("u1", "Warner", "Simeon"))
        assert mint_author_id(store, "u1", parse_author_string("Warner, Simeon")) == "warner_s_1"

    def test_first_lee(self):
        store = Store()
        store.add_user(UserRecord("u1", "Lee", "Ang"))
        assert mint_author_id(store, "u1", parse_author_string("Ang Lee")) == "lee_a_1"

    def test_second_person_same_key(self):
        store = Store()
        store.add_user(UserRecord("u1", "Lee", "Ang"))
        store.add_user(UserRecord("u2", "Lee", "Alice"))
        mint_author_id(store, "u1", parse_author_string("Ang Lee"))
        assert mint_author_id(store, "u2", parse_author_string("Alice Lee")) == "lee_a_2"

    def test_display_name_forms(self):
        store = Store()
        store.add_user(UserRecord("u1", "Warner", "Simeon"))
        store.add_user(UserRecord("u2", "Zhang", "Yi"))
        mint_author_id(store, "u1", parse_author_string("Warner, Simeon"))
        mint_author_id(store, "u2", parse_author_string("Zhang, Y."))
        view = store.snapshot()
        assert view.author("warner_s_1").display_name == "Simeon Warner"
        assert view.author("zhang_y_1").display_name == "Y. Zhang"

    def test_user_cannot_mint_twice(self):
        store = Store()
        store.add_user(UserRecord("u1", "Warner", "Simeon"))
        mint_author_id(store, "u1", parse_author_string("Warner, Simeon"))
        with pytest.raises(ConflictError):
            mint_author_id(store, "u1", parse_author_string("Warner, Sim"))

    def test_unknown_user(self):
        with pytest.raises(NotFoundError):
            mint_author_id(Store(), "ghost", parse_author_string("Warner, S"))

    def test_unmappable_name(self):
        store = Store()
        store.add_user(UserRecord("u1", "諸葛", "亮"))
        with pytest.raises(UnmappableNameError):
            mint_author_id(store, "u1", parse_name_parts("諸葛", "A"))

    def test_name_without_initial_rejected(self):
        store = Store()
        store.add_user(UserRecord("u1", "Cher", ""))
        with pytest.raises(ValidationError):
            mint_author_id(store, "u1", parse_name_parts("Cher", None))

    def test_rerun_on_same_state_reproduces_id(self):
        def fresh():
            store = Store()
            store.add_user(UserRecord("u1", "Lee", "Ang"))
            store.add_user(UserRecord("u2", "Lee", "Alice"))
            mint_author_id(store, "u1", parse_author_string("Ang Lee"))
            return mint_author_id(store, "u2", parse_author_string("Alice Lee"))

        assert fresh() == fresh()

    def test_suffixes_form_contiguous_range(self):
        store = build_corpus(random.Random(17), n_users=150, n_papers=0)
        minted = mint_all(store, random.Random(18))
        assert len(minted) == len(set(minted))
        by_key = defaultdict(list)
        for author_id in minted:
            prefix, _, suffix = author_id.rpartition("_")
            by_key[prefix].append(int(suffix))
        for suffixes in by_key.values():
            assert sorted(suffixes) == list(range(1, len(suffixes) + 1))


class TestAuthorUri:
    @pytest.mark.parametrize(
        "base,author_id,expected",
        [
            ("http://arxiv.org", "warner_s_1", "http://arxiv.org/a/warner_s_1"),
            ("http://example.org", "lee_a_1", "http://example.org/a/lee_a_1"),
            ("http://arxiv.org", "kurtz_m_1", "http://arxiv.org/a/kurtz_m_1"),
        ],
    )
    def test_examples(self, base, author_id, expected):
        assert author_uri(MintPolicy(base_url=base), author_id) == expected

    def test_malformed_id_rejected(self):
        with pytest.raises(ValidationError):
            author_uri(MintPolicy(), "Warner_S_1")


def _claims_fixture():
    store = Store()
    store.add_user(UserRecord("u_warner", "Warner", "Simeon", ("simeon@example.org",)))
    store.add_user(UserRecord("u_lee", "Lee", "Ang", ("ang@example.org",)))
    store.add_user(UserRecord("u_lee2", "Lee", "Alice", ("alice@example.org",)))
    store.add_paper(
        PaperRecord(
            "p_email",
            "Submitted by Warner",
            "A.",
            ("Somebody Else",),
            published=1,
            updated=1,
            submitter_email="simeon@example.org",
        )
    )
    store.add_paper(
        PaperRecord("p_name", "By name", "A.", ("S. Warner", "Ang Lee"), published=1, updated=2)
    )
    big_authors = tuple(f"Author Number{i}" for i in range(11)) + ("A. Lee",)
    store.add_paper(
        PaperRecord("p_big", "Collaboration", "A.", big_authors, published=1, updated=3)
    )
    return store


class TestEvaluateClaim:
    def test_email_match_auto_accepts(self):
        store = _claims_fixture()
        decision = evaluate_claim(store.snapshot(), MintPolicy(), "u_warner", "p_email")
        assert decision is ClaimStatus.AUTO_ACCEPTED

    def test_compatible_name_auto_accepts(self):
        store = _claims_fixture()
        decision = evaluate_claim(store.snapshot(), MintPolicy(), "u_warner", "p_name")
        assert decision is ClaimStatus.AUTO_ACCEPTED

    def test_oversized_author_list_defers(self):
        store = _claims_fixture()
        decision = evaluate_claim(store.snapshot(), MintPolicy(), "u_lee", "p_big")
        assert decision is ClaimStatus.PENDING

    def test_incompatible_with_every_slot_rejects(self):
        store = _claims_fixture()
        store.add_user(UserRecord("u_zhang", "Zhang", "Yi"))
        decision = evaluate_claim(store.snapshot(), MintPolicy(), "u_zhang", "p_name")
        assert decision is ClaimStatus.REJECTED

    def test_contested_slot_defers(self):
        store = _claims_fixture()
        apply_claim(store, "u_lee", "p_name", ClaimStatus.AUTO_ACCEPTED)
        decision = evaluate_claim(store.snapshot(), MintPolicy(), "u_lee2", "p_name")
        assert decision is ClaimStatus.PENDING

    def test_free_slot_still_accepts_other_user(self):
        store = _claims_fixture()
        apply_claim(store, "u_warner", "p_name", ClaimStatus.AUTO_ACCEPTED)
        decision = evaluate_claim(store.snapshot(), MintPolicy(), "u_lee", "p_name")
        assert decision is ClaimStatus.AUTO_ACCEPTED

    def test_duplicate_claim_conflicts(self):
        store = _claims_fixture()
        apply_claim(store, "u_warner", "p_name", ClaimStatus.AUTO_ACCEPTED)
        with pytest.raises(ConflictError):
            evaluate_claim(store.snapshot(), MintPolicy(), "u_warner", "p_name")

    def test_unknown_ids(self):
        store = _claims_fixture()
        with pytest.raises(NotFoundError):
            evaluate_claim(store.snapshot(), MintPolicy(), "ghost", "p_name")
        with pytest.raises(NotFoundError):
            evaluate_claim(store.snapshot(), MintPolicy(), "u_warner", "x1")

    def test_pure_function_of_inputs(self):
        store = _claims_fixture()
        view = store.snapshot()
        first = evaluate_claim(view, MintPolicy(), "u_lee", "p_name")
        second = evaluate_claim(view, MintPolicy(), "u_lee", "p_name")
        assert first is second


class TestApplyClaim:
    def test_accepted_claim_grows_paper_list(self):
        store = _claims_fixture()
        store.add_author(AuthorRecord("warner_s_1", "u_warner", "Simeon Warner"))
        before = len(store.snapshot().papers_for_author("warner_s_1"))
        apply_claim(store, "u_warner", "p_name", ClaimStatus.AUTO_ACCEPTED, timestamp=5)
        after = len(store.snapshot().papers_for_author("warner_s_1"))
        assert after == before + 1

    def test_pending_claim_does_not(self):
        store = _claims_fixture()
        store.add_author(AuthorRecord("warner_s_1", "u_warner", "Simeon Warner"))
        apply_claim(store, "u_warner", "p_big", ClaimStatus.PENDING, timestamp=5)
        assert store.snapshot().papers_for_author("warner_s_1") == []

    def test_reapply_conflicts(self):
        store = _claims_fixture()
        apply_claim(store, "u_warner", "p_name", ClaimStatus.AUTO_ACCEPTED)
        with pytest.raises(ConflictError):
            apply_claim(store, "u_warner", "p_name", ClaimStatus.AUTO_ACCEPTED)

    def test_provenance_restricted(self):
        store = _claims_fixture()
        with pytest.raises(ValidationError):
            apply_claim(store, "u_warner", "p_name", ClaimStatus.PENDING,
                        provenance=ClaimProvenance.SUBMISSION)

    def test_admin_provenance_recorded(self):
        store = _claims_fixture()
        claim = apply_claim(store, "u_warner", "p_big", ClaimStatus.AUTO_ACCEPTED,
                            provenance=ClaimProvenance.ADMIN, timestamp=7)
        assert claim.provenance is ClaimProvenance.ADMIN
        assert store.snapshot().claims[("u_warner", "p_big")] == claim


class TestEndorsement:
    def _author_with_papers(self, accepted: int):
        store = Store()
        store.add_user(UserRecord("u1", "Warner", "Simeon"))
        mint_author_id(store, "u1", parse_author_string("Warner, Simeon"))
        for i in range(accepted):
            store.add_paper(
                PaperRecord(f"p{i}", f"T{i}", "A.", ("S. Warner",), published=1, updated=1 + i)
            )
            store.add_claim(
                OwnershipClaim("u1", f"p{i}", True, ClaimProvenance.SUBMISSION,
                               ClaimStatus.AUTO_ACCEPTED, 1)
            )
        return store

    def test_threshold_boundary(self):
        store = self._author_with_papers(3)
        assert endorsement_eligible(store.snapshot(), MintPolicy(), "warner_s_1") is True

    def test_below_threshold(self):
        store = self._author_with_papers(2)
        assert endorsement_eligible(store.snapshot(), MintPolicy(), "warner_s_1") is False

    def test_zero_papers(self):
        store = self._author_with_papers(0)
        assert endorsement_eligible(store.snapshot(), MintPolicy(endorsement_threshold=1), "warner_s_1") is False

    def test_unknown_author(self):
        with pytest.raises(NotFoundError):
            endorsement_eligible(Store().snapshot(), MintPolicy(), "nobody_x_9")


class TestClaimSafetyProperty:
    def test_no_unsupported_auto_accepts(self):
        # Exhaustive re-evaluation over random corpora: every auto-accepted
        # decision must be explainable by an email match or a compatible slot.
        from authorid.names import NameMatch, name_compatibility

        for seed in range(5):
            rng = random.Random(seed)
            store = build_corpus(rng, n_users=40, n_papers=25, claim_rate=0.3,
                                 oversize_paper_every=5, oversize_author_count=12)
            view = store.snapshot()
            policy = MintPolicy()
            for user_id in view.users:
                for paper_id in view.papers:
                    if (user_id, paper_id) in view.claims:
                        continue
                    decision = evaluate_claim(view, policy, user_id, paper_id)
                    paper = view.paper(paper_id)
                    user = view.user(user_id)
                    email_ok = paper.submitter_email is not None and paper.submitter_email in user.emails
                    name = parse_name_parts(user.last_name, user.first_name)
                    slots = [
                        s for s in paper.author_strings
                        if name_compatibility(name, s) is not NameMatch.INCOMPATIBLE
                    ]
                    if decision is ClaimStatus.AUTO_ACCEPTED:
                        assert email_ok or slots
                    if not email_ok and len(paper.author_strings) > policy.auto_claim_max_authors:
                        assert decision in (ClaimStatus.PENDING, ClaimStatus.REJECTED)
