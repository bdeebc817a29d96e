import math
import random

import pytest

from simprank.data import Candidate, CandidateSet, LambdaVector
from simprank.metrics import corpus_mean, sari
from simprank.rerank import (
    aggregate_lm_logprob,
    combine_score,
    cosine_select,
    first_beam_select,
    oracle_select,
    rerank_select,
)

from support import random_candidate_set, random_corpus
from oracles import bf_best_candidate, bf_combined_score


def small_set(texts, logp_directs=None, set_id="s", references=None, source="a b c d e"):
    cands = []
    for i, text in enumerate(texts):
        lp = -1.0 - i if logp_directs is None else logp_directs[i]
        n = len(text.split())
        cands.append(Candidate(i, text, lp, -2.0, tuple([-0.5] * n)))
    refs = tuple(references) if references else None
    return CandidateSet(id=set_id, source=source, candidates=tuple(cands), references=refs)


class TestAggregateLmLogprob:
    def test_empty_is_zero(self):
        assert aggregate_lm_logprob([]) == 0.0

    def test_singleton(self):
        assert aggregate_lm_logprob([-1.5]) == -1.5

    def test_hand_sum(self):
        assert aggregate_lm_logprob([-1.0, -2.0, -0.5]) == -3.5

    def test_positive_entry_rejected(self):
        with pytest.raises(ValueError):
            aggregate_lm_logprob([-1.0, 0.1])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            aggregate_lm_logprob([float("-inf")])
        with pytest.raises(ValueError):
            aggregate_lm_logprob([float("nan")])

    def test_additivity(self, rng):
        for _ in range(100):
            a = [-rng.uniform(0.01, 9) for _ in range(rng.randint(0, 12))]
            b = [-rng.uniform(0.01, 9) for _ in range(rng.randint(0, 12))]
            assert aggregate_lm_logprob(a + b) == pytest.approx(
                aggregate_lm_logprob(a) + aggregate_lm_logprob(b), abs=1e-12
            )

    def test_appending_negative_term_strictly_decreases(self, rng):
        for _ in range(100):
            a = [-rng.uniform(0.01, 9) for _ in range(rng.randint(0, 12))]
            extra = -rng.uniform(0.01, 9)
            assert aggregate_lm_logprob(a + [extra]) < aggregate_lm_logprob(a)


class TestCombineScore:
    def test_hand_case(self):
        total, terms = combine_score(-1.0, -2.0, -3.0, 5, LambdaVector(0.5, 0.0, 0.1, 0.6))
        assert total == pytest.approx(2.2, abs=1e-12)
        assert terms[0] == pytest.approx(-0.5)
        assert terms[1] == 0.0
        assert terms[2] == pytest.approx(-0.3)
        assert terms[3] == pytest.approx(3.0)

    def test_identity_lambda_returns_direct(self, rng):
        for _ in range(20):
            d = -rng.uniform(0, 50)
            total, _ = combine_score(d, -rng.uniform(0, 50), -rng.uniform(0, 50), 7, LambdaVector(1, 0, 0, 0))
            assert total == d

    def test_zero_lambda_returns_zero(self):
        total, _ = combine_score(-3.0, -4.0, -5.0, 9, LambdaVector(0, 0, 0, 0))
        assert total == 0.0

    def test_total_equals_sum_of_terms(self, rng):
        for _ in range(50):
            lam = LambdaVector(*[rng.uniform(0, 1) for _ in range(4)])
            total, terms = combine_score(-rng.uniform(0, 30), -rng.uniform(0, 30), -rng.uniform(0, 30), rng.randint(1, 40), lam)
            assert total == pytest.approx(sum(terms), abs=1e-12)

    def test_bad_n_tokens_rejected(self):
        with pytest.raises(ValueError):
            combine_score(-1.0, -1.0, -1.0, 0, LambdaVector(1, 0, 0, 0))


class TestRerankSelect:
    def test_direct_only_matches_argmax_direct(self, rng):
        for i in range(50):
            cset = random_candidate_set(rng, f"d{i}")
            sel, _ = rerank_select(cset, LambdaVector(1, 0, 0, 0))
            best = max(cset.candidates, key=lambda c: c.logp_direct)
            assert sel.chosen_rank == best.rank

    def test_length_only_picks_longest(self):
        cset = small_set(["a b", "a b c d", "a b c"])
        sel, _ = rerank_select(cset, LambdaVector(0, 0, 0, 1))
        assert sel.chosen_text == "a b c d"

    def test_length_tie_goes_to_lowest_rank(self):
        cset = small_set(["a b", "c d", "e f"])
        sel, _ = rerank_select(cset, LambdaVector(0, 0, 0, 1))
        assert sel.chosen_rank == 0

    def test_ordering_matches_brute_force(self, rng):
        lam = LambdaVector(0.5, 0.0, 0.1, 0.6)
        for i in range(50):
            cset = random_candidate_set(rng, f"bf{i}")
            sel, ranked = rerank_select(cset, lam)
            assert sel.chosen_rank == bf_best_candidate(cset, lam).rank
            scores = [bf_combined_score(sc.candidate, lam) for sc in ranked]
            assert scores == sorted(scores, reverse=True)

    def test_output_is_permutation_with_identical_texts(self, rng):
        cset = random_candidate_set(rng, "perm")
        _, ranked = rerank_select(cset, LambdaVector(0.3, 0.2, 0.4, 0.7))
        assert sorted(sc.candidate.rank for sc in ranked) == list(range(len(cset.candidates)))
        by_rank = {sc.candidate.rank: sc.candidate.text for sc in ranked}
        for cand in cset.candidates:
            assert by_rank[cand.rank] == cand.text

    def test_positive_scaling_keeps_ordering(self, rng):
        for i in range(50):
            cset = random_candidate_set(rng, f"sc{i}")
            lam = LambdaVector(*[rng.uniform(0, 1) for _ in range(4)])
            _, base = rerank_select(cset, lam)
            base_order = [sc.candidate.rank for sc in base]
            for c in (0.5, 2.0, 10.0):
                scaled = LambdaVector(*(c * v for v in lam.as_tuple()))
                _, order = rerank_select(cset, scaled)
                assert [sc.candidate.rank for sc in order] == base_order

    def test_increasing_length_weight_never_demotes_longer(self, rng):
        # raising l4 keeps every longer-before-shorter pair in that order
        for i in range(25):
            cset = random_candidate_set(rng, f"mono{i}")
            base = LambdaVector(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 0.5))
            _, before = rerank_select(cset, base)
            bumped = LambdaVector(base.l1, base.l2, base.l3, base.l4 + rng.uniform(0.1, 1.0))
            _, after = rerank_select(cset, bumped)
            pos_before = {sc.candidate.rank: p for p, sc in enumerate(before)}
            pos_after = {sc.candidate.rank: p for p, sc in enumerate(after)}
            lengths = {c.rank: c.n_tokens() for c in cset.candidates}
            for a in cset.candidates:
                for b in cset.candidates:
                    if lengths[a.rank] > lengths[b.rank] and pos_before[a.rank] < pos_before[b.rank]:
                        assert pos_after[a.rank] < pos_after[b.rank]

    def test_score_components_reported(self, rng):
        cset = random_candidate_set(rng, "comp")
        _, ranked = rerank_select(cset, LambdaVector(0.5, 0.1, 0.2, 0.3))
        for sc in ranked:
            assert sc.combined_score == pytest.approx(sum(sc.components), abs=1e-12)


class TestFirstBeamSelect:
    def test_picks_rank_zero(self, rng):
        cset = random_candidate_set(rng, "fb")
        sel = first_beam_select(cset)
        assert sel.chosen_rank == 0
        assert sel.method == "first-beam"

    def test_singleton(self, rng):
        cset = random_candidate_set(rng, "fb1", k=1)
        assert first_beam_select(cset).chosen_rank == 0

    def test_trusts_beam_order_not_scores(self):
        # rank 0 has the worst direct score; the baseline still keeps it
        cset = small_set(["a", "b", "c"], logp_directs=[-9.0, -1.0, -2.0])
        assert first_beam_select(cset).chosen_rank == 0


class TestOracleSelect:
    def test_requires_references(self, rng):
        cset = random_candidate_set(rng, "orefs", with_references=False)
        with pytest.raises(ValueError, match="references"):
            oracle_select(cset)

    def test_singleton(self):
        cset = small_set(["a b"], references=["a b"])
        assert oracle_select(cset).chosen_rank == 0

    def test_candidate_equal_to_reference_wins(self):
        cset = small_set(["a b c d e x", "a b", "b a"], references=["a b"])
        sel = oracle_select(cset)
        assert sel.chosen_text == "a b"
        assert sel.score == 100.0

    def test_tie_goes_to_lowest_rank(self):
        cset = small_set(["a b", "a b"], references=["a b"])
        # identical candidates have identical SARI; rank 0 wins
        assert oracle_select(cset).chosen_rank == 0

    def test_oracle_dominates_any_rerank(self, rng):
        corpus = random_corpus(rng, 30)
        oracle_mean = corpus_mean(
            sari(s.source, oracle_select(s).chosen_text, s.references).final for s in corpus
        )
        for _ in range(20):
            lam = LambdaVector(*[rng.uniform(0, 1) for _ in range(4)])
            rr_mean = corpus_mean(
                sari(s.source, rerank_select(s, lam)[0].chosen_text, s.references).final
                for s in corpus
            )
            assert oracle_mean >= rr_mean


class TestCosineSelect:
    def test_identical_candidate_wins_with_fallback_vectors(self):
        cset = small_set(["x y z", "a b c d e"], source="a b c d e")
        sel = cosine_select(cset)
        assert sel.chosen_text == "a b c d e"
        assert sel.score == pytest.approx(1.0)

    def test_disjoint_tokens_give_zero(self):
        cset = small_set(["x y z"], source="a b c")
        assert cosine_select(cset).score == 0.0

    def test_hand_cosine_case(self):
        cset = small_set(["a b", "a d e"], source="a b c")
        sel = cosine_select(cset)
        assert sel.chosen_text == "a b"
        assert sel.score == pytest.approx(2 / math.sqrt(6))

    def test_embeddings_used_when_complete(self):
        # token overlap favors rank 0, embeddings favor rank 1
        cands = (
            Candidate(0, "a b c", -1.0, -1.0, (-0.1,) * 3, embedding=(1.0, 0.0)),
            Candidate(1, "w", -1.0, -1.0, (-0.1,), embedding=(0.0, 1.0)),
        )
        cset = CandidateSet("e", "a b c", cands, source_embedding=(0.0, 1.0))
        sel = cosine_select(cset)
        assert sel.chosen_rank == 1
        assert sel.score == pytest.approx(1.0)

    def test_token_fallback_when_source_embedding_missing(self):
        cands = (
            Candidate(0, "a b c", -1.0, -1.0, (-0.1,) * 3, embedding=(1.0, 0.0)),
            Candidate(1, "w", -1.0, -1.0, (-0.1,), embedding=(0.0, 1.0)),
        )
        cset = CandidateSet("e", "a b c", cands)
        assert cosine_select(cset).chosen_rank == 0

    def test_zero_embedding_counts_as_zero_similarity(self):
        cands = (
            Candidate(0, "w", -1.0, -1.0, (-0.1,), embedding=(0.0, 0.0)),
            Candidate(1, "q", -1.0, -1.0, (-0.1,), embedding=(0.5, 0.5)),
        )
        cset = CandidateSet("z", "a", cands, source_embedding=(1.0, 0.0))
        sel = cosine_select(cset)
        assert sel.chosen_rank == 1
