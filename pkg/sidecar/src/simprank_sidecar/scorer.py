"""Candidate generation and scoring against user-supplied checkpoints.

Emits records in the simprank candidate-file schema: beam-search hypotheses
with raw joint log-probabilities from the direct model, teacher-forced
channel log-probabilities of reconstructing the source, per-word masked-LM
log-probabilities, and optional unit-norm sentence embeddings. Everything
runs greedily/beam-only with no sampling, so identical inputs and config
yield identical files.
"""

from __future__ import annotations

import json
from typing import Sequence

import torch
from transformers import (
    AutoModel,
    AutoModelForMaskedLM,
    AutoModelForSeq2SeqLM,
    AutoTokenizer,
)

from .config import ScorerConfig

_LM_BATCH = 64


class ScorerError(RuntimeError):
    """Model loading or generation failed in a way that must not be skipped."""


class CandidateScorer:
    """Lazily loads the configured checkpoints and scores sentences with them."""

    def __init__(self, config: ScorerConfig):
        self.config = config
        self._models: dict[str, tuple] = {}

    def _load(self, kind: str, path: str, loader):
        if kind not in self._models:
            try:
                tokenizer = AutoTokenizer.from_pretrained(path)
                model = loader.from_pretrained(path).to(self.config.device).eval()
            except Exception as exc:
                raise ScorerError(f"cannot load {kind} model from {path!r}: {exc}") from exc
            self._models[kind] = (tokenizer, model)
        return self._models[kind]

    def _direct(self):
        return self._load("direct", self.config.direct_model, AutoModelForSeq2SeqLM)

    def _channel(self):
        return self._load("channel", self.config.channel_model, AutoModelForSeq2SeqLM)

    def _lm(self):
        return self._load("lm", self.config.lm_model, AutoModelForMaskedLM)

    def _embedder(self):
        if self.config.embedding_model is None:
            raise ScorerError("no embedding model configured")
        return self._load("embedding", self.config.embedding_model, AutoModel)

    @torch.no_grad()
    def generate_candidates(self, source: str) -> list[tuple[str, float]]:
        """Beam hypotheses with raw joint log-probabilities, best first.

        Duplicate and empty hypotheses are dropped when dedup is on, so the
        effective k can be smaller than configured; an all-empty beam is an
        error, never a silent skip.
        """
        tokenizer, model = self._direct()
        enc = tokenizer(
            source, return_tensors="pt", truncation=True, max_length=self.config.max_length
        ).to(self.config.device)
        kwargs = dict(
            num_beams=self.config.k,
            num_return_sequences=self.config.k,
            max_length=self.config.max_length,
            min_new_tokens=1,
            do_sample=False,
            output_scores=True,
            return_dict_in_generate=True,
        )
        if self.config.k > 1:
            # beam order must match raw log-probability order
            kwargs.update(length_penalty=0.0, early_stopping=True)
        out = model.generate(**enc, **kwargs)
        beam_indices = getattr(out, "beam_indices", None)  # absent for k=1 greedy search
        if beam_indices is not None:
            transition = model.compute_transition_scores(
                out.sequences, out.scores, beam_indices, normalize_logits=True
            )
        else:
            transition = model.compute_transition_scores(
                out.sequences, out.scores, normalize_logits=True
            )
        pad_id = tokenizer.pad_token_id
        hypotheses = []
        for seq, scores in zip(out.sequences, transition):
            generated = seq[1:]
            mask = torch.isfinite(scores)
            if pad_id is not None:
                mask &= generated[: scores.shape[0]] != pad_id
            logp = float(scores[mask].sum().item())
            text = tokenizer.decode(seq, skip_special_tokens=True).strip()
            if self.config.length_normalize and text:
                logp /= len(text.split())
            hypotheses.append((text, min(logp, 0.0)))
        hypotheses.sort(key=lambda h: -h[1])

        kept: list[tuple[str, float]] = []
        seen: set[str] = set()
        for text, logp in hypotheses:
            if not text:
                continue
            if self.config.dedup and text in seen:
                continue
            seen.add(text)
            kept.append((text, logp))
        if not kept:
            raise ScorerError(f"empty generation for source {source!r}")
        return kept

    @torch.no_grad()
    def score_channel(self, source: str, candidate: str) -> float:
        """Teacher-forced log-probability of reproducing the source from the candidate."""
        tokenizer, model = self._channel()
        enc = tokenizer(
            candidate, return_tensors="pt", truncation=True, max_length=self.config.max_length
        ).to(self.config.device)
        labels = tokenizer(
            text_target=source,
            return_tensors="pt",
            truncation=True,
            max_length=self.config.max_length,
        ).input_ids.to(self.config.device)
        logits = model(input_ids=enc.input_ids, attention_mask=enc.attention_mask, labels=labels).logits
        logprobs = logits.log_softmax(dim=-1)
        token_lp = logprobs.gather(-1, labels.unsqueeze(-1)).squeeze(-1)
        mask = torch.ones_like(labels, dtype=torch.bool)
        if tokenizer.pad_token_id is not None:
            mask = labels != tokenizer.pad_token_id
        return min(float(token_lp[mask].sum().item()), 0.0)

    @torch.no_grad()
    def lm_token_logps(self, text: str) -> list[float]:
        """Per whitespace-word masked log-probabilities.

        Each word is scored by masking its subwords one at a time and summing
        the log-probabilities the model assigns to the original subwords; the
        output has exactly one value per whitespace token of the input.
        """
        tokenizer, model = self._lm()
        if tokenizer.mask_token_id is None:
            raise ScorerError(f"lm model tokenizer has no mask token: {self.config.lm_model!r}")
        words = text.split()
        if not words:
            return []
        ids: list[int] = []
        if tokenizer.cls_token_id is not None:
            ids.append(tokenizer.cls_token_id)
        spans = []
        for word in words:
            piece_ids = tokenizer(word, add_special_tokens=False).input_ids
            if not piece_ids:
                piece_ids = [tokenizer.unk_token_id]
            spans.append((len(ids), len(ids) + len(piece_ids)))
            ids.extend(piece_ids)
        if tokenizer.sep_token_id is not None:
            ids.append(tokenizer.sep_token_id)

        base = torch.tensor([ids], device=self.config.device)
        positions = [p for start, end in spans for p in range(start, end)]
        logp_at: dict[int, float] = {}
        for chunk_start in range(0, len(positions), _LM_BATCH):
            chunk = positions[chunk_start : chunk_start + _LM_BATCH]
            batch = base.repeat(len(chunk), 1)
            for row, pos in enumerate(chunk):
                batch[row, pos] = tokenizer.mask_token_id
            logits = model(input_ids=batch, attention_mask=torch.ones_like(batch)).logits
            logprobs = logits.log_softmax(dim=-1)
            for row, pos in enumerate(chunk):
                logp_at[pos] = float(logprobs[row, pos, ids[pos]].item())
        return [
            min(sum(logp_at[p] for p in range(start, end)), 0.0) for start, end in spans
        ]

    @torch.no_grad()
    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        """Mean-pooled, L2-normalized sentence vector per text."""
        tokenizer, model = self._embedder()
        enc = tokenizer(
            list(texts),
            return_tensors="pt",
            padding=True,
            truncation=True,
            max_length=self.config.max_length,
        ).to(self.config.device)
        hidden = model(**enc).last_hidden_state
        mask = enc.attention_mask.unsqueeze(-1).to(hidden.dtype)
        pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1.0)
        normed = pooled / pooled.norm(dim=-1, keepdim=True).clamp(min=1e-12)
        return [[float(x) for x in row] for row in normed.cpu()]

    def score_record(
        self,
        index: int,
        source: str,
        references: Sequence[str] | None = None,
        with_embeddings: bool = False,
    ) -> dict:
        """One schema-ready candidate record for a source sentence."""
        record: dict = {"id": f"s{index:04d}", "source": source}
        if references:
            record["references"] = list(references)
        hypotheses = self.generate_candidates(source)
        texts = [text for text, _ in hypotheses]
        embeddings = None
        if with_embeddings:
            embeddings = self.embed(texts)
            record["source_embedding"] = self.embed([source])[0]
        candidates = []
        for rank, (text, logp_direct) in enumerate(hypotheses):
            cand = {
                "rank": rank,
                "text": text,
                "logp_direct": logp_direct,
                "logp_channel": self.score_channel(source, text),
                "lm_token_logps": self.lm_token_logps(text),
            }
            if embeddings is not None:
                cand["embedding"] = embeddings[rank]
            candidates.append(cand)
        record["candidates"] = candidates
        return record


def score_file(
    scorer: CandidateScorer,
    sources: Sequence[str],
    references: Sequence[Sequence[str]] | None,
    out_path: str,
    with_embeddings: bool = False,
    progress: bool = False,
) -> None:
    """Score every source line and write one JSON record per line."""
    with open(out_path, "w", encoding="utf-8") as fh:
        for i, source in enumerate(sources):
            refs = references[i] if references is not None else None
            record = scorer.score_record(i, source, refs, with_embeddings=with_embeddings)
            fh.write(json.dumps(record, ensure_ascii=False, separators=(",", ":")) + "\n")
            if progress:
                k_eff = len(record["candidates"])
                note = "" if k_eff == scorer.config.k else f" (k_effective={k_eff})"
                print(f"scored {record['id']}: {k_eff} candidates{note}", flush=True)
