"""Builds tiny random-weight checkpoints so the suite runs fully offline.

The checkpoints have the exact same on-disk structure as published ones
(config.json + safetensors + tokenizer files), just minuscule dimensions and
seeded random weights; quality is irrelevant here, only the contracts are.
"""

import pytest
import torch
from tokenizers import Tokenizer, models, pre_tokenizers
from transformers import (
    BartConfig,
    BartForConditionalGeneration,
    BertConfig,
    BertForMaskedLM,
    PreTrainedTokenizerFast,
)

WORDS = (
    "the a cat dog man woman sat ran walked playing jumped on in near "
    "big small old happy mat tree house river road very quite . ,"
).split()

SOURCES = [
    "the old man walked near the river .",
    "a small cat sat on the mat .",
    "the happy dog ran in the big house .",
    "a woman walked on the road near the tree .",
    "the small dog jumped very happy on the mat .",
]

REFS = [
    "the man walked near the river .",
    "a cat sat on the mat .",
    "the dog ran in the house .",
    "a woman walked near the tree .",
    "the dog jumped on the mat .",
]


def build_seq2seq_checkpoint(path, seed):
    specials = ["<pad>", "<s>", "</s>", "<unk>", "<mask>"]
    vocab = {tok: i for i, tok in enumerate(specials + WORDS)}
    backend = Tokenizer(models.WordLevel(vocab, unk_token="<unk>"))
    backend.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=backend,
        pad_token="<pad>",
        bos_token="<s>",
        eos_token="</s>",
        unk_token="<unk>",
        mask_token="<mask>",
    )
    torch.manual_seed(seed)
    config = BartConfig(
        vocab_size=len(vocab),
        d_model=32,
        encoder_layers=1,
        decoder_layers=1,
        encoder_attention_heads=2,
        decoder_attention_heads=2,
        encoder_ffn_dim=64,
        decoder_ffn_dim=64,
        max_position_embeddings=128,
        pad_token_id=vocab["<pad>"],
        bos_token_id=vocab["<s>"],
        eos_token_id=vocab["</s>"],
        decoder_start_token_id=vocab["</s>"],
    )
    BartForConditionalGeneration(config).save_pretrained(path)
    tokenizer.save_pretrained(path)


def build_masked_lm_checkpoint(path, seed):
    specials = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    # "playing" is deliberately absent: it wordpieces into play + ##ing
    pieces = [w for w in WORDS if w != "playing"] + ["play", "##ing"]
    vocab = {tok: i for i, tok in enumerate(specials + pieces)}
    backend = Tokenizer(models.WordPiece(vocab, unk_token="[UNK]"))
    backend.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=backend,
        pad_token="[PAD]",
        unk_token="[UNK]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
        pad_token_id=vocab["[PAD]"],
    )
    BertForMaskedLM(config).save_pretrained(path)
    tokenizer.save_pretrained(path)


@pytest.fixture(scope="session")
def checkpoints(tmp_path_factory):
    root = tmp_path_factory.mktemp("checkpoints")
    direct = root / "direct"
    channel = root / "channel"
    lm = root / "lm"
    build_seq2seq_checkpoint(direct, seed=11)
    build_seq2seq_checkpoint(channel, seed=22)
    build_masked_lm_checkpoint(lm, seed=33)
    return {"direct": str(direct), "channel": str(channel), "lm": str(lm)}


@pytest.fixture(scope="session")
def source_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("inputs")
    sources = root / "sources.txt"
    refs = root / "refs.ref0"
    sources.write_text("".join(s + "\n" for s in SOURCES), encoding="utf-8")
    refs.write_text("".join(r + "\n" for r in REFS), encoding="utf-8")
    return {"sources": str(sources), "refs": str(refs)}
