"""Four tokenization schemes behind one vocabulary interface.

BASE      BPE with an externally trained vocab file
OUR       BPE trained on the poetry corpus itself
SYLLABLE  rule-based syllable tokens with a leading-space marker
UNICODE   one token per character

Annotation pieces (rhyme schemes, meter letters, numbers, ``#``) are
kept atomic for OUR and SYLLABLE so frequent annotations stay single
tokens; UNICODE always splits to characters.
"""

from __future__ import annotations

import hashlib
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from . import phonology

SEP_TOKEN = "\n"
EOS_TOKEN = "<eos>"
UNK_TOKEN = "<unk>"
UNK_GLYPH = "\ufffd"

_PIECE_RE = re.compile(r" ?[^ ]+| ")
_WORD_RE = re.compile(r"^([\W\d_]*)([^\W\d_]+)([\W\d_]*)$", re.UNICODE)


class TokenizerKind(str, Enum):
    BASE = "base"
    OUR = "our"
    SYLLABLE = "syllable"
    UNICODE = "unicode"

    @classmethod
    def parse(cls, s: str) -> "TokenizerKind":
        try:
            return cls(s.lower())
        except ValueError:
            raise TokenizerError(f"unknown tokenizer kind {s!r}") from None


class TokenizerError(ValueError):
    pass


def pieces(line: str) -> list[str]:
    """Space-attached word pieces of a single line (lossless)."""
    return _PIECE_RE.findall(line)


def is_annotation_piece(piece: str) -> bool:
    """Annotation vocabulary: '#', numbers, scheme/meter letter strings, NaN."""
    core = piece[1:] if piece.startswith(" ") else piece
    if not core:
        return False
    return (core == "#" or core == "NaN" or core.isdigit()
            or (core.isascii() and core.isupper() and core.isalpha()))


@dataclass
class Vocab:
    kind: TokenizerKind
    tokens: list[str]
    protected: set[str] = field(default_factory=set)
    id_of: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id_of:
            self.id_of = {t: i for i, t in enumerate(self.tokens)}
        if len(self.id_of) != len(self.tokens):
            raise TokenizerError("duplicate tokens in vocabulary")
        for special in (SEP_TOKEN, EOS_TOKEN, UNK_TOKEN):
            if special not in self.id_of:
                raise TokenizerError(f"special token {special!r} missing")

    def __len__(self):
        return len(self.tokens)

    @property
    def sep_id(self):
        return self.id_of[SEP_TOKEN]

    @property
    def eos_id(self):
        return self.id_of[EOS_TOKEN]

    @property
    def unk_id(self):
        return self.id_of[UNK_TOKEN]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.kind.value.encode())
        for t in self.tokens:
            h.update(b"\x00" + t.encode("utf-8"))
        return h.hexdigest()[:16]


def _escape(token: str) -> str:
    return token.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _unescape(s: str) -> str:
    out, i = [], 0
    while i < len(s):
        if s[i] == "\\" and i + 1 < len(s):
            out.append({"t": "\t", "n": "\n", "\\": "\\"}.get(s[i + 1], s[i + 1]))
            i += 2
        else:
            out.append(s[i])
            i += 1
    return "".join(out)


def save_vocab(vocab: Vocab, path) -> None:
    """One ``token<TAB>id`` per line, headed by kind/special/protected lines."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("#! verseforge-vocab v1\n")
        f.write(f"#! kind\t{vocab.kind.value}\n")
        for name, tok in (("sep", SEP_TOKEN), ("eos", EOS_TOKEN), ("unk", UNK_TOKEN)):
            f.write(f"#! special\t{name}\t{_escape(tok)}\n")
        for tok in sorted(vocab.protected):
            f.write(f"#! protected\t{_escape(tok)}\n")
        for i, tok in enumerate(vocab.tokens):
            f.write(f"{_escape(tok)}\t{i}\n")


def load_vocab(path) -> Vocab:
    kind = None
    protected = set()
    tokens = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#!"):
                parts = line[2:].strip().split("\t")
                if parts[0] == "kind":
                    kind = TokenizerKind.parse(parts[1])
                elif parts[0] == "protected":
                    protected.add(_unescape(parts[1]))
                continue
            try:
                tok, idx = line.rsplit("\t", 1)
                idx = int(idx)
            except ValueError:
                raise TokenizerError(f"{path}:{lineno}: expected token<TAB>id") from None
            if idx != len(tokens):
                raise TokenizerError(f"{path}:{lineno}: ids must be dense, got {idx}")
            tokens.append(_unescape(tok))
    if kind is None:
        raise TokenizerError(f"{path}: missing '#! kind' header")
    return Vocab(kind, tokens, protected)


# ---------------------------------------------------------------------------
# piece-level tokenization

def syllable_piece_tokens(piece: str, syllabifier=None) -> list[str]:
    if is_annotation_piece(piece):
        return [piece]
    space = " " if piece.startswith(" ") else ""
    core = piece[len(space):]
    m = _WORD_RE.match(core)
    if m is None:
        return [piece]
    pre, letters, post = m.groups()
    split = phonology.syllabify(letters, syllabifier)
    if len(split) == 0:
        return [piece]
    sylls = list(split.syllables)
    sylls[0] = space + pre + sylls[0]
    sylls[-1] = sylls[-1] + post
    return sylls


def bpe_piece_tokens(piece: str, vocab: Vocab) -> list[str]:
    if is_annotation_piece(piece) and piece in vocab.id_of:
        return [piece]
    symbols = list(piece)
    while len(symbols) > 1:
        best_id, best_at = None, None
        for i in range(len(symbols) - 1):
            merged = symbols[i] + symbols[i + 1]
            mid = vocab.id_of.get(merged)
            if mid is not None and (best_id is None or mid < best_id):
                best_id, best_at = mid, i
        if best_id is None:
            break
        # merge every occurrence of this pair, leftmost first
        pair = (symbols[best_at], symbols[best_at + 1])
        out, i = [], 0
        while i < len(symbols):
            if i + 1 < len(symbols) and (symbols[i], symbols[i + 1]) == pair:
                out.append(symbols[i] + symbols[i + 1])
                i += 2
            else:
                out.append(symbols[i])
                i += 1
        symbols = out
    return symbols


def line_tokens(vocab: Vocab, line: str, syllabifier=None) -> list[str]:
    if vocab.kind is TokenizerKind.UNICODE:
        return list(line)
    toks = []
    for piece in pieces(line):
        if vocab.kind is TokenizerKind.SYLLABLE:
            toks.extend(syllable_piece_tokens(piece, syllabifier))
        else:
            toks.extend(bpe_piece_tokens(piece, vocab))
    return toks


def encode(vocab: Vocab, text: str, syllabifier=None) -> list[int]:
    """Token ids; lines are joined by the separator id.  Tokens missing
    from the vocabulary become the unknown id (never an exception)."""
    ids = []
    for i, line in enumerate(text.split("\n")):
        if i:
            ids.append(vocab.sep_id)
        for tok in line_tokens(vocab, line, syllabifier):
            ids.append(vocab.id_of.get(tok, vocab.unk_id))
    return ids


def decode(vocab: Vocab, ids) -> str:
    out = []
    for i in ids:
        if i == vocab.eos_id:
            continue
        if i == vocab.unk_id:
            out.append(UNK_GLYPH)
        else:
            out.append(vocab.tokens[i])
    return "".join(out)


def count_unknown(vocab: Vocab, ids) -> int:
    return sum(1 for i in ids if i == vocab.unk_id)


def chars_per_token(vocab: Vocab, sample_lines, syllabifier=None) -> float:
    """Average characters per token over a sample of lines."""
    n_chars = n_tokens = 0
    for line in sample_lines:
        n_chars += len(line)
        n_tokens += len(line_tokens(vocab, line, syllabifier))
    if n_tokens == 0:
        raise TokenizerError("empty sample")
    return n_chars / n_tokens


# ---------------------------------------------------------------------------
# vocabulary construction

def _collect_protected(corpus_lines) -> tuple[set[str], Counter]:
    protected = set()
    piece_freq = Counter()
    for line in corpus_lines:
        for piece in pieces(line):
            if is_annotation_piece(piece):
                protected.add(piece)
            else:
                piece_freq[piece] += 1
    return protected, piece_freq


def build_unicode_vocab(corpus_lines) -> Vocab:
    chars = sorted({ch for line in corpus_lines for ch in line} - {"\n"})
    return Vocab(TokenizerKind.UNICODE, [SEP_TOKEN, EOS_TOKEN, UNK_TOKEN] + chars)


def build_syllable_vocab(corpus_lines, syllabifier=None) -> Vocab:
    protected, piece_freq = _collect_protected(corpus_lines)
    seen = set()
    for piece in piece_freq:
        seen.update(syllable_piece_tokens(piece, syllabifier))
    tokens = [SEP_TOKEN, EOS_TOKEN, UNK_TOKEN] + sorted(protected) + sorted(seen - protected)
    return Vocab(TokenizerKind.SYLLABLE, tokens, protected)


def train_bpe(corpus_lines, vocab_size: int,
              kind: TokenizerKind = TokenizerKind.OUR) -> Vocab:
    """Standard BPE merge training over space-attached word pieces.

    Merges the most frequent adjacent pair until the vocabulary budget is
    reached; ties break on the lexicographically smaller pair, so the
    merge list is deterministic.
    """
    corpus_lines = list(corpus_lines)
    if not any(line for line in corpus_lines):
        raise TokenizerError("cannot train BPE on an empty corpus")
    protected, piece_freq = _collect_protected(corpus_lines)
    alphabet = sorted({ch for line in corpus_lines for ch in line} - {"\n"} - protected)
    base = [SEP_TOKEN, EOS_TOKEN, UNK_TOKEN] + sorted(protected) + alphabet
    if vocab_size < len(base):
        raise TokenizerError(
            f"vocab_size {vocab_size} below alphabet+specials ({len(base)})")
    words = {tuple(piece): freq for piece, freq in piece_freq.items()}
    tokens = list(base)
    known = set(tokens)
    while len(tokens) < vocab_size:
        pair_counts = Counter()
        for symbols, freq in words.items():
            for a, b in zip(symbols, symbols[1:]):
                pair_counts[(a, b)] += freq
        if not pair_counts:
            break
        top = max(pair_counts.values())
        pair = min(p for p, c in pair_counts.items() if c == top)
        merged = pair[0] + pair[1]
        if merged not in known:
            tokens.append(merged)
            known.add(merged)
        new_words = {}
        for symbols, freq in words.items():
            out, i = [], 0
            while i < len(symbols):
                if i + 1 < len(symbols) and (symbols[i], symbols[i + 1]) == pair:
                    out.append(merged)
                    i += 2
                else:
                    out.append(symbols[i])
                    i += 1
            new_words[tuple(out)] = new_words.get(tuple(out), 0) + freq
        words = new_words
    return Vocab(kind, tokens, protected)


def build_vocab(kind: TokenizerKind, corpus_lines, vocab_size: int = 40000,
                syllabifier=None) -> Vocab:
    if kind is TokenizerKind.UNICODE:
        return build_unicode_vocab(corpus_lines)
    if kind is TokenizerKind.SYLLABLE:
        return build_syllable_vocab(corpus_lines, syllabifier)
    return train_bpe(corpus_lines, vocab_size, kind)
