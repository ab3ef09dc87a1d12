"""Subword segmentation (characters, syllables, hyphenation, BPE) and
open-vocabulary language-model evaluation with character-level perplexity."""

from .core import (
    BOUNDARY, Scheme, SchemeKind, UnitStream, Vocabulary, build_vocabulary, decode_stream, encode_stream,
    to_char_stream, tokenize_words,
)
from .errors import ConfigError, DataError, ParseError, SylsegError

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY", "Scheme", "SchemeKind", "UnitStream", "Vocabulary", "build_vocabulary", "decode_stream",
    "encode_stream", "to_char_stream", "tokenize_words", "ConfigError", "DataError", "ParseError",
    "SylsegError",
]
