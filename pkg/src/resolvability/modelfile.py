"""JSON model files.

Schema (``version`` must be ``"resolvability-model/1"``)::

    {
      "version": "resolvability-model/1",
      "mode": "iid" | "alternating" | "explicit-n",
      "n": 2,                              # explicit-n only
      "sources":  [{"alphabet": [...], "pmf": [...]}, ...],
      "channels": [{"input_alphabet": [...], "output_alphabet": [...],
                    "matrix": [[...], ...]}, ...],
      "target":   {"alphabet": [...], "pmf": [...]}      # optional
    }

``iid`` takes one source and one channel, ``alternating`` two of each
(first for odd n, second for even n).  ``explicit-n`` takes one source over
``X**n`` and one channel ``X**n -> Y**n`` written out in full.  The optional
target is a per-letter output distribution (n-letter in explicit-n mode);
without it the target is the model's own output.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError, ValidationError
from .probability import (
    DEFAULT_BUDGET,
    PRODUCT_SUM_TOL,
    Channel,
    FiniteDistribution,
    MemorylessModel,
    output_distribution,
    product_alphabet,
    product_channel,
    product_distribution,
)

VERSION = "resolvability-model/1"
MODES = ("iid", "alternating", "explicit-n")


@dataclass(frozen=True)
class ModelFile:
    version: str
    mode: str
    sources: tuple[FiniteDistribution, ...]
    channels: tuple[Channel, ...]
    target: FiniteDistribution | None = None
    n: int | None = None

    @property
    def memoryless(self) -> MemorylessModel:
        if self.mode == "explicit-n":
            raise DomainError("explicit-n models have no per-letter structure")
        return MemorylessModel(tuple(zip(self.sources, self.channels)), self.mode)

    def _check_n(self, n: int):
        if self.mode == "explicit-n" and n != self.n:
            raise DomainError(f"explicit-n model is fixed at n={self.n}, got n={n}")

    def source_n(self, n: int, budget: int = DEFAULT_BUDGET) -> FiniteDistribution:
        self._check_n(n)
        if self.mode == "explicit-n":
            return self.sources[0]
        return product_distribution(self.memoryless.at(n), budget)

    def channel_n(self, n: int, budget: int = DEFAULT_BUDGET) -> Channel:
        self._check_n(n)
        if self.mode == "explicit-n":
            return self.channels[0]
        W = self.channels if self.mode == "alternating" else self.channels[0]
        return product_channel(W, n, self.mode, budget)

    def letter_output(self, n: int) -> FiniteDistribution:
        P, W = self.memoryless.component(n)
        return output_distribution(P, W)

    def output_n(self, n: int, budget: int = DEFAULT_BUDGET) -> FiniteDistribution:
        """The model's own n-letter output distribution."""
        self._check_n(n)
        if self.mode == "explicit-n":
            return output_distribution(self.sources[0], self.channels[0])
        letter = self.letter_output(n)
        if letter.size ** n > budget:
            from .errors import ResourceError

            raise ResourceError(f"{letter.size ** n} output sequences exceeds the budget {budget}")
        pmf = letter.pmf
        for _ in range(n - 1):
            pmf = np.kron(pmf, letter.pmf)
        return FiniteDistribution(product_alphabet(letter.alphabet, n), pmf, atol=PRODUCT_SUM_TOL)

    def target_n(self, n: int, budget: int = DEFAULT_BUDGET) -> FiniteDistribution:
        """Target output over ``Y**n``: the file's target if given, else the model output."""
        if self.target is None:
            return self.output_n(n, budget)
        self._check_n(n)
        if self.mode == "explicit-n":
            return self.target
        pmf = self.target.pmf
        for _ in range(n - 1):
            pmf = np.kron(pmf, self.target.pmf)
        return FiniteDistribution(product_alphabet(self.target.alphabet, n), pmf, atol=PRODUCT_SUM_TOL)

    def letter_targets(self) -> list[FiniteDistribution]:
        """Per-component single-letter targets for the output-matching optimization."""
        if self.mode == "explicit-n":
            return [self.target or output_distribution(self.sources[0], self.channels[0])]
        if self.target is not None:
            return [self.target] * len(self.sources)
        return [output_distribution(P, W) for P, W in zip(self.sources, self.channels)]


def _dist(obj, where: str) -> FiniteDistribution:
    try:
        return FiniteDistribution(tuple(obj["alphabet"]), obj["pmf"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{where}: expected 'alphabet' and 'pmf' ({exc})") from None
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def _channel(obj, where: str) -> Channel:
    try:
        return Channel(tuple(obj["input_alphabet"]), tuple(obj["output_alphabet"]), obj["matrix"])
    except (KeyError, TypeError) as exc:
        raise ParseError(
            f"{where}: expected 'input_alphabet', 'output_alphabet' and 'matrix' ({exc})"
        ) from None
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def load_model(data: dict) -> ModelFile:
    if not isinstance(data, dict):
        raise ParseError("model file must hold a JSON object")
    version = data.get("version")
    if version != VERSION:
        raise ValidationError(f"unrecognized version tag {version!r} (expected {VERSION!r})")
    mode = data.get("mode", "iid")
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}")
    sources = tuple(_dist(s, f"source {i}") for i, s in enumerate(data.get("sources", [])))
    channels = tuple(_channel(c, f"channel {i}") for i, c in enumerate(data.get("channels", [])))
    want = 2 if mode == "alternating" else 1
    if len(sources) != want or len(channels) != want:
        raise ValidationError(f"{mode} mode needs {want} source(s) and {want} channel(s)")
    for i, (P, W) in enumerate(zip(sources, channels)):
        if P.alphabet != W.input_alphabet:
            raise ValidationError(f"source {i} alphabet does not match channel {i} input alphabet")
    if mode == "alternating" and channels[0].output_alphabet != channels[1].output_alphabet:
        raise ValidationError("alternating channels must share an output alphabet")
    target = _dist(data["target"], "target") if data.get("target") is not None else None
    if target is not None and set(target.alphabet) != set(channels[0].output_alphabet):
        raise ValidationError("target alphabet does not match the channel output alphabet")
    if target is not None and target.alphabet != channels[0].output_alphabet:
        target = target.reorder(channels[0].output_alphabet)
    n = None
    if mode == "explicit-n":
        try:
            n = int(data["n"])
        except (KeyError, TypeError, ValueError):
            raise ValidationError("explicit-n mode needs an integer 'n'") from None
        if n < 1:
            raise ValidationError("n must be >= 1")
    return ModelFile(version, mode, sources, channels, target, n)


def parse_model_file(path: str | Path) -> ModelFile:
    """Read and validate a model file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    return load_model(data)


def model_to_dict(
    sources, channels, mode: str = "iid", target: FiniteDistribution | None = None, n: int | None = None
) -> dict:
    """Serialize components back into the file schema (used by tests and examples)."""
    out = {
        "version": VERSION,
        "mode": mode,
        "sources": [s.to_dict() for s in sources],
        "channels": [c.to_dict() for c in channels],
    }
    if target is not None:
        out["target"] = target.to_dict()
    if n is not None:
        out["n"] = n
    return out
