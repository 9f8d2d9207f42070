"""End-to-end per-tweet detection and masking, plus the parallel runner.

Worker processes rebuild their state (gazetteer, pools, adapter clients)
from the picklable PipelineConfig; per-tweet seeding makes results
independent of worker count and processing order.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

from .adapter_client import AdapterClient
from .config import PipelineConfig
from .detectors import run_regex_detectors
from .masking import (
    ReplacementPolicy,
    ValuePool,
    mask_tweet,
    resolve_spans,
    validate_pool,
)
from .model import Detection, MaskedTweet, Tweet
from .recognize import (
    Gazetteer,
    RecognizerHandle,
    RecognizerKind,
    recognize_builtin,
    recognize_external,
    union_combine,
)
from .tokenize import tokenize


class PipelineState:
    """Per-process materialization of a PipelineConfig."""

    def __init__(self, config: PipelineConfig, need_masking: bool = False):
        self.config = config
        self.handles: tuple[RecognizerHandle, ...] = config.recognizers()
        self.gazetteer: Gazetteer | None = None
        if any(h.kind is RecognizerKind.BUILTIN for h in self.handles):
            self.gazetteer = config.gazetteer()
        self.clients: dict[str, AdapterClient] = {}
        for handle in self.handles:
            if handle.kind is RecognizerKind.EXTERNAL:
                self.clients[handle.name] = AdapterClient(
                    handle.name, handle.command,
                    timeout=config.adapter_timeout)
        self.policy: ReplacementPolicy | None = None
        self.pool: ValuePool | None = None
        if need_masking:
            self.policy = config.policy()
            self.pool = config.value_pool()
            validate_pool(self.pool, self.policy)

    def close(self) -> None:
        for client in self.clients.values():
            client.close()

    def detect(self, tweet: Tweet) -> list[Detection]:
        cfg = self.config
        regex_hits = run_regex_detectors(
            tweet, id_min_length=cfg.id_min_length,
            id_min_letters=cfg.id_min_letters,
            id_min_digits=cfg.id_min_digits,
            zip_cues=frozenset(cfg.zip_cue_words) or None)
        tokens = tokenize(tweet.text)
        recognized = []
        for handle in self.handles:
            if handle.kind is RecognizerKind.BUILTIN:
                hits = recognize_builtin(tweet, tokens, self.gazetteer,
                                         source=handle.name)
            else:
                hits = recognize_external(tweet, handle,
                                          self.clients[handle.name])
            recognized.append((handle.name, hits))
        combined = (union_combine(recognized, tokens, tweet.text)
                    if recognized else [])
        return resolve_spans(regex_hits + list(combined))

    def mask(self, tweet: Tweet) -> MaskedTweet:
        assert self.policy is not None and self.pool is not None
        cfg = self.config

        def residual(text: str):
            return run_regex_detectors(
                Tweet(id=tweet.id, text=text, author_verified=False),
                id_min_length=cfg.id_min_length,
                id_min_letters=cfg.id_min_letters,
                id_min_digits=cfg.id_min_digits,
                zip_cues=frozenset(cfg.zip_cue_words) or None)

        return mask_tweet(tweet, self.detect(tweet), self.policy, self.pool,
                          residual_detector=residual)


_WORKER_STATE: PipelineState | None = None


def _init_worker(config: PipelineConfig, need_masking: bool) -> None:
    global _WORKER_STATE
    _WORKER_STATE = PipelineState(config, need_masking=need_masking)


def _detect_chunk(tweets: Sequence[Tweet]) -> list[tuple[str, list[Detection]]]:
    assert _WORKER_STATE is not None
    return [(t.id, _WORKER_STATE.detect(t)) for t in tweets]


def _mask_chunk(tweets: Sequence[Tweet]) -> list[MaskedTweet]:
    assert _WORKER_STATE is not None
    return [_WORKER_STATE.mask(t) for t in tweets]


def _chunks(items: Sequence[Tweet], size: int) -> Iterable[Sequence[Tweet]]:
    for i in range(0, len(items), size):
        yield items[i:i + size]


def run_detect(tweets: Sequence[Tweet], config: PipelineConfig,
               jobs: int = 1) -> dict[str, list[Detection]]:
    """Detect over a corpus; identical results for any job count."""
    if jobs <= 1:
        state = PipelineState(config)
        try:
            return {t.id: state.detect(t) for t in tweets}
        finally:
            state.close()
    out: dict[str, list[Detection]] = {}
    chunk = max(1, len(tweets) // (jobs * 4) or 1)
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                             initargs=(config, False)) as pool:
        for batch in pool.map(_detect_chunk, _chunks(tweets, chunk)):
            out.update(batch)
    return out


def run_mask(tweets: Sequence[Tweet], config: PipelineConfig,
             jobs: int = 1) -> list[MaskedTweet]:
    """Mask over a corpus; byte-identical output for any job count."""
    if jobs <= 1:
        state = PipelineState(config, need_masking=True)
        try:
            return [state.mask(t) for t in tweets]
        finally:
            state.close()
    out: list[MaskedTweet] = []
    chunk = max(1, len(tweets) // (jobs * 4) or 1)
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                             initargs=(config, True)) as pool:
        for batch in pool.map(_mask_chunk, _chunks(tweets, chunk)):
            out.extend(batch)
    return out
